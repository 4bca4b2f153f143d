/*
 * Copyright 2026 The epointda Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "epointda/numerics/variable.h"

#include <unordered_set>

namespace epointda {
namespace numerics {

NdArray& GraphNode::EnsureGrad() {
  if (grad.shape() != value.shape() || grad.size() != value.size()) {
    grad = NdArray(value.shape(), 0.0);
  }
  return grad;
}

Variable Variable::Parameter(NdArray value) {
  auto node = std::make_shared<GraphNode>();
  node->value = std::move(value);
  node->requires_grad = true;
  return Variable(std::move(node));
}

Variable Variable::Constant(NdArray value) {
  auto node = std::make_shared<GraphNode>();
  node->value = std::move(value);
  return Variable(std::move(node));
}

Variable Variable::FromOp(NdArray value, std::vector<Variable> inputs,
                          std::function<void(GraphNode&)> backward) {
  auto node = std::make_shared<GraphNode>();
  node->value = std::move(value);
  for (const Variable& input : inputs) {
    if (input.requires_grad()) node->requires_grad = true;
  }
  if (node->requires_grad) {
    node->inputs.reserve(inputs.size());
    for (Variable& input : inputs) node->inputs.push_back(input.node_);
    node->backward = std::move(backward);
  }
  return Variable(std::move(node));
}

NdArray Variable::grad() const {
  if (node_->grad.size() != node_->value.size()) {
    return NdArray(node_->value.shape(), 0.0);
  }
  return node_->grad;
}

void Variable::ZeroGrad() { node_->grad = NdArray(); }

void Variable::SetValue(NdArray value) {
  if (value.shape() != node_->value.shape()) {
    throw ContractError("SetValue: shape " + ShapeToString(value.shape()) +
                        " does not match " +
                        ShapeToString(node_->value.shape()));
  }
  node_->value = std::move(value);
}

Variable Variable::Detach() const { return Constant(node_->value); }

void Variable::Backward() const {
  if (node_->value.size() != 1) {
    throw ContractError("Backward requires a scalar, got shape " +
                        ShapeToString(node_->value.shape()));
  }
  if (!node_->requires_grad) return;

  // Iterative post-order DFS gives a topological order.
  std::vector<GraphNode*> order;
  std::unordered_set<GraphNode*> visited;
  std::vector<std::pair<GraphNode*, size_t>> stack;
  stack.emplace_back(node_.get(), 0);
  visited.insert(node_.get());
  while (!stack.empty()) {
    auto& [current, next_input] = stack.back();
    if (next_input < current->inputs.size()) {
      GraphNode* child = current->inputs[next_input++].get();
      if (child->requires_grad && visited.insert(child).second) {
        stack.emplace_back(child, 0);
      }
    } else {
      order.push_back(current);
      stack.pop_back();
    }
  }

  node_->EnsureGrad()[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    GraphNode* node = *it;
    if (node->backward && node->grad.size() == node->value.size()) {
      node->backward(*node);
    }
  }
  // Interior grads are scratch space; drop them so the graph can be reused
  // only through its leaves.
  for (GraphNode* node : order) {
    if (node->backward) node->grad = NdArray();
  }
}

}  // namespace numerics
}  // namespace epointda
