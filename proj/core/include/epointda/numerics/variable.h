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

#ifndef EPOINTDA_NUMERICS_VARIABLE_H_
#define EPOINTDA_NUMERICS_VARIABLE_H_

#include <functional>
#include <memory>
#include <vector>

#include "epointda/numerics/ndarray.h"

namespace epointda {
namespace numerics {

// A node of the define-by-run differentiation graph. The graph is rebuilt on
// every forward pass; leaves (parameters, constants) outlive it.
struct GraphNode {
  NdArray value;
  NdArray grad;  // Allocated lazily, same shape as value.
  bool requires_grad = false;
  std::vector<std::shared_ptr<GraphNode>> inputs;
  // Reads this node's grad and accumulates into the inputs' grads.
  std::function<void(GraphNode&)> backward;

  NdArray& EnsureGrad();
};

class Variable {
 public:
  Variable() = default;

  // Trainable leaf.
  static Variable Parameter(NdArray value);
  // Leaf outside the graph; gradients never flow into it.
  static Variable Constant(NdArray value);

  // Builds an interior node. `requires_grad` is inferred from the inputs;
  // `backward` is dropped when no input needs gradients.
  static Variable FromOp(NdArray value, std::vector<Variable> inputs,
                         std::function<void(GraphNode&)> backward);

  bool defined() const { return node_ != nullptr; }
  const NdArray& value() const { return node_->value; }
  const Shape& shape() const { return node_->value.shape(); }
  bool requires_grad() const { return node_ && node_->requires_grad; }

  // Zeros when no gradient has reached this variable yet.
  NdArray grad() const;
  void ZeroGrad();

  // Overwrites a leaf's value in place (optimizer updates, checkpoint loads).
  void SetValue(NdArray value);

  // Same value, cut from the graph: backpropagation stops here.
  Variable Detach() const;

  // Reverse-mode sweep from a scalar (size-1) variable. Gradients accumulate
  // into every reachable node that requires them.
  void Backward() const;

  const std::shared_ptr<GraphNode>& node() const { return node_; }

 private:
  explicit Variable(std::shared_ptr<GraphNode> node) : node_(std::move(node)) {}

  std::shared_ptr<GraphNode> node_;
};

}  // namespace numerics
}  // namespace epointda

#endif  // EPOINTDA_NUMERICS_VARIABLE_H_
