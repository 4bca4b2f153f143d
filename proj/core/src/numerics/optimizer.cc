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

#include "epointda/numerics/optimizer.h"

#include <cmath>

namespace epointda {
namespace numerics {

double OptimizerState::LearningRate() const {
  const int64_t epochs = config.decay_every > 0 ? step_count / config.decay_every : 0;
  double lr = config.base_lr;
  for (int64_t i = 0; i < epochs; ++i) lr *= config.decay_factor;
  return lr;
}

StepOutcome SgdStep(std::span<Variable> params, std::span<const NdArray> grads,
                    OptimizerState& state) {
  if (params.size() != grads.size()) {
    throw ContractError("SgdStep: " + std::to_string(params.size()) +
                        " parameters but " + std::to_string(grads.size()) +
                        " gradients");
  }
  for (size_t i = 0; i < params.size(); ++i) {
    if (grads[i].shape() != params[i].shape()) {
      throw ContractError("SgdStep: gradient " + std::to_string(i) +
                          " has shape " + ShapeToString(grads[i].shape()) +
                          ", parameter has " +
                          ShapeToString(params[i].shape()));
    }
    if (!grads[i].AllFinite()) {
      return {false, "non-finite gradient for parameter " + std::to_string(i) +
                         " at step " + std::to_string(state.step_count)};
    }
  }
  if (state.velocity.size() != params.size()) {
    state.velocity.clear();
    for (const Variable& p : params) state.velocity.emplace_back(p.shape(), 0.0);
  }
  const double lr = state.LearningRate();
  for (size_t i = 0; i < params.size(); ++i) {
    NdArray& v = state.velocity[i];
    NdArray updated = params[i].value();
    for (int64_t j = 0; j < v.size(); ++j) {
      v[j] = state.config.momentum * v[j] + grads[i][j];
      updated[j] -= lr * v[j];
    }
    params[i].SetValue(std::move(updated));
  }
  ++state.step_count;
  return {};
}

SgdOptimizer::SgdOptimizer(std::vector<Variable> params, SgdConfig config)
    : params_(std::move(params)) {
  state_.config = config;
}

StepOutcome SgdOptimizer::Step() {
  std::vector<NdArray> grads;
  grads.reserve(params_.size());
  for (const Variable& p : params_) grads.push_back(p.grad());
  StepOutcome outcome = SgdStep(params_, grads, state_);
  ZeroGrad();
  return outcome;
}

void SgdOptimizer::ZeroGrad() {
  for (Variable& p : params_) p.ZeroGrad();
}

}  // namespace numerics
}  // namespace epointda
