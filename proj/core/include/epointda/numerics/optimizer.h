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

#ifndef EPOINTDA_NUMERICS_OPTIMIZER_H_
#define EPOINTDA_NUMERICS_OPTIMIZER_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "epointda/numerics/variable.h"

namespace epointda {
namespace numerics {

struct SgdConfig {
  double base_lr = 0.05;
  double momentum = 0.9;
  double decay_factor = 0.5;
  int64_t decay_every = 20000;
};

struct OptimizerState {
  SgdConfig config;
  std::vector<NdArray> velocity;  // One per parameter, lazily sized.
  int64_t step_count = 0;

  // base_lr * decay_factor^floor(step_count / decay_every)
  double LearningRate() const;
};

struct StepOutcome {
  bool applied = true;
  std::string diagnostic;
};

// v <- momentum * v + grad; p <- p - lr(step) * v; step_count += 1.
// A non-finite gradient rejects the whole step and leaves everything as is.
StepOutcome SgdStep(std::span<Variable> params, std::span<const NdArray> grads,
                    OptimizerState& state);

// Convenience wrapper that reads each parameter's accumulated gradient and
// clears it after the step.
class SgdOptimizer {
 public:
  SgdOptimizer(std::vector<Variable> params, SgdConfig config);

  StepOutcome Step();
  void ZeroGrad();

  const OptimizerState& state() const { return state_; }
  OptimizerState& mutable_state() { return state_; }
  const std::vector<Variable>& params() const { return params_; }

 private:
  std::vector<Variable> params_;
  OptimizerState state_;
};

}  // namespace numerics
}  // namespace epointda

#endif  // EPOINTDA_NUMERICS_OPTIMIZER_H_
