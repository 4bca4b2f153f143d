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

#ifndef EPOINTDA_ALIGN_MOMENTS_H_
#define EPOINTDA_ALIGN_MOMENTS_H_

#include <cstdint>
#include <string>

#include "epointda/numerics/variable.h"

namespace epointda {
namespace align {

using numerics::NdArray;
using numerics::Variable;

enum class HommMode {
  kAuto,        // exact when order <= 2 or D <= 8, Monte Carlo otherwise
  kExact,
  kMonteCarlo,
};

const char* HommModeName(HommMode mode);
HommMode ParseHommMode(const std::string& name);

struct HommConfig {
  int order = 3;
  int samples = 1000;  // index tuples per Monte Carlo estimate
  uint64_t seed = 0;
  HommMode mode = HommMode::kAuto;

  void Validate() const;
};

// (1/D^p) * || E[phi_s^{(x)p}] - E[phi_t^{(x)p}] ||_F^2 for activations
// [N_s, D] and [N_t, D]. The exact value is computed through sample inner
// products, which equals the dense tensor sum. The Monte Carlo estimate
// averages squared differences of p-th moment coordinates at uniformly
// drawn index tuples. Differentiable with respect to both batches.
Variable HommLoss(const Variable& source, const Variable& target, const HommConfig& config);

// Dense reference: materializes both D^p moment tensors. Test oracle only.
double HommDense(const NdArray& source, const NdArray& target, int order);

// ||C_s - C_t||_F^2 / (4 D^2) with unbiased covariances. Differentiable.
Variable CoralLoss(const Variable& source, const Variable& target);

}  // namespace align
}  // namespace epointda

#endif  // EPOINTDA_ALIGN_MOMENTS_H_
