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

#ifndef EPOINTDA_NUMERICS_GRAD_CHECK_H_
#define EPOINTDA_NUMERICS_GRAD_CHECK_H_

#include <functional>
#include <vector>

#include "epointda/numerics/variable.h"

namespace epointda {
namespace numerics {

using ScalarFunction = std::function<Variable(const std::vector<Variable>&)>;

struct GradCheckResult {
  double max_relative_error = 0.0;
  int worst_input = -1;
  int64_t worst_index = -1;
  double analytic = 0.0;
  double numeric = 0.0;
};

// Compares backward-pass gradients of `fn` at `point` against central
// differences (f(x+h) - f(x-h)) / 2h, coordinate by coordinate. The relative
// error is |analytic - numeric| / max(|analytic|, |numeric|, floor).
GradCheckResult GradCheck(const ScalarFunction& fn,
                          const std::vector<NdArray>& point, double h = 1e-5,
                          double floor = 1e-6);

}  // namespace numerics
}  // namespace epointda

#endif  // EPOINTDA_NUMERICS_GRAD_CHECK_H_
