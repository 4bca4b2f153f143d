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

#include "epointda/numerics/grad_check.h"

#include <algorithm>
#include <cmath>

namespace epointda {
namespace numerics {
namespace {

double Evaluate(const ScalarFunction& fn, const std::vector<NdArray>& point) {
  std::vector<Variable> inputs;
  inputs.reserve(point.size());
  for (const NdArray& p : point) inputs.push_back(Variable::Constant(p));
  const Variable out = fn(inputs);
  if (out.value().size() != 1) {
    throw ContractError("GradCheck: function must return a scalar");
  }
  return out.value()[0];
}

}  // namespace

GradCheckResult GradCheck(const ScalarFunction& fn,
                          const std::vector<NdArray>& point, double h,
                          double floor) {
  if (!(h > 0.0)) throw ContractError("GradCheck: h must be positive");
  std::vector<Variable> params;
  params.reserve(point.size());
  for (const NdArray& p : point) params.push_back(Variable::Parameter(p));
  fn(params).Backward();

  GradCheckResult result;
  std::vector<NdArray> probe = point;
  for (size_t input = 0; input < point.size(); ++input) {
    const NdArray analytic = params[input].grad();
    for (int64_t i = 0; i < point[input].size(); ++i) {
      const double original = probe[input][i];
      probe[input][i] = original + h;
      const double plus = Evaluate(fn, probe);
      probe[input][i] = original - h;
      const double minus = Evaluate(fn, probe);
      probe[input][i] = original;
      const double numeric = (plus - minus) / (2.0 * h);
      const double a = analytic[i];
      const double denom = std::max({std::abs(a), std::abs(numeric), floor});
      const double error = std::abs(a - numeric) / denom;
      if (error > result.max_relative_error || result.worst_input < 0) {
        result.max_relative_error = std::max(result.max_relative_error, error);
        if (error >= result.max_relative_error) {
          result.worst_input = static_cast<int>(input);
          result.worst_index = i;
          result.analytic = a;
          result.numeric = numeric;
        }
      }
    }
  }
  return result;
}

}  // namespace numerics
}  // namespace epointda
