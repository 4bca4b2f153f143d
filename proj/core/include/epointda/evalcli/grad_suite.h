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

#ifndef EPOINTDA_EVALCLI_GRAD_SUITE_H_
#define EPOINTDA_EVALCLI_GRAD_SUITE_H_

#include <cstdint>
#include <string>
#include <vector>

namespace epointda {
namespace evalcli {

struct GradSuiteEntry {
  std::string name;
  double max_relative_error = 0.0;
};

// Finite-difference checks of every differentiable operation, each reduced
// to a scalar through a fixed random weighting.
std::vector<GradSuiteEntry> RunGradientSuite(uint64_t seed = 0);

}  // namespace evalcli
}  // namespace epointda

#endif  // EPOINTDA_EVALCLI_GRAD_SUITE_H_
