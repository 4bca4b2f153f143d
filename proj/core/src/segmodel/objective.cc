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

#include "epointda/segmodel/objective.h"

#include <cmath>
#include <string>

#include "epointda/numerics/losses.h"

namespace epointda {
namespace segmodel {

void LossWeights::Validate() const {
  for (const double w : {gan_rs, gan_sr, cyc, mask, homm, seg}) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ContractError("LossWeights: weights must be finite and non-negative");
    }
  }
  if (!(seg > 0.0)) throw ContractError("LossWeights: the segmentation weight must be positive");
}

double TotalObjective(const LossComponents& c, const LossWeights& w) {
  const double values[6] = {c.gan_rs, c.gan_sr, c.cyc, c.mask, c.homm, c.seg};
  const double weights[6] = {w.gan_rs, w.gan_sr, w.cyc, w.mask, w.homm, w.seg};
  static const char* const kNames[6] = {"gan_rs", "gan_sr", "cyc", "mask", "homm", "seg"};
  double total = 0.0;
  for (int i = 0; i < 6; ++i) {
    if (!std::isfinite(values[i])) {
      throw TrainingError(std::string("total_objective: non-finite ") + kNames[i] +
                          " component");
    }
    total += weights[i] * values[i];
  }
  return total;
}

numerics::Variable FocalLoss(const numerics::Variable& logits,
                             const std::vector<uint8_t>& labels, double gamma) {
  return numerics::SoftmaxFocalLoss(logits, labels, gamma);
}

}  // namespace segmodel
}  // namespace epointda
