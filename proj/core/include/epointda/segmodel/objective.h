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

#ifndef EPOINTDA_SEGMODEL_OBJECTIVE_H_
#define EPOINTDA_SEGMODEL_OBJECTIVE_H_

#include <vector>

#include "epointda/numerics/variable.h"

namespace epointda {
namespace segmodel {

struct LossWeights {
  double gan_rs = 1.0;
  double gan_sr = 1.0;
  double cyc = 1.0;
  double mask = 1.0;
  double homm = 0.1;
  double seg = 1.0;

  void Validate() const;
};

struct LossComponents {
  double gan_rs = 0.0;
  double gan_sr = 0.0;
  double cyc = 0.0;
  double mask = 0.0;
  double homm = 0.0;
  double seg = 0.0;
};

// Weighted sum in the order gan_rs, gan_sr, cyc, mask, homm, seg. Throws
// TrainingError on a non-finite component.
double TotalObjective(const LossComponents& components, const LossWeights& weights);

// Mean over pixels of -(1 - p)^gamma log p at the true class.
numerics::Variable FocalLoss(const numerics::Variable& logits,
                             const std::vector<uint8_t>& labels, double gamma);

}  // namespace segmodel
}  // namespace epointda

#endif  // EPOINTDA_SEGMODEL_OBJECTIVE_H_
