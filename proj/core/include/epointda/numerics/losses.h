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

#ifndef EPOINTDA_NUMERICS_LOSSES_H_
#define EPOINTDA_NUMERICS_LOSSES_H_

#include <cstdint>
#include <vector>

#include "epointda/numerics/variable.h"

namespace epointda {
namespace numerics {

// Mean over all N*H*W pixels of -(1 - p)^gamma * log p, where p is the
// channel softmax of `logits` [N, L, H, W] at the pixel's label. `labels`
// holds N*H*W class indices in [0, L). gamma = 0 is plain cross-entropy.
Variable SoftmaxFocalLoss(const Variable& logits, const std::vector<uint8_t>& labels,
                          double gamma);

// Argmax over channels per pixel; ties go to the lower channel index.
std::vector<uint8_t> ChannelArgmax(const NdArray& logits);

}  // namespace numerics
}  // namespace epointda

#endif  // EPOINTDA_NUMERICS_LOSSES_H_
