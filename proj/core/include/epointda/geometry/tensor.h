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

#ifndef EPOINTDA_GEOMETRY_TENSOR_H_
#define EPOINTDA_GEOMETRY_TENSOR_H_

#include <vector>

#include "epointda/geometry/range_image.h"
#include "epointda/numerics/ndarray.h"

namespace epointda {
namespace geometry {

// Stacks images into an [N, C, H, W] array, dividing coordinates by `scale`.
// All images must share extents.
numerics::NdArray ImagesToTensor(const std::vector<const RangeImage*>& images,
                                 double scale);
// [N, 1, H, W] validity masks as 0/1 doubles.
numerics::NdArray MasksToTensor(const std::vector<const RangeImage*>& images);
// Concatenated H*W label planes.
std::vector<uint8_t> StackLabels(const std::vector<const RangeImage*>& images);

// Inverse of ImagesToTensor for one batch entry; the mask is recomputed
// from the data.
RangeImage TensorToImage(const numerics::NdArray& tensor, int64_t index, double scale,
                         const std::vector<uint8_t>& labels);

}  // namespace geometry
}  // namespace epointda

#endif  // EPOINTDA_GEOMETRY_TENSOR_H_
