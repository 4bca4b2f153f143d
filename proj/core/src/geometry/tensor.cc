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

#include "epointda/geometry/tensor.h"

namespace epointda {
namespace geometry {
namespace {

void CheckBatch(const std::vector<const RangeImage*>& images, const char* what) {
  if (images.empty()) throw ContractError(std::string(what) + ": empty batch");
  for (const RangeImage* img : images) {
    if (img->rows() != images[0]->rows() || img->cols() != images[0]->cols() ||
        img->channels() != images[0]->channels()) {
      throw ContractError(std::string(what) + ": images differ in extents");
    }
  }
}

}  // namespace

numerics::NdArray ImagesToTensor(const std::vector<const RangeImage*>& images,
                                 double scale) {
  CheckBatch(images, "ImagesToTensor");
  const int64_t c = images[0]->channels();
  const int64_t plane = images[0]->pixels();
  numerics::NdArray out({static_cast<int64_t>(images.size()), c, images[0]->rows(),
                         images[0]->cols()});
  auto dst = out.mutable_data();
  const double inv = 1.0 / scale;
  for (size_t n = 0; n < images.size(); ++n) {
    const auto& src = images[n]->data();
    double* base = dst.data() + n * c * plane;
    for (int64_t p = 0; p < plane; ++p) {
      for (int64_t ch = 0; ch < c; ++ch) base[ch * plane + p] = src[p * c + ch] * inv;
    }
  }
  return out;
}

numerics::NdArray MasksToTensor(const std::vector<const RangeImage*>& images) {
  CheckBatch(images, "MasksToTensor");
  const int64_t plane = images[0]->pixels();
  numerics::NdArray out(
      {static_cast<int64_t>(images.size()), 1, images[0]->rows(), images[0]->cols()});
  auto dst = out.mutable_data();
  for (size_t n = 0; n < images.size(); ++n) {
    const auto& mask = images[n]->mask();
    for (int64_t p = 0; p < plane; ++p) dst[n * plane + p] = mask[p];
  }
  return out;
}

std::vector<uint8_t> StackLabels(const std::vector<const RangeImage*>& images) {
  CheckBatch(images, "StackLabels");
  std::vector<uint8_t> out;
  out.reserve(images.size() * images[0]->pixels());
  for (const RangeImage* img : images) {
    out.insert(out.end(), img->labels().begin(), img->labels().end());
  }
  return out;
}

RangeImage TensorToImage(const numerics::NdArray& tensor, int64_t index, double scale,
                         const std::vector<uint8_t>& labels) {
  const numerics::Shape& s = tensor.shape();
  if (s.size() != 4 || index < 0 || index >= s[0]) {
    throw ContractError("TensorToImage: bad tensor or index");
  }
  const int64_t c = s[1];
  const int64_t plane = s[2] * s[3];
  RangeImage img(static_cast<int>(s[2]), static_cast<int>(s[3]), static_cast<int>(c));
  std::vector<double> data(static_cast<size_t>(plane * c));
  const auto src = tensor.data();
  const int64_t base = index * c * plane;
  for (int64_t p = 0; p < plane; ++p) {
    for (int64_t ch = 0; ch < c; ++ch) data[p * c + ch] = src[base + ch * plane + p] * scale;
  }
  img.Assign(std::move(data), labels.empty()
                                  ? std::vector<uint8_t>(static_cast<size_t>(plane), 0)
                                  : labels);
  return img;
}

}  // namespace geometry
}  // namespace epointda
