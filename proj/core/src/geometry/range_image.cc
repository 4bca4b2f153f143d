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

#include "epointda/geometry/range_image.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace epointda {
namespace geometry {

const char* ClassName(int label) {
  switch (label) {
    case kBackground: return "background";
    case kCar: return "car";
    case kPedestrian: return "pedestrian";
  }
  return "unknown";
}

void PointCloud::Validate() const {
  if (labels.size() != points.size()) {
    throw ContractError("PointCloud: " + std::to_string(labels.size()) +
                        " labels for " + std::to_string(points.size()) +
                        " points");
  }
  for (size_t i = 0; i < points.size(); ++i) {
    if (!points[i].allFinite()) {
      throw ContractError("PointCloud: point " + std::to_string(i) +
                          " is not finite");
    }
    if (labels[i] >= kNumClasses) {
      throw ContractError("PointCloud: label " + std::to_string(labels[i]) +
                          " of point " + std::to_string(i) + " out of range");
    }
  }
}

SensorConfig SensorConfig::DeskScale() {
  SensorConfig cfg;
  cfg.rows = 32;
  cfg.cols = 256;
  return cfg;
}

void SensorConfig::Validate() const {
  if (rows < 1 || cols < 1) throw ContractError("SensorConfig: rows and cols must be >= 1");
  if (!(azimuth_max_deg > azimuth_min_deg)) {
    throw ContractError("SensorConfig: degenerate azimuth range");
  }
  if (!(elevation_max_deg > elevation_min_deg)) {
    throw ContractError("SensorConfig: degenerate elevation range");
  }
  if (azimuth_max_deg - azimuth_min_deg > 360.0 || elevation_min_deg < -90.0 ||
      elevation_max_deg > 90.0) {
    throw ContractError("SensorConfig: angular range out of bounds");
  }
  if (channels != 3) throw ContractError("SensorConfig: only C=3 (x,y,z) is supported");
  if (!(max_range > 0.0)) throw ContractError("SensorConfig: max_range must be positive");
}

int64_t DropoutMask::CountOnes() const {
  return std::count(values.begin(), values.end(), uint8_t{1});
}

RangeImage::RangeImage(int rows, int cols, int channels)
    : rows_(rows),
      cols_(cols),
      channels_(channels),
      data_(static_cast<size_t>(rows) * cols * channels, 0.0),
      mask_(static_cast<size_t>(rows) * cols, 0),
      labels_(static_cast<size_t>(rows) * cols, kBackground) {
  if (rows < 1 || cols < 1 || channels < 1) {
    throw ContractError("RangeImage: extents must be positive");
  }
}

Eigen::Vector3d RangeImage::point(int r, int c) const {
  const size_t base = (static_cast<size_t>(r) * cols_ + c) * channels_;
  return {data_[base], data_[base + 1], data_[base + 2]};
}

void RangeImage::SetPoint(int r, int c, const Eigen::Vector3d& p,
                          uint8_t label) {
  if (p.isZero(0.0)) {
    throw ContractError("RangeImage: a return cannot sit at the origin");
  }
  const size_t pixel = static_cast<size_t>(r) * cols_ + c;
  for (int ch = 0; ch < 3; ++ch) data_[pixel * channels_ + ch] = p[ch];
  mask_[pixel] = 1;
  labels_[pixel] = label;
}

void RangeImage::ClearPixel(int r, int c) {
  const size_t pixel = static_cast<size_t>(r) * cols_ + c;
  for (int ch = 0; ch < channels_; ++ch) data_[pixel * channels_ + ch] = 0.0;
  mask_[pixel] = 0;
}

void RangeImage::Assign(std::vector<double> data, std::vector<uint8_t> labels) {
  if (data.size() != data_.size() || labels.size() != labels_.size()) {
    throw ContractError("RangeImage::Assign: size mismatch");
  }
  data_ = std::move(data);
  labels_ = std::move(labels);
  for (size_t pixel = 0; pixel < mask_.size(); ++pixel) {
    bool any = false;
    for (int ch = 0; ch < channels_; ++ch) {
      any = any || data_[pixel * channels_ + ch] != 0.0;
    }
    mask_[pixel] = any ? 1 : 0;
  }
}

bool RangeImage::MaskConsistent() const {
  for (size_t pixel = 0; pixel < mask_.size(); ++pixel) {
    bool any = false;
    for (int ch = 0; ch < channels_; ++ch) {
      any = any || data_[pixel * channels_ + ch] != 0.0;
    }
    if (mask_[pixel] != (any ? 1 : 0)) return false;
  }
  return true;
}

}  // namespace geometry
}  // namespace epointda
