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

#ifndef EPOINTDA_GEOMETRY_RANGE_IMAGE_H_
#define EPOINTDA_GEOMETRY_RANGE_IMAGE_H_

#include <cstdint>
#include <vector>

#include "Eigen/Core"
#include "epointda/errors.h"

namespace epointda {
namespace geometry {

enum SemanticClass : uint8_t {
  kBackground = 0,
  kCar = 1,
  kPedestrian = 2,
};
inline constexpr int kNumClasses = 3;
inline constexpr uint8_t kNoLabel = 255;

const char* ClassName(int label);

struct PointCloud {
  std::vector<Eigen::Vector3d> points;  // Sensor frame, meters.
  std::vector<uint8_t> labels;

  int64_t size() const { return static_cast<int64_t>(points.size()); }
  // Throws ContractError unless labels match points, coordinates are finite
  // and labels are known classes.
  void Validate() const;
};

struct SensorConfig {
  int rows = 64;
  int cols = 512;
  double azimuth_min_deg = -45.0;
  double azimuth_max_deg = 45.0;
  double elevation_min_deg = -24.8;
  double elevation_max_deg = 2.0;
  int channels = 3;
  // Returns beyond this range are lost; used by the simulator only.
  double max_range = 80.0;

  // 32 x 256 frames with the default field of view.
  static SensorConfig DeskScale();
  void Validate() const;
};

// Binary H x W map; 1 marks a present return, 0 a dropped one.
struct DropoutMask {
  int rows = 0;
  int cols = 0;
  std::vector<uint8_t> values;

  DropoutMask() = default;
  DropoutMask(int rows, int cols, uint8_t fill)
      : rows(rows), cols(cols), values(static_cast<size_t>(rows) * cols, fill) {}

  uint8_t at(int r, int c) const { return values[static_cast<size_t>(r) * cols + c]; }
  int64_t CountOnes() const;
  bool operator==(const DropoutMask&) const = default;
};

// H x W x C projected scan with (x, y, z) channels stored channel-minor,
// a validity mask and a label plane. A pixel has mask 0 exactly when all of
// its channels are 0.
class RangeImage {
 public:
  RangeImage() = default;
  RangeImage(int rows, int cols, int channels = 3);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int channels() const { return channels_; }
  int64_t pixels() const { return static_cast<int64_t>(rows_) * cols_; }

  double value(int r, int c, int ch) const {
    return data_[(static_cast<size_t>(r) * cols_ + c) * channels_ + ch];
  }
  Eigen::Vector3d point(int r, int c) const;
  uint8_t mask(int r, int c) const { return mask_[static_cast<size_t>(r) * cols_ + c]; }
  uint8_t label(int r, int c) const { return labels_[static_cast<size_t>(r) * cols_ + c]; }

  // Stores a return; a point with all-zero coordinates is rejected.
  void SetPoint(int r, int c, const Eigen::Vector3d& p, uint8_t label);
  void ClearPixel(int r, int c);
  void SetLabel(int r, int c, uint8_t label) {
    labels_[static_cast<size_t>(r) * cols_ + c] = label;
  }

  const std::vector<double>& data() const { return data_; }
  const std::vector<uint8_t>& mask() const { return mask_; }
  const std::vector<uint8_t>& labels() const { return labels_; }

  // Replaces raw storage; the mask is recomputed from the data.
  void Assign(std::vector<double> data, std::vector<uint8_t> labels);

  // True when mask==0 exactly at the all-zero pixels.
  bool MaskConsistent() const;

  bool operator==(const RangeImage&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  int channels_ = 3;
  std::vector<double> data_;
  std::vector<uint8_t> mask_;
  std::vector<uint8_t> labels_;
};

}  // namespace geometry
}  // namespace epointda

#endif  // EPOINTDA_GEOMETRY_RANGE_IMAGE_H_
