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

#ifndef EPOINTDA_GEOMETRY_PROJECTION_H_
#define EPOINTDA_GEOMETRY_PROJECTION_H_

#include <optional>
#include <vector>

#include "epointda/geometry/range_image.h"

namespace epointda {
namespace geometry {

struct PixelIndex {
  int row = 0;
  int col = 0;
  bool operator==(const PixelIndex&) const = default;
};

// Spherical bin of a sensor-frame point:
//   azimuth = atan2(y, x), elevation = asin(z / |p|)
//   col = floor((az - az_min) / (az_max - az_min) * W)
//   row = floor((el_max - el) / (el_max - el_min) * H)
// Angles equal to az_max or el_min fall into the last bin. Points outside
// either range, and the origin itself, have no bin.
std::optional<PixelIndex> BinOf(const Eigen::Vector3d& p,
                                const SensorConfig& cfg);

// Unit ray through the angular center of a pixel.
Eigen::Vector3d BinCenterDirection(int row, int col, const SensorConfig& cfg);

struct ProjectionStats {
  int64_t binned = 0;      // Points that own a pixel.
  int64_t occluded = 0;    // In view but beaten by a nearer point.
  int64_t out_of_fov = 0;
};

struct Projection {
  RangeImage image;
  ProjectionStats stats;
  // Pixel of every input point, or nullopt when out of view.
  std::vector<std::optional<PixelIndex>> pixel_of_point;
};

class EmptyImageError : public ContractError {
 public:
  using ContractError::ContractError;
};

// Nearest range wins a shared bin (ties keep the earlier point). Throws
// ContractError for an empty cloud and EmptyImageError when no point is in
// view.
Projection ProjectCloud(const PointCloud& cloud, const SensorConfig& cfg);

inline RangeImage Project(const PointCloud& cloud, const SensorConfig& cfg) {
  return ProjectCloud(cloud, cfg).image;
}

// mask = 0 exactly where all channels are 0.
DropoutMask ExtractMask(const RangeImage& image);

// Assigns each in-view point the prediction of its pixel; out-of-view points
// get kNoLabel. `predictions` is an H x W row-major class map.
std::vector<uint8_t> UnprojectLabels(const RangeImage& image,
                                     const std::vector<uint8_t>& predictions,
                                     const PointCloud& cloud,
                                     const SensorConfig& cfg);

}  // namespace geometry
}  // namespace epointda

#endif  // EPOINTDA_GEOMETRY_PROJECTION_H_
