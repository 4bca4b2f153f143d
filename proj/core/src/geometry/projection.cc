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

#include "epointda/geometry/projection.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace epointda {
namespace geometry {
namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kDegToRad = std::numbers::pi / 180.0;

}  // namespace

std::optional<PixelIndex> BinOf(const Eigen::Vector3d& p,
                                const SensorConfig& cfg) {
  const double range = p.norm();
  if (!(range > 0.0)) return std::nullopt;
  const double azimuth = std::atan2(p.y(), p.x()) * kRadToDeg;
  const double elevation =
      std::asin(std::clamp(p.z() / range, -1.0, 1.0)) * kRadToDeg;
  if (azimuth < cfg.azimuth_min_deg || azimuth > cfg.azimuth_max_deg ||
      elevation < cfg.elevation_min_deg || elevation > cfg.elevation_max_deg) {
    return std::nullopt;
  }
  const double col_f = (azimuth - cfg.azimuth_min_deg) /
                       (cfg.azimuth_max_deg - cfg.azimuth_min_deg) * cfg.cols;
  const double row_f = (cfg.elevation_max_deg - elevation) /
                       (cfg.elevation_max_deg - cfg.elevation_min_deg) * cfg.rows;
  PixelIndex index{static_cast<int>(std::floor(row_f)),
                   static_cast<int>(std::floor(col_f))};
  index.row = std::min(index.row, cfg.rows - 1);
  index.col = std::min(index.col, cfg.cols - 1);
  return index;
}

Eigen::Vector3d BinCenterDirection(int row, int col, const SensorConfig& cfg) {
  const double azimuth =
      (cfg.azimuth_min_deg +
       (col + 0.5) / cfg.cols * (cfg.azimuth_max_deg - cfg.azimuth_min_deg)) *
      kDegToRad;
  const double elevation =
      (cfg.elevation_max_deg -
       (row + 0.5) / cfg.rows * (cfg.elevation_max_deg - cfg.elevation_min_deg)) *
      kDegToRad;
  return {std::cos(elevation) * std::cos(azimuth),
          std::cos(elevation) * std::sin(azimuth), std::sin(elevation)};
}

Projection ProjectCloud(const PointCloud& cloud, const SensorConfig& cfg) {
  cfg.Validate();
  cloud.Validate();
  if (cloud.points.empty()) throw ContractError("project: empty point cloud");

  Projection result{RangeImage(cfg.rows, cfg.cols, cfg.channels), {}, {}};
  result.pixel_of_point.resize(cloud.points.size());
  std::vector<int64_t> owner(result.image.pixels(), -1);
  std::vector<double> best(result.image.pixels(),
                           std::numeric_limits<double>::infinity());
  for (size_t i = 0; i < cloud.points.size(); ++i) {
    const std::optional<PixelIndex> bin = BinOf(cloud.points[i], cfg);
    result.pixel_of_point[i] = bin;
    if (!bin) {
      ++result.stats.out_of_fov;
      continue;
    }
    const int64_t pixel = static_cast<int64_t>(bin->row) * cfg.cols + bin->col;
    const double range = cloud.points[i].norm();
    if (range < best[pixel]) {
      best[pixel] = range;
      owner[pixel] = static_cast<int64_t>(i);
    }
  }
  for (int64_t pixel = 0; pixel < result.image.pixels(); ++pixel) {
    if (owner[pixel] < 0) continue;
    const auto i = static_cast<size_t>(owner[pixel]);
    result.image.SetPoint(static_cast<int>(pixel / cfg.cols),
                          static_cast<int>(pixel % cfg.cols), cloud.points[i],
                          cloud.labels[i]);
    ++result.stats.binned;
  }
  result.stats.occluded =
      cloud.size() - result.stats.out_of_fov - result.stats.binned;
  if (result.stats.binned == 0) {
    throw EmptyImageError("project: every point is outside the field of view");
  }
  return result;
}

DropoutMask ExtractMask(const RangeImage& image) {
  DropoutMask mask(image.rows(), image.cols(), 0);
  const auto& data = image.data();
  const int channels = image.channels();
  for (int64_t pixel = 0; pixel < image.pixels(); ++pixel) {
    for (int ch = 0; ch < channels; ++ch) {
      if (data[pixel * channels + ch] != 0.0) {
        mask.values[pixel] = 1;
        break;
      }
    }
  }
  return mask;
}

std::vector<uint8_t> UnprojectLabels(const RangeImage& image,
                                     const std::vector<uint8_t>& predictions,
                                     const PointCloud& cloud,
                                     const SensorConfig& cfg) {
  if (image.rows() != cfg.rows || image.cols() != cfg.cols ||
      static_cast<int64_t>(predictions.size()) != image.pixels()) {
    throw ContractError("unproject_labels: image, predictions and config disagree");
  }
  std::vector<uint8_t> labels(cloud.points.size(), kNoLabel);
  for (size_t i = 0; i < cloud.points.size(); ++i) {
    if (const auto bin = BinOf(cloud.points[i], cfg)) {
      labels[i] = predictions[static_cast<size_t>(bin->row) * cfg.cols + bin->col];
    }
  }
  return labels;
}

}  // namespace geometry
}  // namespace epointda
