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

#ifndef EPOINTDA_SIMULATOR_SCENE_H_
#define EPOINTDA_SIMULATOR_SCENE_H_

#include <optional>
#include <vector>

#include "Eigen/Core"
#include "epointda/geometry/range_image.h"

namespace epointda {
namespace simulator {

// Box resting anywhere above the ground, rotated by `yaw` (radians) about
// the vertical axis through its center.
struct BoxObject {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d extents = Eigen::Vector3d::Ones();  // full length, width, height
  double yaw = 0.0;
  uint8_t label = geometry::kCar;
};

// Vertical capped cylinder standing on `base_z`.
struct CylinderObject {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double base_z = 0.0;
  double radius = 0.3;
  double height = 1.7;
  uint8_t label = geometry::kPedestrian;
};

struct Scene {
  double ground_z = 0.0;
  std::vector<BoxObject> boxes;
  std::vector<CylinderObject> cylinders;

  // Throws ContractError for non-positive extents or objects below ground.
  void Validate() const;
};

struct SensorPose {
  Eigen::Vector3d position{0.0, 0.0, 1.73};
  double yaw = 0.0;
};

struct RayHit {
  double distance = 0.0;
  uint8_t label = geometry::kBackground;
};

// Nearest intersection of the ray origin + t * dir (dir unit length,
// 0 < t <= max_range) with the ground plane and every object.
std::optional<RayHit> CastRay(const Scene& scene, const Eigen::Vector3d& origin,
                              const Eigen::Vector3d& dir, double max_range);

// One ray per pixel through the bin centers. Points are stored in the sensor
// frame; pixels without a return stay zero with mask 0.
geometry::RangeImage RaycastScan(const Scene& scene, const SensorPose& pose,
                                 const geometry::SensorConfig& cfg);

}  // namespace simulator
}  // namespace epointda

#endif  // EPOINTDA_SIMULATOR_SCENE_H_
