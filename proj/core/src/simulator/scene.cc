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

#include "epointda/simulator/scene.h"

#include <cmath>
#include <limits>

#include "Eigen/Geometry"
#include "epointda/geometry/projection.h"

namespace epointda {
namespace simulator {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Entry distance of a ray into an axis-aligned box at the origin, or kInf.
double SlabIntersect(const Eigen::Vector3d& o, const Eigen::Vector3d& d,
                     const Eigen::Vector3d& half) {
  double t_near = -kInf;
  double t_far = kInf;
  for (int k = 0; k < 3; ++k) {
    if (d[k] == 0.0) {
      if (std::abs(o[k]) > half[k]) return kInf;
      continue;
    }
    double t0 = (-half[k] - o[k]) / d[k];
    double t1 = (half[k] - o[k]) / d[k];
    if (t0 > t1) std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
    if (t_near > t_far) return kInf;
  }
  if (t_far <= 0.0) return kInf;
  return t_near > 0.0 ? t_near : kInf;  // a ray starting inside sees nothing
}

double BoxIntersect(const BoxObject& box, const Eigen::Vector3d& origin,
                    const Eigen::Vector3d& dir) {
  const Eigen::Matrix3d to_local =
      Eigen::AngleAxisd(-box.yaw, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  return SlabIntersect(to_local * (origin - box.center), to_local * dir,
                       0.5 * box.extents);
}

double CylinderIntersect(const CylinderObject& cyl, const Eigen::Vector3d& origin,
                         const Eigen::Vector3d& dir) {
  const double top = cyl.base_z + cyl.height;
  double best = kInf;
  const double ox = origin.x() - cyl.center.x();
  const double oy = origin.y() - cyl.center.y();
  const double a = dir.x() * dir.x() + dir.y() * dir.y();
  if (a > 0.0) {
    const double b = 2.0 * (ox * dir.x() + oy * dir.y());
    const double c = ox * ox + oy * oy - cyl.radius * cyl.radius;
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      const double t = (-b - std::sqrt(disc)) / (2.0 * a);
      const double z = origin.z() + t * dir.z();
      if (t > 0.0 && z >= cyl.base_z && z <= top) best = t;
    }
  }
  if (dir.z() != 0.0) {
    for (const double plane : {cyl.base_z, top}) {
      const double t = (plane - origin.z()) / dir.z();
      if (t <= 0.0 || t >= best) continue;
      const double px = ox + t * dir.x();
      const double py = oy + t * dir.y();
      if (px * px + py * py <= cyl.radius * cyl.radius) best = t;
    }
  }
  return best;
}

}  // namespace

void Scene::Validate() const {
  for (const BoxObject& box : boxes) {
    if (!(box.extents.array() > 0.0).all()) {
      throw ContractError("Scene: box extents must be positive");
    }
    if (box.center.z() - 0.5 * box.extents.z() < ground_z - 1e-9) {
      throw ContractError("Scene: box extends below the ground");
    }
    if (box.label >= geometry::kNumClasses) throw ContractError("Scene: bad box label");
  }
  for (const CylinderObject& cyl : cylinders) {
    if (!(cyl.radius > 0.0) || !(cyl.height > 0.0)) {
      throw ContractError("Scene: cylinder radius and height must be positive");
    }
    if (cyl.base_z < ground_z - 1e-9) {
      throw ContractError("Scene: cylinder extends below the ground");
    }
    if (cyl.label >= geometry::kNumClasses) {
      throw ContractError("Scene: bad cylinder label");
    }
  }
}

std::optional<RayHit> CastRay(const Scene& scene, const Eigen::Vector3d& origin,
                              const Eigen::Vector3d& dir, double max_range) {
  RayHit hit{kInf, geometry::kBackground};
  if (dir.z() < 0.0) {
    const double t = (scene.ground_z - origin.z()) / dir.z();
    if (t > 0.0) hit.distance = t;
  }
  for (const BoxObject& box : scene.boxes) {
    const double t = BoxIntersect(box, origin, dir);
    if (t < hit.distance) hit = {t, box.label};
  }
  for (const CylinderObject& cyl : scene.cylinders) {
    const double t = CylinderIntersect(cyl, origin, dir);
    if (t < hit.distance) hit = {t, cyl.label};
  }
  if (!(hit.distance <= max_range)) return std::nullopt;
  return hit;
}

geometry::RangeImage RaycastScan(const Scene& scene, const SensorPose& pose,
                                 const geometry::SensorConfig& cfg) {
  cfg.Validate();
  scene.Validate();
  if (!(pose.position.z() > scene.ground_z)) {
    throw ContractError("RaycastScan: sensor must be above the ground");
  }
  const Eigen::Matrix3d to_world =
      Eigen::AngleAxisd(pose.yaw, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  geometry::RangeImage image(cfg.rows, cfg.cols, cfg.channels);
  for (int r = 0; r < cfg.rows; ++r) {
    for (int c = 0; c < cfg.cols; ++c) {
      const Eigen::Vector3d local = geometry::BinCenterDirection(r, c, cfg);
      const auto hit = CastRay(scene, pose.position, to_world * local, cfg.max_range);
      if (hit) image.SetPoint(r, c, hit->distance * local, hit->label);
    }
  }
  return image;
}

}  // namespace simulator
}  // namespace epointda
