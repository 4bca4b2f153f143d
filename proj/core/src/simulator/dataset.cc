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

#include "epointda/simulator/dataset.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>

#include "epointda/binary_io.h"
#include "epointda/geometry/io.h"
#include "epointda/numerics/rng.h"
#include "epointda/text_format.h"

namespace epointda {
namespace simulator {
namespace {

using numerics::DeriveSeed;
using numerics::Rng;
using numerics::UniformIndex;
using numerics::UniformRange;
using numerics::UniformUnit;

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr uint64_t kHeightStream = 0x68;

struct Footprint {
  Eigen::Vector2d center;
  double radius;
};

// Axis-aligned ground rectangle used for walls.
struct Rect {
  double x0, x1, y0, y1;
};

class Placer {
 public:
  bool Free(const Footprint& f) const {
    for (const Footprint& other : discs_) {
      if ((other.center - f.center).norm() < other.radius + f.radius + 0.4) return false;
    }
    for (const Rect& r : rects_) {
      const double dx = std::max({r.x0 - f.center.x(), 0.0, f.center.x() - r.x1});
      const double dy = std::max({r.y0 - f.center.y(), 0.0, f.center.y() - r.y1});
      if (std::hypot(dx, dy) < f.radius + 0.4) return false;
    }
    // Keep clear of the sensor.
    return f.center.norm() > f.radius + 2.0;
  }
  void Add(const Footprint& f) { discs_.push_back(f); }
  void Add(const Rect& r) { rects_.push_back(r); }

 private:
  std::vector<Footprint> discs_;
  std::vector<Rect> rects_;
};

Eigen::Vector2d PolarPosition(Rng& rng, double min_d, double max_d, double max_az_deg) {
  const double d = UniformRange(rng, min_d, max_d);
  const double az = UniformRange(rng, -max_az_deg, max_az_deg) * kDegToRad;
  return {d * std::cos(az), d * std::sin(az)};
}

template <typename MakeFn>
void PlaceMany(int count, Placer& placer, Rng& rng, MakeFn make) {
  for (int i = 0; i < count; ++i) {
    for (int attempt = 0; attempt < 60; ++attempt) {
      if (make(rng, placer)) break;
    }
  }
}

}  // namespace

Scene SampleScene(const SceneSamplerConfig& cfg, uint64_t seed) {
  if (cfg.min_cars < 0 || cfg.max_cars < cfg.min_cars || cfg.min_pedestrians < 0 ||
      cfg.max_pedestrians < cfg.min_pedestrians ||
      !(cfg.max_distance > cfg.min_distance) || !(cfg.min_distance > 0.0)) {
    throw ContractError("SceneSamplerConfig: inconsistent ranges");
  }
  Rng rng(seed);
  Scene scene;
  Placer placer;
  const auto count = [&](int lo, int hi) {
    return lo + static_cast<int>(UniformIndex(rng, static_cast<uint64_t>(hi - lo + 1)));
  };

  if (cfg.clutter) {
    const int walls = count(0, 2);
    for (int i = 0; i < walls; ++i) {
      const double side = UniformUnit(rng) < 0.5 ? -1.0 : 1.0;
      const double y = side * UniformRange(rng, 9.0, 17.0);
      const double length = UniformRange(rng, 8.0, 30.0);
      const double x = UniformRange(rng, 6.0, 45.0) + 0.5 * length;
      const double depth = UniformRange(rng, 0.4, 1.5);
      const double height = UniformRange(rng, 2.5, 8.0);
      BoxObject wall{{x, y, 0.5 * height}, {length, depth, height}, 0.0,
                     geometry::kBackground};
      scene.boxes.push_back(wall);
      placer.Add(Rect{x - 0.5 * length, x + 0.5 * length, y - 0.5 * depth,
                      y + 0.5 * depth});
    }
    PlaceMany(count(0, 5), placer, rng, [&](Rng& r, Placer& p) {
      const Footprint f{PolarPosition(r, 4.0, 40.0, cfg.max_azimuth_deg + 4.0),
                        UniformRange(r, 0.08, 0.45)};
      const double height = f.radius > 0.25 ? UniformRange(r, 1.2, 3.0)
                                            : UniformRange(r, 3.0, 7.0);
      if (!p.Free(f)) return false;
      p.Add(f);
      scene.cylinders.push_back(
          {f.center, scene.ground_z, f.radius, height, geometry::kBackground});
      return true;
    });
    PlaceMany(count(0, 3), placer, rng, [&](Rng& r, Placer& p) {
      const Eigen::Vector3d ext(UniformRange(r, 0.5, 2.5), UniformRange(r, 0.4, 1.2),
                                UniformRange(r, 0.4, 1.2));
      const Footprint f{PolarPosition(r, 4.0, 35.0, cfg.max_azimuth_deg + 4.0),
                        0.5 * std::hypot(ext.x(), ext.y())};
      if (!p.Free(f)) return false;
      p.Add(f);
      scene.boxes.push_back({{f.center.x(), f.center.y(), 0.5 * ext.z()}, ext,
                             UniformRange(r, 0.0, std::numbers::pi),
                             geometry::kBackground});
      return true;
    });
  }

  PlaceMany(count(cfg.min_cars, cfg.max_cars), placer, rng, [&](Rng& r, Placer& p) {
    const Eigen::Vector3d ext(UniformRange(r, 3.8, 4.8), UniformRange(r, 1.6, 2.0),
                              UniformRange(r, 1.4, 1.7));
    const Footprint f{PolarPosition(r, cfg.min_distance, cfg.max_distance,
                                    cfg.max_azimuth_deg),
                      0.5 * std::hypot(ext.x(), ext.y())};
    const double yaw = UniformRange(r, 0.0, std::numbers::pi);
    if (!p.Free(f)) return false;
    p.Add(f);
    scene.boxes.push_back(
        {{f.center.x(), f.center.y(), 0.5 * ext.z()}, ext, yaw, geometry::kCar});
    return true;
  });

  PlaceMany(count(cfg.min_pedestrians, cfg.max_pedestrians), placer, rng,
            [&](Rng& r, Placer& p) {
              const Footprint f{PolarPosition(r, cfg.min_distance,
                                              std::min(cfg.max_distance, 25.0),
                                              cfg.max_azimuth_deg),
                                UniformRange(r, 0.25, 0.35)};
              const double height = UniformRange(r, 1.55, 1.9);
              if (!p.Free(f)) return false;
              p.Add(f);
              scene.cylinders.push_back(
                  {f.center, scene.ground_z, f.radius, height, geometry::kPedestrian});
              return true;
            });
  return scene;
}

std::vector<geometry::RangeImage> GenerateDataset(const SceneSamplerConfig& sampler,
                                                  int count,
                                                  const geometry::SensorConfig& cfg,
                                                  uint64_t seed) {
  if (count < 1) throw ContractError("GenerateDataset: count must be >= 1");
  if (sampler.min_cars < 1) {
    throw ContractError("GenerateDataset: every frame needs at least one car");
  }
  if (!(sampler.sensor_height_jitter >= 0.0) ||
      !(sampler.sensor_height - sampler.sensor_height_jitter > 0.0)) {
    throw ContractError("GenerateDataset: sensor height range must stay above the ground");
  }
  std::vector<geometry::RangeImage> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    for (uint64_t attempt = 0;; ++attempt) {
      if (attempt == 1000) {
        throw ContractError("GenerateDataset: cannot place a visible car");
      }
      const uint64_t frame_seed = DeriveSeed(seed, {static_cast<uint64_t>(i), attempt});
      const Scene scene = SampleScene(sampler, frame_seed);
      double height = sampler.sensor_height;
      if (sampler.sensor_height_jitter > 0.0) {
        Rng rng(DeriveSeed(frame_seed, {kHeightStream}));
        height += UniformRange(rng, -sampler.sensor_height_jitter,
                               sampler.sensor_height_jitter);
      }
      const SensorPose pose{{0.0, 0.0, height}, 0.0};
      geometry::RangeImage image = RaycastScan(scene, pose, cfg);
      const auto& labels = image.labels();
      const auto& mask = image.mask();
      bool has_car = false;
      for (size_t p = 0; p < labels.size() && !has_car; ++p) {
        has_car = mask[p] && labels[p] == geometry::kCar;
      }
      if (has_car) {
        out.push_back(std::move(image));
        break;
      }
    }
  }
  return out;
}

void NoiseSpec::Validate() const {
  const auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(uniform_drop) || !prob(range_coeff)) {
    throw ContractError("NoiseSpec: probabilities must lie in [0, 1]");
  }
  if (!(range_ref > 0.0)) throw ContractError("NoiseSpec: range_ref must be positive");
  if (block_count < 0 || block_rows < 1 || block_cols < 1) {
    throw ContractError("NoiseSpec: invalid block geometry");
  }
}

std::vector<std::array<int, 4>> NoiseSpec::Blocks(int rows, int cols) const {
  Rng rng(DeriveSeed(block_seed, {0xb10c}));
  const int h = std::min(block_rows, rows);
  const int w = std::min(block_cols, cols);
  std::vector<std::array<int, 4>> out;
  for (int b = 0; b < block_count; ++b) {
    const int r0 = static_cast<int>(UniformIndex(rng, rows - h + 1));
    const int c0 = static_cast<int>(UniformIndex(rng, cols - w + 1));
    out.push_back({r0, c0, h, w});
  }
  return out;
}

NoisyImage InjectDropout(const geometry::RangeImage& image, const NoiseSpec& spec) {
  spec.Validate();
  if (!image.MaskConsistent()) {
    throw ContractError("InjectDropout: input mask is inconsistent with its data");
  }
  const int rows = image.rows();
  const int cols = image.cols();
  std::vector<uint8_t> in_block(static_cast<size_t>(rows) * cols, 0);
  for (const auto& [r0, c0, h, w] : spec.Blocks(rows, cols)) {
    for (int r = r0; r < r0 + h; ++r) {
      std::fill_n(in_block.begin() + static_cast<size_t>(r) * cols + c0, w, 1);
    }
  }
  NoisyImage out{image, geometry::DropoutMask(rows, cols, 0)};
  Rng rng(spec.seed);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      // Two draws per pixel regardless of state keep streams aligned.
      const double u_uniform = UniformUnit(rng);
      const double u_range = UniformUnit(rng);
      if (!image.mask(r, c)) continue;
      const double range = image.point(r, c).norm();
      const double p_range = std::min(1.0, spec.range_coeff * range / spec.range_ref);
      const bool survives = u_uniform >= spec.uniform_drop && u_range >= p_range &&
                            !in_block[static_cast<size_t>(r) * cols + c];
      if (survives) {
        out.mask.values[static_cast<size_t>(r) * cols + c] = 1;
      } else {
        out.image.ClearPixel(r, c);
      }
    }
  }
  return out;
}

std::vector<NoisyImage> InjectDropoutAll(const std::vector<geometry::RangeImage>& images,
                                         const NoiseSpec& spec) {
  std::vector<NoisyImage> out;
  out.reserve(images.size());
  for (size_t i = 0; i < images.size(); ++i) {
    NoiseSpec frame = spec;
    frame.seed = DeriveSeed(spec.seed, {static_cast<uint64_t>(i)});
    out.push_back(InjectDropout(images[i], frame));
  }
  return out;
}

std::string DatasetManifest::Serialize() const {
  KeyValues entries(fields.begin(), fields.end());
  for (const std::string& frame : frames) entries.emplace_back("frame", frame);
  return SerializeKeyValues(entries);
}

DatasetManifest DatasetManifest::Parse(const std::string& text) {
  DatasetManifest manifest;
  for (auto& [key, value] : ParseKeyValues(text)) {
    if (key == "frame") {
      manifest.frames.push_back(std::move(value));
    } else {
      manifest.fields[key] = std::move(value);
    }
  }
  return manifest;
}

std::map<std::string, std::string> NoiseSpecFields(const NoiseSpec& spec) {
  return {{"noise.uniform_drop", FormatDouble(spec.uniform_drop)},
          {"noise.range_coeff", FormatDouble(spec.range_coeff)},
          {"noise.range_ref", FormatDouble(spec.range_ref)},
          {"noise.block_count", std::to_string(spec.block_count)},
          {"noise.block_rows", std::to_string(spec.block_rows)},
          {"noise.block_cols", std::to_string(spec.block_cols)},
          {"noise.block_seed", std::to_string(spec.block_seed)},
          {"noise.seed", std::to_string(spec.seed)}};
}

NoiseSpec NoiseSpecFromFields(const std::map<std::string, std::string>& fields) {
  NoiseSpec spec;
  const auto get = [&](const std::string& key) -> const std::string* {
    const auto it = fields.find(key);
    return it == fields.end() ? nullptr : &it->second;
  };
  if (auto v = get("noise.uniform_drop")) spec.uniform_drop = ParseDouble(*v, "noise.uniform_drop");
  if (auto v = get("noise.range_coeff")) spec.range_coeff = ParseDouble(*v, "noise.range_coeff");
  if (auto v = get("noise.range_ref")) spec.range_ref = ParseDouble(*v, "noise.range_ref");
  if (auto v = get("noise.block_count")) spec.block_count = static_cast<int>(ParseInt(*v, "noise.block_count"));
  if (auto v = get("noise.block_rows")) spec.block_rows = static_cast<int>(ParseInt(*v, "noise.block_rows"));
  if (auto v = get("noise.block_cols")) spec.block_cols = static_cast<int>(ParseInt(*v, "noise.block_cols"));
  if (auto v = get("noise.block_seed")) spec.block_seed = ParseUint(*v, "noise.block_seed");
  if (auto v = get("noise.seed")) spec.seed = ParseUint(*v, "noise.seed");
  spec.Validate();
  return spec;
}

std::string WriteDataset(const std::string& dir,
                         const std::vector<geometry::RangeImage>& images,
                         const std::map<std::string, std::string>& fields) {
  std::filesystem::create_directories(dir);
  DatasetManifest manifest;
  manifest.fields = fields;
  manifest.fields["count"] = std::to_string(images.size());
  for (size_t i = 0; i < images.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%05zu.epri", i);
    geometry::SaveRangeImage((std::filesystem::path(dir) / name).string(), images[i]);
    manifest.frames.emplace_back(name);
  }
  const std::string path = (std::filesystem::path(dir) / "dataset.manifest").string();
  WriteFileBytes(path, manifest.Serialize());
  return path;
}

std::vector<geometry::RangeImage> LoadDataset(const std::string& manifest_path,
                                              DatasetManifest* manifest_out) {
  const DatasetManifest manifest = DatasetManifest::Parse(ReadFileBytes(manifest_path));
  if (manifest.frames.empty()) {
    throw ContractError("dataset manifest lists no frames: " + manifest_path);
  }
  const std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();
  std::vector<geometry::RangeImage> images;
  images.reserve(manifest.frames.size());
  for (const std::string& frame : manifest.frames) {
    images.push_back(geometry::LoadRangeImage((base / frame).string()));
  }
  if (manifest_out) *manifest_out = manifest;
  return images;
}

}  // namespace simulator
}  // namespace epointda
