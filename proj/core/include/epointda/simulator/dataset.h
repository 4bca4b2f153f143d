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

#ifndef EPOINTDA_SIMULATOR_DATASET_H_
#define EPOINTDA_SIMULATOR_DATASET_H_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "epointda/geometry/range_image.h"
#include "epointda/simulator/scene.h"

namespace epointda {
namespace simulator {

struct SceneSamplerConfig {
  int min_cars = 1;
  int max_cars = 6;
  int min_pedestrians = 0;
  int max_pedestrians = 4;
  double min_distance = 5.0;
  double max_distance = 35.0;
  double max_azimuth_deg = 40.0;
  // Background structures: walls, poles and low street furniture.
  bool clutter = true;
  double sensor_height = 1.73;
  // Per-frame mounting height is uniform in sensor_height +- this.
  double sensor_height_jitter = 0.0;
};

// Samples a scene with non-overlapping object footprints.
Scene SampleScene(const SceneSamplerConfig& cfg, uint64_t seed);

// `count` clean scans; frame i depends only on (seed, i). Scenes whose cars
// are all invisible are resampled, so every frame holds at least one car
// pixel.
std::vector<geometry::RangeImage> GenerateDataset(const SceneSamplerConfig& sampler,
                                                  int count,
                                                  const geometry::SensorConfig& cfg,
                                                  uint64_t seed);

struct NoiseSpec {
  double uniform_drop = 0.0;  // rho
  // Range-dependent drop probability min(1, range_coeff * r / range_ref).
  double range_coeff = 0.0;
  double range_ref = 80.0;
  // Axis-aligned image-space patches. Their placement depends only on
  // block_seed, so every frame of a dataset shares it.
  int block_count = 0;
  int block_rows = 4;
  int block_cols = 24;
  uint64_t block_seed = 0;
  uint64_t seed = 0;

  void Validate() const;
  // Block rectangles as (row0, col0, rows, cols) for an H x W image.
  std::vector<std::array<int, 4>> Blocks(int rows, int cols) const;
};

struct NoisyImage {
  geometry::RangeImage image;
  geometry::DropoutMask mask;  // 1 where the input return survived
};

// Zeroes dropped pixels in every channel. Labels are kept; the mask marks
// which of them remain valid. Survival is the intersection of the uniform,
// range and block components.
NoisyImage InjectDropout(const geometry::RangeImage& image, const NoiseSpec& spec);

// Applies InjectDropout with a per-frame seed derived from spec.seed.
std::vector<NoisyImage> InjectDropoutAll(const std::vector<geometry::RangeImage>& images,
                                         const NoiseSpec& spec);

// key=value text describing a dataset directory.
struct DatasetManifest {
  std::map<std::string, std::string> fields;
  std::vector<std::string> frames;  // paths relative to the manifest

  std::string Serialize() const;
  static DatasetManifest Parse(const std::string& text);
};

std::map<std::string, std::string> NoiseSpecFields(const NoiseSpec& spec);
NoiseSpec NoiseSpecFromFields(const std::map<std::string, std::string>& fields);

// Writes frame_00000.epri ... and dataset.manifest into `dir`; returns the
// manifest path.
std::string WriteDataset(const std::string& dir,
                         const std::vector<geometry::RangeImage>& images,
                         const std::map<std::string, std::string>& fields);
std::vector<geometry::RangeImage> LoadDataset(const std::string& manifest_path,
                                              DatasetManifest* manifest = nullptr);

}  // namespace simulator
}  // namespace epointda

#endif  // EPOINTDA_SIMULATOR_DATASET_H_
