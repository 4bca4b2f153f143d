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

#ifndef EPOINTDA_EVALCLI_EXPERIMENT_H_
#define EPOINTDA_EVALCLI_EXPERIMENT_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "epointda/evalcli/metrics.h"
#include "epointda/geometry/range_image.h"
#include "epointda/noiserender/renderer.h"
#include "epointda/segmodel/train.h"
#include "epointda/simulator/dataset.h"
#include "epointda/text_format.h"

namespace epointda {
namespace evalcli {

struct ModuleToggles {
  bool sdnr = true;
  bool in = true;  // instance normalization; batch normalization when off
  bool homm = true;
  bool asac = true;
  bool hhead = true;  // two head convolutions instead of one

  std::string Name() const;  // "Baseline" or "+SDNR+IN..."
};

struct ExperimentConfig {
  geometry::SensorConfig sensor = geometry::SensorConfig::DeskScale();
  simulator::SceneSamplerConfig source_scenes = DefaultScenes();
  simulator::SceneSamplerConfig target_scenes = DefaultScenes();
  int source_count = 500;
  int target_count = 500;
  int test_count = 200;
  uint64_t data_seed = 0;
  simulator::NoiseSpec noise = DefaultNoise();

  ModuleToggles modules;
  // Overrides applied after the module toggles.
  std::optional<numerics::NormMode> norm_override;
  std::optional<int> head_convs_override;

  // Net, weights and renderer fields are resolved from the toggles.
  segmodel::AdaptConfig train = DefaultTraining();
  int renderer_pretrain_epochs = 6;
  int renderer_pretrain_count = 200;
  bool freeze_pretrained_renderer = true;
  uint64_t seed = 0;

  static simulator::NoiseSpec DefaultNoise();
  static simulator::SceneSamplerConfig DefaultScenes();
  static segmodel::AdaptConfig DefaultTraining();
  // Effective training configuration after toggles and overrides.
  segmodel::AdaptConfig Resolve() const;
  // Flat key=value description; FromFields inverts it. Keys under
  // "resolved." are informational and ignored when parsing.
  KeyValues Fields() const;
  static ExperimentConfig FromFields(const KeyValues& fields);
};

// Generated frames shared by every cell of a seed.
struct BenchmarkData {
  std::vector<geometry::RangeImage> source;
  std::vector<geometry::RangeImage> target;       // noisy, labels unused in training
  std::vector<geometry::RangeImage> test;         // noisy, held out
  std::vector<geometry::DropoutMask> test_masks;  // ground-truth survival masks
  std::vector<geometry::RangeImage> test_clean;
};

BenchmarkData MakeBenchmark(const ExperimentConfig& config);

noiserender::RendererTrainResult PretrainRenderer(const BenchmarkData& data,
                                                  const ExperimentConfig& config);

struct ExperimentResult {
  MetricsRecord metrics;
  segmodel::TrainState state;
  double train_seconds = 0.0;
};

// Pooled per-pixel metrics over the test frames' valid returns.
MetricsRecord Evaluate(segmodel::SegNet& net, const std::vector<geometry::RangeImage>& images,
                       int num_classes);

// Trains one cell. `renderer` is the pretrained renderer when SDNR is on.
ExperimentResult RunExperiment(const ExperimentConfig& config, const BenchmarkData& data,
                               const noiserender::RendererNet* renderer);

// IoU of the rendered keep-mask of clean test frames against their
// ground-truth survival masks, plus the IoU of the dropped sets.
struct MaskFidelity {
  double kept_iou = 0.0;
  double dropped_iou = 0.0;
  double all_kept_iou = 0.0;  // a renderer that drops nothing
};

MaskFidelity RenderedMaskFidelity(const noiserender::RendererNet& renderer,
                                  const std::vector<geometry::RangeImage>& clean,
                                  const std::vector<geometry::DropoutMask>& truth,
                                  const noiserender::CompletionConfig& completion,
                                  double threshold = 0.5);

}  // namespace evalcli
}  // namespace epointda

#endif  // EPOINTDA_EVALCLI_EXPERIMENT_H_
