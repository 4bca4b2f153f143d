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

#ifndef EPOINTDA_SEGMODEL_TRAIN_H_
#define EPOINTDA_SEGMODEL_TRAIN_H_

#include <string>
#include <vector>

#include "epointda/align/moments.h"
#include "epointda/geometry/range_image.h"
#include "epointda/noiserender/completion.h"
#include "epointda/noiserender/gan.h"
#include "epointda/noiserender/renderer.h"
#include "epointda/numerics/optimizer.h"
#include "epointda/segmodel/network.h"
#include "epointda/segmodel/objective.h"

namespace epointda {
namespace segmodel {

enum class RenderMode {
  kThreshold,  // keep where the renderer's keep probability >= threshold
  kSampled,    // keep with the renderer's keep probability
};

const char* RenderModeName(RenderMode mode);
RenderMode ParseRenderMode(const std::string& name);

struct AdaptConfig {
  SegNetConfig net;
  LossWeights weights;
  align::HommConfig homm;  // the Monte Carlo seed is re-derived every step

  bool use_sdnr = true;
  RenderMode render_mode = RenderMode::kSampled;
  double render_threshold = 0.5;
  noiserender::RendererConfig renderer;
  numerics::SgdConfig renderer_sgd{0.02, 0.9, 0.5, 20000};
  int renderer_batch_size = 4;
  // Skips renderer updates; requires a pretrained renderer to be useful.
  bool freeze_renderer = false;
  noiserender::CompletionConfig completion;
  noiserender::GanBundleConfig gan;
  noiserender::GanTrainConfig gan_train;  // used with the adversarial backend

  int epochs = 5;
  int batch_size = 20;
  numerics::SgdConfig sgd{0.05, 0.9, 0.5, 20000};
  uint64_t seed = 0;
  // Records whether each network's step left the other network untouched.
  bool check_truncation = false;

  void Validate() const;
};

struct LossLogRow {
  int64_t step = 0;
  double loss_total = 0.0;
  double loss_seg = 0.0;
  double loss_homm = 0.0;
  double loss_mask = 0.0;
  double lr = 0.0;

  bool operator==(const LossLogRow&) const = default;
};

struct TrainState {
  SegNet net;
  noiserender::RendererNet renderer;
  bool has_renderer = false;
  noiserender::GanBundle gan;
  bool has_gan = false;
  numerics::OptimizerState seg_optimizer;
  numerics::OptimizerState renderer_optimizer;
  int64_t step = 0;
  uint64_t seed = 0;
  std::vector<LossLogRow> log;
  std::vector<LossComponents> components;  // one per logged step
  int64_t truncation_checks = 0;
  int64_t truncation_violations = 0;
  bool aborted = false;
  std::string diagnostic;
};

// Joint training: per step an optional adversarial-completion update, a
// renderer update on target (completed image, mask) pairs, then a
// segmentation update on rendered source images plus HoMM between rendered
// source and target features. Renderer outputs enter the segmentation step
// as constants. `pretrained` seeds the renderer when given.
TrainState AdaptTrain(const std::vector<geometry::RangeImage>& source,
                      const std::vector<geometry::RangeImage>& target,
                      const AdaptConfig& config,
                      const noiserender::RendererNet* pretrained = nullptr);

// Plain supervised training on source images with the focal loss.
TrainState TrainSupervised(const std::vector<geometry::RangeImage>& source,
                           const SegNetConfig& net, int epochs, int batch_size,
                           const numerics::SgdConfig& sgd, uint64_t seed);

void WriteLossLog(const std::string& path, const std::vector<LossLogRow>& rows);
std::vector<LossLogRow> ReadLossLog(const std::string& path);

}  // namespace segmodel
}  // namespace epointda

#endif  // EPOINTDA_SEGMODEL_TRAIN_H_
