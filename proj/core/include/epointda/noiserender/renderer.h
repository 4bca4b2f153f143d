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

#ifndef EPOINTDA_NOISERENDER_RENDERER_H_
#define EPOINTDA_NOISERENDER_RENDERER_H_

#include <span>
#include <string>
#include <vector>

#include "epointda/geometry/range_image.h"
#include "epointda/noiserender/completion.h"
#include "epointda/numerics/layers.h"
#include "epointda/numerics/optimizer.h"
#include "epointda/numerics/rng.h"

namespace epointda {
namespace noiserender {

// Logit channel 0 scores "dropped", channel 1 "kept".
inline constexpr int kDroppedChannel = 0;
inline constexpr int kKeptChannel = 1;

// Per-pixel cross-entropy of renderer logits [N, 2, H, W] against the
// target mask (N*H*W values in {0, 1}), averaged over pixels.
Variable MaskLoss(const Variable& logits, const std::vector<uint8_t>& mask);

struct RendererConfig {
  std::vector<int> widths{8, 16, 16};  // hidden 3x3 layers; a 1x1 layer emits 2 logits
  double input_scale = 10.0;
  // Appends each pixel's normalized (row, col) to the input so that
  // sensor-fixed dropout patterns are representable.
  bool coord_channels = true;
  // Learned per-position logit offsets for a fixed frame size; 0 disables.
  int position_rows = 32;
  int position_cols = 256;

  void Validate() const;
};

class RendererNet {
 public:
  RendererNet() = default;
  RendererNet(const RendererConfig& config, uint64_t seed);

  // [N, 3, H, W] scaled coordinates -> [N, 2, H, W] logits.
  Variable Forward(const Variable& x) const;
  // Keep probability per pixel for each image, N*H*W values.
  std::vector<double> KeepProbability(
      const std::vector<const geometry::RangeImage*>& images) const;

  numerics::ParameterList Parameters() const;
  const RendererConfig& config() const { return config_; }

 private:
  RendererConfig config_;
  std::vector<numerics::Conv2dLayer> layers_;
  numerics::Conv2dLayer coord_layer_;
  numerics::Variable position_bias_;  // [1, 2, rows, cols]
};

void SaveRenderer(const std::string& path, const RendererNet& net);
void LoadRenderer(const std::string& path, const RendererNet& net);

struct RendererTrainConfig {
  int epochs = 5;
  int batch_size = 4;
  numerics::SgdConfig sgd{0.02, 0.9, 0.5, 20000};
  CompletionConfig completion;
  uint64_t seed = 0;
};

// Training pairs for self-supervision: completed input and original mask.
struct RendererPair {
  geometry::RangeImage completed;
  std::vector<uint8_t> mask;
};
std::vector<RendererPair> MakeRendererPairs(const std::vector<geometry::RangeImage>& real,
                                            const CompletionConfig& completion,
                                            const GanBundle* bundle = nullptr);

// One SGD step of the mask loss on a batch of pairs; returns the loss before
// the update. Gradients reach only the renderer.
double RendererTrainStep(const RendererNet& net, numerics::SgdOptimizer& optimizer,
                         const std::vector<const RendererPair*>& batch);

struct RendererTrainResult {
  RendererNet net;
  std::vector<double> epoch_loss;  // mean mask loss per epoch
  bool aborted = false;
  std::string diagnostic;
};

// Trains on (complete_image(x_r), extract_mask(x_r)) pairs. A non-finite
// loss stops training and restores the last finite parameters.
RendererTrainResult TrainRenderer(const std::vector<geometry::RangeImage>& real,
                                  const RendererConfig& net_config,
                                  const RendererTrainConfig& config);

// x' = mask . x per channel with mask = [keep_prob >= threshold] intersected
// with x's own mask. Labels are preserved.
geometry::RangeImage RenderAdapted(const geometry::RangeImage& image,
                                   std::span<const double> keep_prob,
                                   double threshold = 0.5);
// As above with mask ~ Bernoulli(keep_prob) per pixel.
geometry::RangeImage RenderAdaptedSampled(const geometry::RangeImage& image,
                                          std::span<const double> keep_prob,
                                          numerics::Rng& rng);

}  // namespace noiserender
}  // namespace epointda

#endif  // EPOINTDA_NOISERENDER_RENDERER_H_
