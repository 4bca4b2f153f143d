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

#ifndef EPOINTDA_NOISERENDER_GAN_H_
#define EPOINTDA_NOISERENDER_GAN_H_

#include <functional>
#include <string>
#include <vector>

#include "epointda/geometry/range_image.h"
#include "epointda/numerics/layers.h"
#include "epointda/numerics/optimizer.h"

namespace epointda {
namespace noiserender {

using numerics::NdArray;
using numerics::Variable;

// kSwapped scores generated samples with log D and genuine ones with
// log(1 - D); the discriminator then minimizes the value and the generator
// maximizes it. kStandard is the usual log D(genuine) + log(1 - D(generated))
// game, maximized by the discriminator.
enum class GanConvention { kSwapped, kStandard };

const char* GanConventionName(GanConvention c);
GanConvention ParseGanConvention(const std::string& name);

// Sim-side adversarial value: D_s on G_s(x_r) and on genuine x_s. Inputs
// must lie strictly inside (0, 1).
Variable GanLossRs(const Variable& d_on_generated, const Variable& d_on_sim,
                   GanConvention convention = GanConvention::kSwapped);
// Real-side mirror: D_r on G_r(x_s) and on genuine x_r.
Variable GanLossSr(const Variable& d_on_generated, const Variable& d_on_real,
                   GanConvention convention = GanConvention::kSwapped);

using ImageMap = std::function<Variable(const Variable&)>;

// Mean absolute reconstruction error of both translation cycles.
Variable CycleLoss(const ImageMap& g_s, const ImageMap& g_r, const Variable& real,
                   const Variable& sim);

struct GanBundleConfig {
  int generator_width = 8;
  int discriminator_width = 8;
  double input_scale = 10.0;
};

// Image-to-image generators and image-to-scalar discriminators over
// [N, 3, H, W] tensors in scaled coordinates.
class GanBundle {
 public:
  GanBundle() = default;
  GanBundle(const GanBundleConfig& config, uint64_t seed);

  // Real -> sim. Keeps valid pixels and synthesizes values in the holes
  // given by `mask` ([N, 1, H, W], 1 = valid).
  Variable GenerateSim(const Variable& real, const NdArray& mask) const;
  // Sim -> real.
  Variable GenerateReal(const Variable& sim) const;
  Variable DiscriminateSim(const Variable& x) const;   // [N, 1] in (0, 1)
  Variable DiscriminateReal(const Variable& x) const;  // [N, 1] in (0, 1)

  numerics::ParameterList GeneratorParameters() const;
  numerics::ParameterList DiscriminatorParameters() const;
  const GanBundleConfig& config() const { return config_; }

 private:
  struct Generator {
    numerics::Conv2dLayer c1, c2, c3;
  };
  struct Discriminator {
    numerics::Conv2dLayer c1, c2, head;
  };
  static Variable RunGenerator(const Generator& g, const Variable& x);
  static Variable RunDiscriminator(const Discriminator& d, const Variable& x);

  GanBundleConfig config_;
  Generator gs_, gr_;
  Discriminator ds_, dr_;
};

struct GanTrainConfig {
  int steps = 50;
  int batch_size = 2;
  numerics::SgdConfig sgd{0.01, 0.5, 0.5, 20000};
  GanConvention convention = GanConvention::kSwapped;
  double lambda_gan_rs = 1.0;
  double lambda_gan_sr = 1.0;
  double lambda_cyc = 1.0;
  uint64_t seed = 0;
};

struct GanStepLosses {
  double gan_rs = 0.0;
  double gan_sr = 0.0;
  double cyc = 0.0;
};

// One discriminator update followed by one generator update on the given
// batches. Returns the losses evaluated before the updates.
GanStepLosses GanTrainStep(GanBundle& bundle, numerics::SgdOptimizer& gen_opt,
                           numerics::SgdOptimizer& disc_opt,
                           const std::vector<const geometry::RangeImage*>& real,
                           const std::vector<const geometry::RangeImage*>& sim,
                           const GanTrainConfig& config);

struct GanTrainResult {
  GanBundle bundle;
  std::vector<GanStepLosses> log;
};

GanTrainResult TrainGanBundle(const std::vector<geometry::RangeImage>& real,
                              const std::vector<geometry::RangeImage>& sim,
                              const GanBundleConfig& bundle_config,
                              const GanTrainConfig& config);

}  // namespace noiserender
}  // namespace epointda

#endif  // EPOINTDA_NOISERENDER_GAN_H_
