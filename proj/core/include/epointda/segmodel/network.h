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

#ifndef EPOINTDA_SEGMODEL_NETWORK_H_
#define EPOINTDA_SEGMODEL_NETWORK_H_

#include <array>
#include <string>
#include <vector>

#include "epointda/align/asac.h"
#include "epointda/geometry/range_image.h"
#include "epointda/numerics/layers.h"
#include "epointda/numerics/ops.h"

namespace epointda {
namespace segmodel {

using numerics::NdArray;
using numerics::Variable;

struct SegNetConfig {
  std::array<int, 3> widths{16, 32, 64};  // encoder stages, strides 1, 2, 2
  numerics::NormMode norm = numerics::NormMode::kInstance;
  int norm_groups = 4;  // group normalization only
  bool use_asac = true;
  int num_head_convs = 2;
  int num_classes = geometry::kNumClasses;
  double focal_gamma = 2.0;
  double input_scale = 10.0;  // coordinates are divided by this before the first layer

  void Validate() const;
};

struct SegOutput {
  Variable logits;    // [N, L, H, W]
  Variable features;  // deepest encoder activations, [N, D]
};

// Encoder of three strided blocks (conv or ASAC, then norm and relu), a
// decoder of 2x2 stride-2 deconvolutions with additive skips, and a head of
// num_head_convs 3x3 convolutions whose last one emits L logits.
class SegNet {
 public:
  SegNet() = default;
  SegNet(const SegNetConfig& config, uint64_t seed);

  // `training` selects batch statistics for BN; `update_running` controls
  // whether this pass feeds BN's running averages.
  SegOutput Forward(const Variable& x, bool training, bool update_running = true);
  // Encoder only; returns flattened deepest features.
  Variable Features(const Variable& x, bool training, bool update_running = true);

  numerics::ParameterList Parameters() const;
  int64_t ParameterCount() const;
  const SegNetConfig& config() const { return config_; }

 private:
  struct Block {
    numerics::Conv2dLayer conv;
    align::AsacLayer asac;
    numerics::NormLayer norm;
  };

  Variable RunBlock(Block& block, const Variable& x, bool training, bool update_running) const;
  std::array<Variable, 3> Encode(const Variable& x, bool training, bool update_running);

  SegNetConfig config_;
  std::array<Block, 3> encoder_;
  numerics::Deconv2dLayer up3_;
  numerics::Deconv2dLayer up2_;
  std::vector<numerics::Conv2dLayer> head_;
};

// Argmax class per pixel of a single image (ties toward the lower index).
std::vector<uint8_t> Predict(SegNet& net, const geometry::RangeImage& image);
std::vector<uint8_t> PredictBatch(SegNet& net,
                                  const std::vector<const geometry::RangeImage*>& images);

void SaveSegNet(const std::string& path, const SegNet& net);
void LoadSegNet(const std::string& path, const SegNet& net);

}  // namespace segmodel
}  // namespace epointda

#endif  // EPOINTDA_SEGMODEL_NETWORK_H_
