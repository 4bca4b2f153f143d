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

#include "epointda/segmodel/network.h"

#include "epointda/geometry/tensor.h"
#include "epointda/numerics/checkpoint.h"
#include "epointda/numerics/losses.h"
#include "epointda/numerics/rng.h"

namespace epointda {
namespace segmodel {

void SegNetConfig::Validate() const {
  for (const int w : widths) {
    if (w < 1) throw ContractError("SegNetConfig: widths must be positive");
  }
  if (num_head_convs < 1 || num_head_convs > 5) {
    throw ContractError("SegNetConfig: num_head_convs must be in [1, 5], got " +
                        std::to_string(num_head_convs));
  }
  if (num_classes < 2) throw ContractError("SegNetConfig: need at least two classes");
  if (!(focal_gamma >= 0.0)) throw ContractError("SegNetConfig: focal gamma must be >= 0");
  if (!(input_scale > 0.0)) throw ContractError("SegNetConfig: input_scale must be positive");
  if (norm == numerics::NormMode::kGroup) {
    for (const int w : widths) {
      if (norm_groups < 1 || w % norm_groups != 0) {
        throw ContractError("SegNetConfig: group count must divide every width");
      }
    }
  }
}

SegNet::SegNet(const SegNetConfig& config, uint64_t seed) : config_(config) {
  config.Validate();
  numerics::Rng rng(seed);
  int64_t in = 3;
  for (int i = 0; i < 3; ++i) {
    const numerics::Conv2dGeometry geometry{i == 0 ? 1 : 2, 1};
    Block& block = encoder_[i];
    if (config.use_asac) {
      block.asac = align::AsacLayer(in, config.widths[i], 3, geometry, rng);
    } else {
      block.conv = numerics::Conv2dLayer(in, config.widths[i], 3, geometry, rng);
    }
    block.norm = numerics::NormLayer(config.widths[i], config.norm, 1e-5, config.norm_groups);
    in = config.widths[i];
  }
  up3_ = numerics::Deconv2dLayer(config.widths[2], config.widths[1], 2, 2, rng);
  up2_ = numerics::Deconv2dLayer(config.widths[1], config.widths[0], 2, 2, rng);
  for (int i = 0; i < config.num_head_convs; ++i) {
    const bool last = i + 1 == config.num_head_convs;
    head_.emplace_back(config.widths[0], last ? config.num_classes : config.widths[0], 3,
                       numerics::Conv2dGeometry{1, 1}, rng);
  }
}

Variable SegNet::RunBlock(Block& block, const Variable& x, bool training,
                          bool update_running) const {
  const Variable h = config_.use_asac ? block.asac.Forward(x) : block.conv.Forward(x);
  return numerics::Relu(block.norm.Forward(h, training, update_running));
}

std::array<Variable, 3> SegNet::Encode(const Variable& x, bool training, bool update_running) {
  const auto& s = x.shape();
  if (s.size() != 4 || s[1] != 3 || s[2] % 4 != 0 || s[3] % 4 != 0) {
    throw ContractError("SegNet: input must be [N, 3, H, W] with H, W divisible by 4, got " +
                        numerics::ShapeToString(s));
  }
  std::array<Variable, 3> out;
  out[0] = RunBlock(encoder_[0], x, training, update_running);
  out[1] = RunBlock(encoder_[1], out[0], training, update_running);
  out[2] = RunBlock(encoder_[2], out[1], training, update_running);
  return out;
}

Variable SegNet::Features(const Variable& x, bool training, bool update_running) {
  const Variable deep = Encode(x, training, update_running)[2];
  const auto& s = deep.shape();
  return numerics::Reshape(deep, {s[0], s[1] * s[2] * s[3]});
}

SegOutput SegNet::Forward(const Variable& x, bool training, bool update_running) {
  const std::array<Variable, 3> enc = Encode(x, training, update_running);
  Variable h = numerics::Relu(numerics::Add(up3_.Forward(enc[2]), enc[1]));
  h = numerics::Relu(numerics::Add(up2_.Forward(h), enc[0]));
  for (size_t i = 0; i + 1 < head_.size(); ++i) h = numerics::Relu(head_[i].Forward(h));
  const Variable logits = head_.back().Forward(h);
  const auto& s = enc[2].shape();
  return {logits, numerics::Reshape(enc[2], {s[0], s[1] * s[2] * s[3]})};
}

numerics::ParameterList SegNet::Parameters() const {
  numerics::ParameterList out;
  for (int i = 0; i < 3; ++i) {
    const std::string prefix = "seg.enc" + std::to_string(i);
    if (config_.use_asac) {
      encoder_[i].asac.Collect(prefix, &out);
    } else {
      encoder_[i].conv.Collect(prefix + ".conv", &out);
    }
    encoder_[i].norm.Collect(prefix + ".norm", &out);
  }
  up3_.Collect("seg.up3", &out);
  up2_.Collect("seg.up2", &out);
  for (size_t i = 0; i < head_.size(); ++i) {
    head_[i].Collect("seg.head" + std::to_string(i), &out);
  }
  return out;
}

int64_t SegNet::ParameterCount() const {
  int64_t total = 0;
  for (const auto& p : Parameters()) {
    if (p.trainable) total += p.variable.value().size();
  }
  return total;
}

std::vector<uint8_t> PredictBatch(SegNet& net,
                                  const std::vector<const geometry::RangeImage*>& images) {
  const Variable x =
      Variable::Constant(geometry::ImagesToTensor(images, net.config().input_scale));
  return numerics::ChannelArgmax(net.Forward(x, false, false).logits.value());
}

std::vector<uint8_t> Predict(SegNet& net, const geometry::RangeImage& image) {
  return PredictBatch(net, {&image});
}

void SaveSegNet(const std::string& path, const SegNet& net) {
  numerics::SaveCheckpoint(path, net.Parameters());
}

void LoadSegNet(const std::string& path, const SegNet& net) {
  numerics::LoadCheckpoint(path, net.Parameters());
}

}  // namespace segmodel
}  // namespace epointda
