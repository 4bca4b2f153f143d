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

#include "epointda/noiserender/renderer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "epointda/geometry/projection.h"
#include "epointda/geometry/tensor.h"
#include "epointda/numerics/checkpoint.h"
#include "epointda/numerics/losses.h"
#include "epointda/numerics/ops.h"

namespace epointda {
namespace noiserender {

Variable MaskLoss(const Variable& logits, const std::vector<uint8_t>& mask) {
  if (logits.shape().size() != 4 || logits.shape()[1] != 2) {
    throw ContractError("mask_loss: logits must be [N, 2, H, W], got " +
                        numerics::ShapeToString(logits.shape()));
  }
  for (const uint8_t m : mask) {
    if (m > 1) throw ContractError("mask_loss: target mask must be binary");
  }
  return numerics::SoftmaxFocalLoss(logits, mask, 0.0);
}

void RendererConfig::Validate() const {
  if (widths.empty()) throw ContractError("RendererConfig: need at least one hidden layer");
  for (const int w : widths) {
    if (w < 1) throw ContractError("RendererConfig: widths must be positive");
  }
  if (position_rows < 0 || position_cols < 0 || (position_rows == 0) != (position_cols == 0)) {
    throw ContractError("RendererConfig: position bias size must be both zero or both positive");
  }
  if (!(input_scale > 0.0)) throw ContractError("RendererConfig: input_scale must be positive");
}

RendererNet::RendererNet(const RendererConfig& config, uint64_t seed) : config_(config) {
  config.Validate();
  numerics::Rng rng(seed);
  int64_t in = 3;
  for (const int w : config.widths) {
    layers_.emplace_back(in, w, 3, numerics::Conv2dGeometry{1, 1}, rng);
    in = w;
  }
  layers_.emplace_back(in, 2, 1, numerics::Conv2dGeometry{1, 0}, rng);
  if (config.coord_channels) {
    coord_layer_ = numerics::Conv2dLayer(2, config.widths[0], 3, {1, 1}, rng);
  }
  if (config.position_rows > 0) {
    position_bias_ = Variable::Parameter(
        NdArray({1, 2, config.position_rows, config.position_cols}, 0.0));
  }
}

Variable RendererNet::Forward(const Variable& x) const {
  if (x.shape().size() != 4 || x.shape()[1] != 3) {
    throw ContractError("RendererNet: input must be [N, 3, H, W], got " +
                        numerics::ShapeToString(x.shape()));
  }
  Variable h = layers_[0].Forward(x);
  if (config_.coord_channels) {
    const int64_t n = x.shape()[0], rows = x.shape()[2], cols = x.shape()[3];
    NdArray coords({n, 2, rows, cols});
    auto dst = coords.mutable_data();
    for (int64_t b = 0; b < n; ++b) {
      for (int64_t r = 0; r < rows; ++r) {
        for (int64_t c = 0; c < cols; ++c) {
          const int64_t p = r * cols + c;
          dst[(b * 2) * rows * cols + p] = 2.0 * (r + 0.5) / rows - 1.0;
          dst[(b * 2 + 1) * rows * cols + p] = 2.0 * (c + 0.5) / cols - 1.0;
        }
      }
    }
    h = numerics::Add(h, coord_layer_.Forward(Variable::Constant(std::move(coords))));
  }
  h = numerics::Relu(h);
  for (size_t i = 1; i + 1 < layers_.size(); ++i) h = numerics::Relu(layers_[i].Forward(h));
  Variable logits = layers_.back().Forward(h);
  if (config_.position_rows > 0) {
    if (x.shape()[2] != config_.position_rows || x.shape()[3] != config_.position_cols) {
      throw ContractError("RendererNet: position bias expects " +
                          std::to_string(config_.position_rows) + " x " +
                          std::to_string(config_.position_cols) + " frames");
    }
    // Gain sqrt(H W) keeps the per-position step comparable to a
    // convolution weight under a pixel-mean loss.
    const double gain = std::sqrt(static_cast<double>(config_.position_rows) *
                                  config_.position_cols);
    logits = numerics::AddBatchBroadcast(logits, numerics::Scale(position_bias_, gain));
  }
  return logits;
}

std::vector<double> RendererNet::KeepProbability(
    const std::vector<const geometry::RangeImage*>& images) const {
  const Variable x =
      Variable::Constant(geometry::ImagesToTensor(images, config_.input_scale));
  const NdArray probs = numerics::ChannelSoftmax(Forward(x)).value();
  const int64_t n = probs.dim(0);
  const int64_t plane = probs.dim(2) * probs.dim(3);
  std::vector<double> out(static_cast<size_t>(n * plane));
  const auto src = probs.data();
  for (int64_t i = 0; i < n; ++i) {
    std::copy_n(src.begin() + (i * 2 + kKeptChannel) * plane, plane,
                out.begin() + i * plane);
  }
  return out;
}

numerics::ParameterList RendererNet::Parameters() const {
  numerics::ParameterList out;
  for (size_t i = 0; i < layers_.size(); ++i) {
    layers_[i].Collect("renderer.conv" + std::to_string(i), &out);
  }
  if (config_.coord_channels) coord_layer_.Collect("renderer.coord", &out);
  if (config_.position_rows > 0) out.push_back({"renderer.position", position_bias_, true});
  return out;
}

void SaveRenderer(const std::string& path, const RendererNet& net) {
  numerics::SaveCheckpoint(path, net.Parameters());
}

void LoadRenderer(const std::string& path, const RendererNet& net) {
  numerics::LoadCheckpoint(path, net.Parameters());
}

std::vector<RendererPair> MakeRendererPairs(const std::vector<geometry::RangeImage>& real,
                                            const CompletionConfig& completion,
                                            const GanBundle* bundle) {
  std::vector<RendererPair> pairs;
  pairs.reserve(real.size());
  for (const geometry::RangeImage& img : real) {
    pairs.push_back({CompleteImage(img, completion, bundle), geometry::ExtractMask(img).values});
  }
  return pairs;
}

double RendererTrainStep(const RendererNet& net, numerics::SgdOptimizer& optimizer,
                         const std::vector<const RendererPair*>& batch) {
  std::vector<const geometry::RangeImage*> inputs;
  std::vector<uint8_t> target;
  for (const RendererPair* pair : batch) {
    inputs.push_back(&pair->completed);
    target.insert(target.end(), pair->mask.begin(), pair->mask.end());
  }
  // The input is a constant: no gradient crosses into whatever produced it.
  const Variable x =
      Variable::Constant(geometry::ImagesToTensor(inputs, net.config().input_scale));
  const Variable loss = MaskLoss(net.Forward(x), target);
  const double value = loss.value()[0];
  if (!std::isfinite(value)) return value;
  optimizer.ZeroGrad();
  loss.Backward();
  const numerics::StepOutcome outcome = optimizer.Step();
  if (!outcome.applied) return std::numeric_limits<double>::quiet_NaN();
  return value;
}

RendererTrainResult TrainRenderer(const std::vector<geometry::RangeImage>& real,
                                  const RendererConfig& net_config,
                                  const RendererTrainConfig& config) {
  if (real.empty()) throw ContractError("train_renderer: need at least one real image");
  if (config.epochs < 0 || config.batch_size < 1) {
    throw ContractError("train_renderer: invalid epochs or batch size");
  }
  const std::vector<RendererPair> pairs = MakeRendererPairs(real, config.completion);
  RendererTrainResult result{RendererNet(net_config, numerics::DeriveSeed(config.seed, {1})),
                             {}, false, ""};
  const std::vector<Variable> params = numerics::Trainable(result.net.Parameters());
  numerics::SgdOptimizer optimizer(params, config.sgd);
  numerics::Rng rng(numerics::DeriveSeed(config.seed, {2}));
  std::vector<size_t> order(pairs.size());
  for (int epoch = 0; epoch < config.epochs && !result.aborted; ++epoch) {
    std::iota(order.begin(), order.end(), size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    int batches = 0;
    for (size_t start = 0; start < order.size(); start += config.batch_size) {
      std::vector<NdArray> snapshot;
      for (const Variable& p : params) snapshot.push_back(p.value());
      std::vector<const RendererPair*> batch;
      for (size_t i = start; i < std::min(order.size(), start + config.batch_size); ++i) {
        batch.push_back(&pairs[order[i]]);
      }
      const double loss = RendererTrainStep(result.net, optimizer, batch);
      if (!std::isfinite(loss)) {
        for (size_t i = 0; i < params.size(); ++i) {
          Variable p = params[i];
          p.SetValue(snapshot[i]);
        }
        result.aborted = true;
        result.diagnostic = "non-finite mask loss in epoch " + std::to_string(epoch) +
                            "; parameters restored to the last finite state";
        break;
      }
      total += loss;
      ++batches;
    }
    if (!result.aborted) result.epoch_loss.push_back(total / std::max(batches, 1));
  }
  return result;
}

geometry::RangeImage RenderAdapted(const geometry::RangeImage& image,
                                   std::span<const double> keep_prob, double threshold) {
  if (static_cast<int64_t>(keep_prob.size()) != image.pixels()) {
    throw ContractError("render_adapted: keep probabilities do not match the image");
  }
  geometry::RangeImage out = image;
  for (int r = 0; r < image.rows(); ++r) {
    for (int c = 0; c < image.cols(); ++c) {
      if (!(keep_prob[static_cast<size_t>(r) * image.cols() + c] >= threshold)) {
        out.ClearPixel(r, c);
      }
    }
  }
  return out;
}

geometry::RangeImage RenderAdaptedSampled(const geometry::RangeImage& image,
                                          std::span<const double> keep_prob,
                                          numerics::Rng& rng) {
  if (static_cast<int64_t>(keep_prob.size()) != image.pixels()) {
    throw ContractError("render_adapted: keep probabilities do not match the image");
  }
  geometry::RangeImage out = image;
  for (int r = 0; r < image.rows(); ++r) {
    for (int c = 0; c < image.cols(); ++c) {
      const double u = numerics::UniformUnit(rng);
      if (!(u < keep_prob[static_cast<size_t>(r) * image.cols() + c])) out.ClearPixel(r, c);
    }
  }
  return out;
}

}  // namespace noiserender
}  // namespace epointda
