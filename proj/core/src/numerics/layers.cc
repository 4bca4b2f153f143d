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

#include "epointda/numerics/layers.h"

#include <cmath>

namespace epointda {
namespace numerics {

std::vector<Variable> Trainable(const ParameterList& list) {
  std::vector<Variable> out;
  for (const NamedVariable& entry : list) {
    if (entry.trainable) out.push_back(entry.variable);
  }
  return out;
}

NdArray GlorotUniform(const Shape& shape, int64_t fan_in, int64_t fan_out,
                      Rng& rng) {
  const double limit =
      std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  NdArray out(shape);
  for (double& v : out.mutable_data()) v = UniformRange(rng, -limit, limit);
  return out;
}

Conv2dLayer::Conv2dLayer(int64_t in_channels, int64_t out_channels, int kernel,
                         Conv2dGeometry geometry, Rng& rng)
    : geometry_(geometry) {
  const int64_t area = static_cast<int64_t>(kernel) * kernel;
  kernel_ = Variable::Parameter(
      GlorotUniform({out_channels, in_channels, kernel, kernel},
                    in_channels * area, out_channels * area, rng));
  bias_ = Variable::Parameter(NdArray({out_channels}, 0.0));
}

Variable Conv2dLayer::Forward(const Variable& x) const {
  return Conv2d(x, kernel_, bias_, geometry_);
}

void Conv2dLayer::Collect(const std::string& prefix, ParameterList* out) const {
  out->push_back({prefix + ".kernel", kernel_, true});
  out->push_back({prefix + ".bias", bias_, true});
}

int64_t Conv2dLayer::ParameterCount() const {
  return kernel_.value().size() + bias_.value().size();
}

Deconv2dLayer::Deconv2dLayer(int64_t in_channels, int64_t out_channels,
                             int kernel, int stride, Rng& rng)
    : stride_(stride) {
  const int64_t area = static_cast<int64_t>(kernel) * kernel;
  kernel_ = Variable::Parameter(
      GlorotUniform({in_channels, out_channels, kernel, kernel},
                    in_channels * area, out_channels * area, rng));
  bias_ = Variable::Parameter(NdArray({out_channels}, 0.0));
}

Variable Deconv2dLayer::Forward(const Variable& x) const {
  return Deconv2d(x, kernel_, bias_, {stride_, 0});
}

void Deconv2dLayer::Collect(const std::string& prefix,
                            ParameterList* out) const {
  out->push_back({prefix + ".kernel", kernel_, true});
  out->push_back({prefix + ".bias", bias_, true});
}

int64_t Deconv2dLayer::ParameterCount() const {
  return kernel_.value().size() + bias_.value().size();
}

NormLayer::NormLayer(int64_t channels, NormMode mode, double eps, int groups)
    : channels_(channels), mode_(mode), eps_(eps), groups_(groups) {
  gamma_ = Variable::Parameter(NdArray({channels}, 1.0));
  beta_ = Variable::Parameter(NdArray({channels}, 0.0));
  running_mean_ = Variable::Constant(NdArray({channels}, 0.0));
  running_var_ = Variable::Constant(NdArray({channels}, 1.0));
}

Variable NormLayer::Forward(const Variable& x, bool training, bool update_running) {
  Variable normalized;
  if (mode_ == NormMode::kBatch && !training) {
    normalized = NormalizeWithStats(x, running_mean_.value().values(),
                                    running_var_.value().values(), eps_);
  } else {
    normalized = Normalize(x, mode_, eps_, groups_);
    if (mode_ == NormMode::kBatch && update_running) {
      std::vector<double> mean, variance;
      BatchChannelStats(x.value(), &mean, &variance);
      NdArray rm = running_mean_.value();
      NdArray rv = running_var_.value();
      for (int64_t c = 0; c < channels_; ++c) {
        rm[c] = 0.9 * rm[c] + 0.1 * mean[c];
        rv[c] = 0.9 * rv[c] + 0.1 * variance[c];
      }
      running_mean_.SetValue(std::move(rm));
      running_var_.SetValue(std::move(rv));
    }
  }
  return ChannelAffine(normalized, gamma_, beta_);
}

void NormLayer::Collect(const std::string& prefix, ParameterList* out) const {
  out->push_back({prefix + ".gamma", gamma_, true});
  out->push_back({prefix + ".beta", beta_, true});
  if (mode_ == NormMode::kBatch) {
    out->push_back({prefix + ".running_mean", running_mean_, false});
    out->push_back({prefix + ".running_var", running_var_, false});
  }
}

}  // namespace numerics
}  // namespace epointda
