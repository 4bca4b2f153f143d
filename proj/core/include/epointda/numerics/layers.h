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

#ifndef EPOINTDA_NUMERICS_LAYERS_H_
#define EPOINTDA_NUMERICS_LAYERS_H_

#include <string>
#include <utility>
#include <vector>

#include "epointda/numerics/ops.h"
#include "epointda/numerics/rng.h"

namespace epointda {
namespace numerics {

// Parameters and persistent buffers of a network, addressable by name for
// optimizers and checkpoints. Variables are shared handles, so copies in
// this list alias the layer's own storage.
struct NamedVariable {
  std::string name;
  Variable variable;
  bool trainable = true;
};
using ParameterList = std::vector<NamedVariable>;

std::vector<Variable> Trainable(const ParameterList& list);

// Uniform in +-sqrt(6 / (fan_in + fan_out)).
NdArray GlorotUniform(const Shape& shape, int64_t fan_in, int64_t fan_out,
                      Rng& rng);

class Conv2dLayer {
 public:
  Conv2dLayer() = default;
  Conv2dLayer(int64_t in_channels, int64_t out_channels, int kernel,
              Conv2dGeometry geometry, Rng& rng);

  Variable Forward(const Variable& x) const;
  void Collect(const std::string& prefix, ParameterList* out) const;

  const Variable& kernel() const { return kernel_; }
  const Variable& bias() const { return bias_; }
  int64_t ParameterCount() const;

 private:
  Variable kernel_;
  Variable bias_;
  Conv2dGeometry geometry_;
};

class Deconv2dLayer {
 public:
  Deconv2dLayer() = default;
  Deconv2dLayer(int64_t in_channels, int64_t out_channels, int kernel,
                int stride, Rng& rng);

  Variable Forward(const Variable& x) const;
  void Collect(const std::string& prefix, ParameterList* out) const;
  int64_t ParameterCount() const;

 private:
  Variable kernel_;
  Variable bias_;
  int stride_ = 1;
};

// Normalization with a learned per-channel affine. kBatch keeps running
// statistics (momentum 0.1) that replace the batch statistics outside
// training. `update_running` lets a training-mode pass leave them alone.
class NormLayer {
 public:
  NormLayer() = default;
  NormLayer(int64_t channels, NormMode mode, double eps, int groups);

  Variable Forward(const Variable& x, bool training, bool update_running = true);
  void Collect(const std::string& prefix, ParameterList* out) const;
  int64_t ParameterCount() const { return 2 * channels_; }
  NormMode mode() const { return mode_; }

 private:
  int64_t channels_ = 0;
  NormMode mode_ = NormMode::kInstance;
  double eps_ = 1e-5;
  int groups_ = 1;
  Variable gamma_;
  Variable beta_;
  Variable running_mean_;
  Variable running_var_;
};

}  // namespace numerics
}  // namespace epointda

#endif  // EPOINTDA_NUMERICS_LAYERS_H_
