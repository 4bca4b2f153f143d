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

#ifndef EPOINTDA_ALIGN_ASAC_H_
#define EPOINTDA_ALIGN_ASAC_H_

#include <string>

#include "epointda/numerics/layers.h"

namespace epointda {
namespace align {

// Aligned spatially-adaptive convolution:
//   A = sigmoid(conv1x1(features)),  out = conv(A . features)
// The attention map A is [N, 1, H, W] and is shared by all channels.
numerics::Variable AsacForward(const numerics::Variable& features,
                               const numerics::Variable& attn_kernel,
                               const numerics::Variable& attn_bias,
                               const numerics::Variable& kernel,
                               const numerics::Variable& bias,
                               numerics::Conv2dGeometry geometry);

numerics::Variable AsacAttention(const numerics::Variable& features,
                                 const numerics::Variable& attn_kernel,
                                 const numerics::Variable& attn_bias);

class AsacLayer {
 public:
  AsacLayer() = default;
  AsacLayer(int64_t in_channels, int64_t out_channels, int kernel,
            numerics::Conv2dGeometry geometry, numerics::Rng& rng);

  numerics::Variable Forward(const numerics::Variable& x) const;
  numerics::Variable Attention(const numerics::Variable& x) const;
  void Collect(const std::string& prefix, numerics::ParameterList* out) const;
  int64_t ParameterCount() const;

  const numerics::Conv2dLayer& conv() const { return conv_; }
  const numerics::Variable& attn_kernel() const { return attn_kernel_; }
  const numerics::Variable& attn_bias() const { return attn_bias_; }

 private:
  numerics::Conv2dLayer conv_;
  numerics::Variable attn_kernel_;  // [1, C, 1, 1]
  numerics::Variable attn_bias_;    // [1]
  numerics::Conv2dGeometry geometry_;
};

}  // namespace align
}  // namespace epointda

#endif  // EPOINTDA_ALIGN_ASAC_H_
