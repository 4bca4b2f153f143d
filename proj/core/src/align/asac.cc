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

#include "epointda/align/asac.h"

#include "epointda/numerics/ops.h"

namespace epointda {
namespace align {

using numerics::NdArray;
using numerics::Variable;

Variable AsacAttention(const Variable& features, const Variable& attn_kernel,
                       const Variable& attn_bias) {
  return numerics::Sigmoid(numerics::Conv2d(features, attn_kernel, attn_bias, {1, 0}));
}

Variable AsacForward(const Variable& features, const Variable& attn_kernel,
                     const Variable& attn_bias, const Variable& kernel,
                     const Variable& bias, numerics::Conv2dGeometry geometry) {
  const Variable attention = AsacAttention(features, attn_kernel, attn_bias);
  return numerics::Conv2d(numerics::MulChannelBroadcast(features, attention), kernel,
                          bias, geometry);
}

AsacLayer::AsacLayer(int64_t in_channels, int64_t out_channels, int kernel,
                     numerics::Conv2dGeometry geometry, numerics::Rng& rng)
    : conv_(in_channels, out_channels, kernel, geometry, rng), geometry_(geometry) {
  attn_kernel_ = Variable::Parameter(
      numerics::GlorotUniform({1, in_channels, 1, 1}, in_channels, 1, rng));
  // Start with attention near 0.73 everywhere so early training is close to
  // a plain convolution.
  attn_bias_ = Variable::Parameter(NdArray({1}, 1.0));
}

Variable AsacLayer::Forward(const Variable& x) const {
  return AsacForward(x, attn_kernel_, attn_bias_, conv_.kernel(), conv_.bias(), geometry_);
}

Variable AsacLayer::Attention(const Variable& x) const {
  return AsacAttention(x, attn_kernel_, attn_bias_);
}

void AsacLayer::Collect(const std::string& prefix, numerics::ParameterList* out) const {
  conv_.Collect(prefix + ".conv", out);
  out->push_back({prefix + ".attn.kernel", attn_kernel_, true});
  out->push_back({prefix + ".attn.bias", attn_bias_, true});
}

int64_t AsacLayer::ParameterCount() const {
  return conv_.ParameterCount() + attn_kernel_.value().size() + 1;
}

}  // namespace align
}  // namespace epointda
