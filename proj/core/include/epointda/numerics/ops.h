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

#ifndef EPOINTDA_NUMERICS_OPS_H_
#define EPOINTDA_NUMERICS_OPS_H_

#include <cstdint>
#include <vector>

#include "epointda/numerics/variable.h"

namespace epointda {
namespace numerics {

struct Conv2dGeometry {
  int stride = 1;
  int padding = 0;
};

// Cross-correlation. input [N,C,H,W], kernel [K,C,kh,kw] with odd kh and kw,
// bias [K] or undefined. Output [N,K,H',W'] with
// H' = (H + 2*padding - kh) / stride + 1.
Variable Conv2d(const Variable& input, const Variable& kernel,
                const Variable& bias, Conv2dGeometry geometry);

// Transposed convolution: the adjoint of Conv2d with the same kernel
// [K,C,kh,kw] and geometry, mapping [N,K,H',W'] to [N,C,H,W] where
// H = (H'-1)*stride - 2*padding + kh + output_padding. bias is [C] or
// undefined.
Variable Deconv2d(const Variable& input, const Variable& kernel,
                  const Variable& bias, Conv2dGeometry geometry,
                  int output_padding = 0);

enum class NormMode { kBatch, kInstance, kLayer, kGroup };

const char* NormModeName(NormMode mode);
NormMode ParseNormMode(const std::string& name);

// Standardizes [N,C,H,W] over the statistic groups of `mode`:
//   kInstance  per (sample, channel) over H,W
//   kBatch     per channel over N,H,W
//   kLayer     per sample over C,H,W
//   kGroup     per (sample, channel group) over C/groups,H,W
// sigma = sqrt(biased variance + eps).
Variable Normalize(const Variable& input, NormMode mode, double eps,
                   int groups = 1);

// Per-channel statistics of the kBatch grouping, as used by Normalize.
void BatchChannelStats(const NdArray& input, std::vector<double>* mean,
                       std::vector<double>* variance);

// (x - mean[c]) / sqrt(variance[c] + eps) with constant statistics.
Variable NormalizeWithStats(const Variable& input,
                            const std::vector<double>& mean,
                            const std::vector<double>& variance, double eps);

// y = x * gamma[c] + beta[c] over [N,C,...].
Variable ChannelAffine(const Variable& input, const Variable& gamma,
                       const Variable& beta);

Variable Relu(const Variable& x);
Variable Sigmoid(const Variable& x);
Variable Log(const Variable& x);
Variable Abs(const Variable& x);
// Softmax over axis 1 of [N,C,...].
Variable ChannelSoftmax(const Variable& x);

Variable Add(const Variable& a, const Variable& b);
Variable Sub(const Variable& a, const Variable& b);
// x [N,...] plus b [1,...] repeated over the batch.
Variable AddBatchBroadcast(const Variable& x, const Variable& b);
Variable Mul(const Variable& a, const Variable& b);
Variable Scale(const Variable& x, double factor);
Variable AddScalar(const Variable& x, double offset);

// features [N,C,H,W] times weights [N,1,H,W] broadcast over channels.
Variable MulChannelBroadcast(const Variable& features, const Variable& weights);
// x [N,C,H,W] times a constant mask [N,1,H,W]; no gradient to the mask.
Variable ApplyMask(const Variable& x, const NdArray& mask);

Variable Sum(const Variable& x);
Variable Mean(const Variable& x);
// [N,C,H,W] -> [N,C].
Variable GlobalMeanPool(const Variable& x);
Variable Reshape(const Variable& x, Shape shape);

// Channels [begin, end) of [N,C,...].
Variable SliceChannels(const Variable& x, int64_t begin, int64_t end);

}  // namespace numerics
}  // namespace epointda

#endif  // EPOINTDA_NUMERICS_OPS_H_
