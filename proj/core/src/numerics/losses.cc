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

#include "epointda/numerics/losses.h"

#include <cmath>
#include <string>

namespace epointda {
namespace numerics {

Variable SoftmaxFocalLoss(const Variable& logits, const std::vector<uint8_t>& labels,
                          double gamma) {
  const Shape& s = logits.shape();
  if (s.size() != 4) {
    throw ContractError("SoftmaxFocalLoss: logits must be [N, L, H, W], got " +
                        ShapeToString(s));
  }
  if (!(gamma >= 0.0)) throw ContractError("SoftmaxFocalLoss: gamma must be >= 0");
  const int64_t batch = s[0];
  const int64_t classes = s[1];
  const int64_t plane = s[2] * s[3];
  if (static_cast<int64_t>(labels.size()) != batch * plane) {
    throw ContractError("SoftmaxFocalLoss: " + std::to_string(labels.size()) +
                        " labels for " + std::to_string(batch * plane) + " pixels");
  }
  for (const uint8_t label : labels) {
    if (label >= classes) {
      throw ContractError("SoftmaxFocalLoss: label " + std::to_string(label) +
                          " outside [0, " + std::to_string(classes) + ")");
    }
  }
  const auto z = logits.value().data();
  // Per-pixel log-softmax at the true class, and the gradient coefficient
  // dL/dp * p so that dL/dz_k = coeff * (delta_ky - p_k).
  const int64_t pixels = batch * plane;
  std::vector<double> probs(static_cast<size_t>(batch * classes * plane));
  std::vector<double> coeff(static_cast<size_t>(pixels));
  double total = 0.0;
  for (int64_t n = 0; n < batch; ++n) {
    const int64_t base = n * classes * plane;
    for (int64_t p = 0; p < plane; ++p) {
      double max_v = z[base + p];
      for (int64_t c = 1; c < classes; ++c) max_v = std::max(max_v, z[base + c * plane + p]);
      double sum = 0.0;
      for (int64_t c = 0; c < classes; ++c) {
        const double e = std::exp(z[base + c * plane + p] - max_v);
        probs[base + c * plane + p] = e;
        sum += e;
      }
      for (int64_t c = 0; c < classes; ++c) probs[base + c * plane + p] /= sum;
      const int64_t y = labels[n * plane + p];
      const double log_p = z[base + y * plane + p] - max_v - std::log(sum);
      const double prob = probs[base + y * plane + p];
      const double q = 1.0 - prob;
      if (gamma == 0.0) {
        total -= log_p;
        coeff[n * plane + p] = -1.0;
      } else {
        const double weight = std::pow(q, gamma);
        total -= weight * log_p;
        // d/dp [-(1-p)^g log p] * p = g (1-p)^(g-1) p log p - (1-p)^g
        const double slope = q > 0.0 ? gamma * std::pow(q, gamma - 1.0) * prob * log_p : 0.0;
        coeff[n * plane + p] = slope - weight;
      }
    }
  }
  NdArray out = NdArray::Scalar(total / static_cast<double>(pixels));
  return Variable::FromOp(
      std::move(out), {logits},
      [batch, classes, plane, pixels, labels, probs = std::move(probs),
       coeff = std::move(coeff)](GraphNode& self) {
        auto grad = self.inputs[0]->EnsureGrad().mutable_data();
        const double g = self.grad[0] / static_cast<double>(pixels);
        for (int64_t n = 0; n < batch; ++n) {
          const int64_t base = n * classes * plane;
          for (int64_t p = 0; p < plane; ++p) {
            const int64_t y = labels[n * plane + p];
            const double k = g * coeff[n * plane + p];
            for (int64_t c = 0; c < classes; ++c) {
              const int64_t i = base + c * plane + p;
              grad[i] += k * ((c == y ? 1.0 : 0.0) - probs[i]);
            }
          }
        }
      });
}

std::vector<uint8_t> ChannelArgmax(const NdArray& logits) {
  const Shape& s = logits.shape();
  if (s.size() != 4) {
    throw ContractError("ChannelArgmax: logits must be [N, L, H, W], got " +
                        ShapeToString(s));
  }
  const int64_t plane = s[2] * s[3];
  const auto z = logits.data();
  std::vector<uint8_t> out(static_cast<size_t>(s[0] * plane));
  for (int64_t n = 0; n < s[0]; ++n) {
    const int64_t base = n * s[1] * plane;
    for (int64_t p = 0; p < plane; ++p) {
      int64_t best = 0;
      for (int64_t c = 1; c < s[1]; ++c) {
        if (z[base + c * plane + p] > z[base + best * plane + p]) best = c;
      }
      out[n * plane + p] = static_cast<uint8_t>(best);
    }
  }
  return out;
}

}  // namespace numerics
}  // namespace epointda
