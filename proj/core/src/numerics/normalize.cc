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

#include <cmath>

#include "epointda/numerics/ops.h"

namespace epointda {
namespace numerics {
namespace {

// Maps each (sample, channel) plane of [N,C,H,W] to its statistics group.
struct Grouping {
  int64_t batch, channels, plane;
  int64_t group_count;
  std::vector<int64_t> group_of;  // Indexed by n*C + c.
};

Grouping MakeGrouping(const Shape& s, NormMode mode, int groups) {
  Grouping g{s[0], s[1], s[2] * s[3], 0, {}};
  g.group_of.resize(g.batch * g.channels);
  switch (mode) {
    case NormMode::kInstance:
      g.group_count = g.batch * g.channels;
      break;
    case NormMode::kBatch:
      g.group_count = g.channels;
      break;
    case NormMode::kLayer:
      g.group_count = g.batch;
      break;
    case NormMode::kGroup:
      if (groups < 1 || g.channels % groups != 0) {
        throw ContractError("Normalize: " + std::to_string(g.channels) +
                            " channels (dim 1) not divisible into " +
                            std::to_string(groups) + " groups");
      }
      g.group_count = g.batch * groups;
      break;
  }
  for (int64_t n = 0; n < g.batch; ++n) {
    for (int64_t c = 0; c < g.channels; ++c) {
      int64_t id = 0;
      switch (mode) {
        case NormMode::kInstance: id = n * g.channels + c; break;
        case NormMode::kBatch: id = c; break;
        case NormMode::kLayer: id = n; break;
        case NormMode::kGroup: id = n * groups + c / (g.channels / groups); break;
      }
      g.group_of[n * g.channels + c] = id;
    }
  }
  return g;
}

void GroupStats(const NdArray& x, const Grouping& g, std::vector<double>* mean,
                std::vector<double>* variance) {
  std::vector<double> count(g.group_count, 0.0);
  mean->assign(g.group_count, 0.0);
  variance->assign(g.group_count, 0.0);
  const auto data = x.data();
  for (int64_t plane_index = 0; plane_index < g.batch * g.channels;
       ++plane_index) {
    const int64_t id = g.group_of[plane_index];
    const double* p = data.data() + plane_index * g.plane;
    double sum = 0.0;
    for (int64_t i = 0; i < g.plane; ++i) sum += p[i];
    (*mean)[id] += sum;
    count[id] += static_cast<double>(g.plane);
  }
  for (int64_t id = 0; id < g.group_count; ++id) (*mean)[id] /= count[id];
  for (int64_t plane_index = 0; plane_index < g.batch * g.channels;
       ++plane_index) {
    const int64_t id = g.group_of[plane_index];
    const double mu = (*mean)[id];
    const double* p = data.data() + plane_index * g.plane;
    double sum = 0.0;
    for (int64_t i = 0; i < g.plane; ++i) sum += (p[i] - mu) * (p[i] - mu);
    (*variance)[id] += sum;
  }
  for (int64_t id = 0; id < g.group_count; ++id) (*variance)[id] /= count[id];
}

void CheckNchw(const Variable& x, const char* op) {
  if (x.shape().size() != 4) {
    throw ContractError(std::string(op) + ": need [N,C,H,W], got " +
                        ShapeToString(x.shape()));
  }
}

}  // namespace

const char* NormModeName(NormMode mode) {
  switch (mode) {
    case NormMode::kBatch: return "BN";
    case NormMode::kInstance: return "IN";
    case NormMode::kLayer: return "LN";
    case NormMode::kGroup: return "GN";
  }
  return "?";
}

NormMode ParseNormMode(const std::string& name) {
  if (name == "BN") return NormMode::kBatch;
  if (name == "IN") return NormMode::kInstance;
  if (name == "LN") return NormMode::kLayer;
  if (name == "GN") return NormMode::kGroup;
  throw ContractError("unknown normalization '" + name + "'");
}

Variable Normalize(const Variable& input, NormMode mode, double eps,
                   int groups) {
  CheckNchw(input, "Normalize");
  if (!(eps > 0.0)) throw ContractError("Normalize: eps must be positive");
  const Grouping g = MakeGrouping(input.shape(), mode, groups);
  std::vector<double> mean, variance;
  GroupStats(input.value(), g, &mean, &variance);
  std::vector<double> inv_sigma(g.group_count);
  for (int64_t id = 0; id < g.group_count; ++id) {
    inv_sigma[id] = 1.0 / std::sqrt(variance[id] + eps);
  }
  NdArray out(input.shape());
  const auto x = input.value().data();
  for (int64_t plane_index = 0; plane_index < g.batch * g.channels;
       ++plane_index) {
    const int64_t id = g.group_of[plane_index];
    const int64_t base = plane_index * g.plane;
    for (int64_t i = 0; i < g.plane; ++i) {
      out[base + i] = (x[base + i] - mean[id]) * inv_sigma[id];
    }
  }
  return Variable::FromOp(
      std::move(out), {input}, [g, inv_sigma](GraphNode& self) {
        // dx = inv_sigma * (dy - mean(dy) - xhat * mean(dy * xhat))
        std::vector<double> mean_g(g.group_count, 0.0);
        std::vector<double> mean_gx(g.group_count, 0.0);
        std::vector<double> count(g.group_count, 0.0);
        const auto dy = self.grad.data();
        const auto xhat = self.value.data();
        for (int64_t plane_index = 0; plane_index < g.batch * g.channels;
             ++plane_index) {
          const int64_t id = g.group_of[plane_index];
          const int64_t base = plane_index * g.plane;
          double sg = 0.0, sgx = 0.0;
          for (int64_t i = 0; i < g.plane; ++i) {
            sg += dy[base + i];
            sgx += dy[base + i] * xhat[base + i];
          }
          mean_g[id] += sg;
          mean_gx[id] += sgx;
          count[id] += static_cast<double>(g.plane);
        }
        for (int64_t id = 0; id < g.group_count; ++id) {
          mean_g[id] /= count[id];
          mean_gx[id] /= count[id];
        }
        auto dx = self.inputs[0]->EnsureGrad().mutable_data();
        for (int64_t plane_index = 0; plane_index < g.batch * g.channels;
             ++plane_index) {
          const int64_t id = g.group_of[plane_index];
          const int64_t base = plane_index * g.plane;
          for (int64_t i = 0; i < g.plane; ++i) {
            dx[base + i] += inv_sigma[id] * (dy[base + i] - mean_g[id] -
                                             xhat[base + i] * mean_gx[id]);
          }
        }
      });
}

void BatchChannelStats(const NdArray& input, std::vector<double>* mean,
                       std::vector<double>* variance) {
  if (input.rank() != 4) {
    throw ContractError("BatchChannelStats: need [N,C,H,W], got " +
                        ShapeToString(input.shape()));
  }
  GroupStats(input, MakeGrouping(input.shape(), NormMode::kBatch, 1), mean,
             variance);
}

Variable NormalizeWithStats(const Variable& input,
                            const std::vector<double>& mean,
                            const std::vector<double>& variance, double eps) {
  CheckNchw(input, "NormalizeWithStats");
  const Shape& s = input.shape();
  const int64_t channels = s[1], plane = s[2] * s[3];
  if (static_cast<int64_t>(mean.size()) != channels ||
      static_cast<int64_t>(variance.size()) != channels) {
    throw ContractError("NormalizeWithStats: statistics do not match " +
                        std::to_string(channels) + " channels (dim 1)");
  }
  std::vector<double> inv_sigma(channels);
  for (int64_t c = 0; c < channels; ++c) {
    inv_sigma[c] = 1.0 / std::sqrt(variance[c] + eps);
  }
  NdArray out(s);
  for (int64_t n = 0; n < s[0]; ++n) {
    for (int64_t c = 0; c < channels; ++c) {
      const int64_t base = (n * channels + c) * plane;
      for (int64_t i = 0; i < plane; ++i) {
        out[base + i] = (input.value()[base + i] - mean[c]) * inv_sigma[c];
      }
    }
  }
  const int64_t batch = s[0];
  return Variable::FromOp(
      std::move(out), {input},
      [inv_sigma, batch, channels, plane](GraphNode& self) {
        auto dx = self.inputs[0]->EnsureGrad().mutable_data();
        for (int64_t n = 0; n < batch; ++n) {
          for (int64_t c = 0; c < channels; ++c) {
            const int64_t base = (n * channels + c) * plane;
            for (int64_t i = 0; i < plane; ++i) {
              dx[base + i] += inv_sigma[c] * self.grad[base + i];
            }
          }
        }
      });
}

Variable ChannelAffine(const Variable& input, const Variable& gamma,
                       const Variable& beta) {
  const Shape& s = input.shape();
  if (s.size() < 2 || gamma.shape() != Shape{s[1]} ||
      beta.shape() != Shape{s[1]}) {
    throw ContractError("ChannelAffine: parameters must be [C] for input " +
                        ShapeToString(s));
  }
  const int64_t batch = s[0], channels = s[1];
  const int64_t plane = input.value().size() / (batch * channels);
  NdArray out(s);
  for (int64_t n = 0; n < batch; ++n) {
    for (int64_t c = 0; c < channels; ++c) {
      const int64_t base = (n * channels + c) * plane;
      const double a = gamma.value()[c], b = beta.value()[c];
      for (int64_t i = 0; i < plane; ++i) {
        out[base + i] = input.value()[base + i] * a + b;
      }
    }
  }
  return Variable::FromOp(
      std::move(out), {input, gamma, beta},
      [batch, channels, plane](GraphNode& self) {
        GraphNode& x = *self.inputs[0];
        GraphNode& ga = *self.inputs[1];
        GraphNode& be = *self.inputs[2];
        for (int64_t n = 0; n < batch; ++n) {
          for (int64_t c = 0; c < channels; ++c) {
            const int64_t base = (n * channels + c) * plane;
            double sg = 0.0, sgx = 0.0;
            for (int64_t i = 0; i < plane; ++i) {
              sg += self.grad[base + i];
              sgx += self.grad[base + i] * x.value[base + i];
            }
            if (x.requires_grad) {
              auto dx = x.EnsureGrad().mutable_data();
              const double a = ga.value[c];
              for (int64_t i = 0; i < plane; ++i) {
                dx[base + i] += self.grad[base + i] * a;
              }
            }
            if (ga.requires_grad) ga.EnsureGrad()[c] += sgx;
            if (be.requires_grad) be.EnsureGrad()[c] += sg;
          }
        }
      });
}

}  // namespace numerics
}  // namespace epointda
