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

#include "epointda/numerics/ops.h"

#include <algorithm>
#include <cmath>

namespace epointda {
namespace numerics {
namespace {

void CheckSameShape(const Variable& a, const Variable& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw ContractError(std::string(op) + ": shapes differ " +
                        ShapeToString(a.shape()) + " vs " +
                        ShapeToString(b.shape()));
  }
}

// Elementwise unary op whose derivative is a function of (x, y).
template <typename Forward, typename Derivative>
Variable Unary(const Variable& x, Forward forward, Derivative derivative) {
  NdArray out(x.shape());
  const auto in = x.value().data();
  auto dst = out.mutable_data();
  for (size_t i = 0; i < in.size(); ++i) dst[i] = forward(in[i]);
  return Variable::FromOp(std::move(out), {x}, [derivative](GraphNode& self) {
    GraphNode& input = *self.inputs[0];
    auto grad = input.EnsureGrad().mutable_data();
    const auto xs = input.value.data();
    const auto ys = self.value.data();
    const auto g = self.grad.data();
    for (size_t i = 0; i < g.size(); ++i) {
      grad[i] += g[i] * derivative(xs[i], ys[i]);
    }
  });
}

}  // namespace

Variable Relu(const Variable& x) {
  return Unary(
      x, [](double v) { return v > 0.0 ? v : 0.0; },
      [](double v, double) { return v > 0.0 ? 1.0 : 0.0; });
}

Variable Sigmoid(const Variable& x) {
  return Unary(
      x,
      [](double v) {
        if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
        const double e = std::exp(v);
        return e / (1.0 + e);
      },
      [](double, double s) { return s * (1.0 - s); });
}

Variable Log(const Variable& x) {
  for (const double v : x.value().data()) {
    if (!(v > 0.0)) throw ContractError("Log: argument must be positive");
  }
  return Unary(
      x, [](double v) { return std::log(v); },
      [](double v, double) { return 1.0 / v; });
}

Variable Abs(const Variable& x) {
  return Unary(
      x, [](double v) { return std::abs(v); },
      [](double v, double) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); });
}

Variable Scale(const Variable& x, double factor) {
  return Unary(
      x, [factor](double v) { return v * factor; },
      [factor](double, double) { return factor; });
}

Variable AddScalar(const Variable& x, double offset) {
  return Unary(
      x, [offset](double v) { return v + offset; },
      [](double, double) { return 1.0; });
}

Variable ChannelSoftmax(const Variable& x) {
  const Shape& s = x.shape();
  if (s.size() < 2) {
    throw ContractError("ChannelSoftmax: need rank >= 2, got " +
                        ShapeToString(s));
  }
  const int64_t batch = s[0];
  const int64_t channels = s[1];
  const int64_t plane = x.value().size() / (batch * channels);
  NdArray out(s);
  const auto in = x.value().data();
  auto dst = out.mutable_data();
  for (int64_t n = 0; n < batch; ++n) {
    const int64_t base = n * channels * plane;
    for (int64_t p = 0; p < plane; ++p) {
      double max_v = in[base + p];
      for (int64_t c = 1; c < channels; ++c) {
        max_v = std::max(max_v, in[base + c * plane + p]);
      }
      double total = 0.0;
      for (int64_t c = 0; c < channels; ++c) {
        const double e = std::exp(in[base + c * plane + p] - max_v);
        dst[base + c * plane + p] = e;
        total += e;
      }
      for (int64_t c = 0; c < channels; ++c) dst[base + c * plane + p] /= total;
    }
  }
  return Variable::FromOp(
      std::move(out), {x}, [batch, channels, plane](GraphNode& self) {
        auto grad = self.inputs[0]->EnsureGrad().mutable_data();
        const auto y = self.value.data();
        const auto g = self.grad.data();
        for (int64_t n = 0; n < batch; ++n) {
          const int64_t base = n * channels * plane;
          for (int64_t p = 0; p < plane; ++p) {
            double dot = 0.0;
            for (int64_t c = 0; c < channels; ++c) {
              dot += g[base + c * plane + p] * y[base + c * plane + p];
            }
            for (int64_t c = 0; c < channels; ++c) {
              const int64_t i = base + c * plane + p;
              grad[i] += y[i] * (g[i] - dot);
            }
          }
        }
      });
}

Variable Add(const Variable& a, const Variable& b) {
  CheckSameShape(a, b, "Add");
  NdArray out(a.shape());
  for (int64_t i = 0; i < out.size(); ++i) out[i] = a.value()[i] + b.value()[i];
  return Variable::FromOp(std::move(out), {a, b}, [](GraphNode& self) {
    for (auto& input : self.inputs) {
      if (!input->requires_grad) continue;
      auto grad = input->EnsureGrad().mutable_data();
      const auto g = self.grad.data();
      for (size_t i = 0; i < g.size(); ++i) grad[i] += g[i];
    }
  });
}

Variable AddBatchBroadcast(const Variable& x, const Variable& b) {
  const Shape& xs = x.shape();
  const Shape& bs = b.shape();
  if (xs.empty() || bs.size() != xs.size() || bs[0] != 1 ||
      !std::equal(xs.begin() + 1, xs.end(), bs.begin() + 1)) {
    throw ContractError("AddBatchBroadcast: cannot broadcast " + ShapeToString(bs) +
                        " over " + ShapeToString(xs));
  }
  const int64_t item = b.value().size();
  NdArray out(xs);
  for (int64_t i = 0; i < out.size(); ++i) out[i] = x.value()[i] + b.value()[i % item];
  return Variable::FromOp(std::move(out), {x, b}, [item](GraphNode& self) {
    const auto g = self.grad.data();
    GraphNode& lhs = *self.inputs[0];
    GraphNode& rhs = *self.inputs[1];
    if (lhs.requires_grad) {
      auto grad = lhs.EnsureGrad().mutable_data();
      for (size_t i = 0; i < g.size(); ++i) grad[i] += g[i];
    }
    if (rhs.requires_grad) {
      auto grad = rhs.EnsureGrad().mutable_data();
      for (size_t i = 0; i < g.size(); ++i) grad[i % item] += g[i];
    }
  });
}

Variable Sub(const Variable& a, const Variable& b) {
  return Add(a, Scale(b, -1.0));
}

Variable Mul(const Variable& a, const Variable& b) {
  CheckSameShape(a, b, "Mul");
  NdArray out(a.shape());
  for (int64_t i = 0; i < out.size(); ++i) out[i] = a.value()[i] * b.value()[i];
  return Variable::FromOp(std::move(out), {a, b}, [](GraphNode& self) {
    GraphNode& lhs = *self.inputs[0];
    GraphNode& rhs = *self.inputs[1];
    const auto g = self.grad.data();
    if (lhs.requires_grad) {
      auto grad = lhs.EnsureGrad().mutable_data();
      for (size_t i = 0; i < g.size(); ++i) grad[i] += g[i] * rhs.value[i];
    }
    if (rhs.requires_grad) {
      auto grad = rhs.EnsureGrad().mutable_data();
      for (size_t i = 0; i < g.size(); ++i) grad[i] += g[i] * lhs.value[i];
    }
  });
}

Variable MulChannelBroadcast(const Variable& features,
                             const Variable& weights) {
  const Shape& fs = features.shape();
  const Shape& ws = weights.shape();
  if (fs.size() != 4 || ws.size() != 4 || ws[0] != fs[0] || ws[1] != 1 ||
      ws[2] != fs[2] || ws[3] != fs[3]) {
    throw ContractError("MulChannelBroadcast: weights " + ShapeToString(ws) +
                        " do not broadcast over features " +
                        ShapeToString(fs));
  }
  const int64_t batch = fs[0], channels = fs[1], plane = fs[2] * fs[3];
  NdArray out(fs);
  for (int64_t n = 0; n < batch; ++n) {
    for (int64_t c = 0; c < channels; ++c) {
      const int64_t base = (n * channels + c) * plane;
      for (int64_t p = 0; p < plane; ++p) {
        out[base + p] = features.value()[base + p] * weights.value()[n * plane + p];
      }
    }
  }
  return Variable::FromOp(
      std::move(out), {features, weights},
      [batch, channels, plane](GraphNode& self) {
        GraphNode& f = *self.inputs[0];
        GraphNode& w = *self.inputs[1];
        const auto g = self.grad.data();
        if (f.requires_grad) {
          auto grad = f.EnsureGrad().mutable_data();
          for (int64_t n = 0; n < batch; ++n) {
            for (int64_t c = 0; c < channels; ++c) {
              const int64_t base = (n * channels + c) * plane;
              for (int64_t p = 0; p < plane; ++p) {
                grad[base + p] += g[base + p] * w.value[n * plane + p];
              }
            }
          }
        }
        if (w.requires_grad) {
          auto grad = w.EnsureGrad().mutable_data();
          for (int64_t n = 0; n < batch; ++n) {
            for (int64_t c = 0; c < channels; ++c) {
              const int64_t base = (n * channels + c) * plane;
              for (int64_t p = 0; p < plane; ++p) {
                grad[n * plane + p] += g[base + p] * f.value[base + p];
              }
            }
          }
        }
      });
}

Variable ApplyMask(const Variable& x, const NdArray& mask) {
  return MulChannelBroadcast(x, Variable::Constant(mask));
}

Variable Sum(const Variable& x) {
  return Variable::FromOp(NdArray::Scalar(x.value().Sum()), {x},
                          [](GraphNode& self) {
                            const double g = self.grad[0];
                            auto grad = self.inputs[0]->EnsureGrad().mutable_data();
                            for (double& v : grad) v += g;
                          });
}

Variable Mean(const Variable& x) {
  const double n = static_cast<double>(x.value().size());
  if (n == 0) throw ContractError("Mean of an empty array");
  return Scale(Sum(x), 1.0 / n);
}

Variable GlobalMeanPool(const Variable& x) {
  const Shape& s = x.shape();
  if (s.size() != 4) {
    throw ContractError("GlobalMeanPool: need [N,C,H,W], got " +
                        ShapeToString(s));
  }
  const int64_t rows = s[0] * s[1], plane = s[2] * s[3];
  NdArray out({s[0], s[1]});
  for (int64_t r = 0; r < rows; ++r) {
    double sum = 0.0;
    for (int64_t p = 0; p < plane; ++p) sum += x.value()[r * plane + p];
    out[r] = sum / static_cast<double>(plane);
  }
  return Variable::FromOp(std::move(out), {x}, [rows, plane](GraphNode& self) {
    auto grad = self.inputs[0]->EnsureGrad().mutable_data();
    for (int64_t r = 0; r < rows; ++r) {
      const double g = self.grad[r] / static_cast<double>(plane);
      for (int64_t p = 0; p < plane; ++p) grad[r * plane + p] += g;
    }
  });
}

Variable Reshape(const Variable& x, Shape shape) {
  NdArray out = x.value().Reshaped(std::move(shape));
  return Variable::FromOp(std::move(out), {x}, [](GraphNode& self) {
    auto grad = self.inputs[0]->EnsureGrad().mutable_data();
    const auto g = self.grad.data();
    for (size_t i = 0; i < g.size(); ++i) grad[i] += g[i];
  });
}

Variable SliceChannels(const Variable& x, int64_t begin, int64_t end) {
  const Shape& s = x.shape();
  if (s.size() < 2 || begin < 0 || end > s[1] || begin >= end) {
    throw ContractError("SliceChannels: bad range for " + ShapeToString(s));
  }
  const int64_t batch = s[0], channels = s[1];
  const int64_t plane = x.value().size() / (batch * channels);
  Shape out_shape = s;
  out_shape[1] = end - begin;
  NdArray out(out_shape);
  const int64_t width = end - begin;
  for (int64_t n = 0; n < batch; ++n) {
    std::copy_n(x.value().data().data() + (n * channels + begin) * plane,
                width * plane,
                out.mutable_data().data() + n * width * plane);
  }
  return Variable::FromOp(
      std::move(out), {x},
      [batch, channels, plane, begin, width](GraphNode& self) {
        auto grad = self.inputs[0]->EnsureGrad().mutable_data();
        for (int64_t n = 0; n < batch; ++n) {
          for (int64_t i = 0; i < width * plane; ++i) {
            grad[(n * channels + begin) * plane + i] +=
                self.grad[n * width * plane + i];
          }
        }
      });
}

}  // namespace numerics
}  // namespace epointda
