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

#include <Eigen/Core>

#include "epointda/numerics/ops.h"

namespace epointda {
namespace numerics {
namespace {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMap = Eigen::Map<RowMatrix>;
using ConstRowMap = Eigen::Map<const RowMatrix>;

struct Window {
  int64_t channels, height, width;          // Image side.
  int64_t kernel_h, kernel_w;
  int64_t out_h, out_w;                     // Column side.
  int stride, padding;

  int64_t patch() const { return channels * kernel_h * kernel_w; }
  int64_t positions() const { return out_h * out_w; }
};

// cols[(c*kh + i)*kw + j, oy*out_w + ox] = image[c, oy*s - p + i, ox*s - p + j]
void Im2Col(const double* image, const Window& w, double* cols) {
  for (int64_t c = 0; c < w.channels; ++c) {
    for (int64_t i = 0; i < w.kernel_h; ++i) {
      for (int64_t j = 0; j < w.kernel_w; ++j) {
        double* row = cols + ((c * w.kernel_h + i) * w.kernel_w + j) *
                                 w.positions();
        for (int64_t oy = 0; oy < w.out_h; ++oy) {
          const int64_t iy = oy * w.stride - w.padding + i;
          double* out = row + oy * w.out_w;
          if (iy < 0 || iy >= w.height) {
            std::fill(out, out + w.out_w, 0.0);
            continue;
          }
          const double* in = image + (c * w.height + iy) * w.width;
          for (int64_t ox = 0; ox < w.out_w; ++ox) {
            const int64_t ix = ox * w.stride - w.padding + j;
            out[ox] = (ix >= 0 && ix < w.width) ? in[ix] : 0.0;
          }
        }
      }
    }
  }
}

// Adjoint of Im2Col; accumulates into image.
void Col2Im(const double* cols, const Window& w, double* image) {
  for (int64_t c = 0; c < w.channels; ++c) {
    for (int64_t i = 0; i < w.kernel_h; ++i) {
      for (int64_t j = 0; j < w.kernel_w; ++j) {
        const double* row = cols + ((c * w.kernel_h + i) * w.kernel_w + j) *
                                       w.positions();
        for (int64_t oy = 0; oy < w.out_h; ++oy) {
          const int64_t iy = oy * w.stride - w.padding + i;
          if (iy < 0 || iy >= w.height) continue;
          const double* src = row + oy * w.out_w;
          double* out = image + (c * w.height + iy) * w.width;
          for (int64_t ox = 0; ox < w.out_w; ++ox) {
            const int64_t ix = ox * w.stride - w.padding + j;
            if (ix >= 0 && ix < w.width) out[ix] += src[ox];
          }
        }
      }
    }
  }
}

void CheckRank(const Variable& v, int rank, const char* op, const char* what) {
  if (static_cast<int>(v.shape().size()) != rank) {
    throw ContractError(std::string(op) + ": " + what + " must have rank " +
                        std::to_string(rank) + ", got " +
                        ShapeToString(v.shape()));
  }
}

void CheckBias(const Variable& bias, int64_t channels, const char* op) {
  if (!bias.defined()) return;
  if (bias.shape() != Shape{channels}) {
    throw ContractError(std::string(op) + ": bias shape " +
                        ShapeToString(bias.shape()) + " does not match " +
                        std::to_string(channels) + " output channels");
  }
}

}  // namespace

Variable Conv2d(const Variable& input, const Variable& kernel,
                const Variable& bias, Conv2dGeometry geometry) {
  CheckRank(input, 4, "Conv2d", "input");
  CheckRank(kernel, 4, "Conv2d", "kernel");
  const Shape& xs = input.shape();
  const Shape& ks = kernel.shape();
  if (xs[1] != ks[1]) {
    throw ContractError("Conv2d: input channel dimension (dim 1) is " +
                        std::to_string(xs[1]) + " but kernel expects " +
                        std::to_string(ks[1]));
  }
  if (ks[2] % 2 == 0 || ks[3] % 2 == 0) {
    throw ContractError("Conv2d: kernel spatial extents must be odd, got " +
                        ShapeToString(ks));
  }
  if (geometry.stride < 1 || geometry.padding < 0) {
    throw ContractError("Conv2d: stride must be >= 1 and padding >= 0");
  }
  CheckBias(bias, ks[0], "Conv2d");
  const int64_t out_h = (xs[2] + 2 * geometry.padding - ks[2]) / geometry.stride + 1;
  const int64_t out_w = (xs[3] + 2 * geometry.padding - ks[3]) / geometry.stride + 1;
  if (xs[2] + 2 * geometry.padding < ks[2] || out_h < 1) {
    throw ContractError("Conv2d: height (dim 2) " + std::to_string(xs[2]) +
                        " too small for kernel " + ShapeToString(ks));
  }
  if (xs[3] + 2 * geometry.padding < ks[3] || out_w < 1) {
    throw ContractError("Conv2d: width (dim 3) " + std::to_string(xs[3]) +
                        " too small for kernel " + ShapeToString(ks));
  }

  const Window w{xs[1],  xs[2], xs[3], ks[2], ks[3], out_h, out_w,
                 geometry.stride, geometry.padding};
  const int64_t batch = xs[0];
  const int64_t out_channels = ks[0];
  NdArray out({batch, out_channels, out_h, out_w});
  std::vector<double> cols(w.patch() * w.positions());
  const ConstRowMap weights(kernel.value().data().data(), out_channels,
                            w.patch());
  const int64_t in_stride = w.channels * w.height * w.width;
  const int64_t out_stride = out_channels * w.positions();
  for (int64_t n = 0; n < batch; ++n) {
    Im2Col(input.value().data().data() + n * in_stride, w, cols.data());
    RowMap result(out.mutable_data().data() + n * out_stride, out_channels,
                  w.positions());
    result.noalias() =
        weights * ConstRowMap(cols.data(), w.patch(), w.positions());
    if (bias.defined()) {
      for (int64_t k = 0; k < out_channels; ++k) {
        result.row(k).array() += bias.value()[k];
      }
    }
  }

  std::vector<Variable> inputs = {input, kernel};
  if (bias.defined()) inputs.push_back(bias);
  const bool has_bias = bias.defined();
  return Variable::FromOp(
      std::move(out), std::move(inputs),
      [w, batch, out_channels, in_stride, out_stride,
       has_bias](GraphNode& self) {
        GraphNode& x = *self.inputs[0];
        GraphNode& k = *self.inputs[1];
        const ConstRowMap weights(k.value.data().data(), out_channels,
                                  w.patch());
        std::vector<double> cols(w.patch() * w.positions());
        for (int64_t n = 0; n < batch; ++n) {
          const ConstRowMap grad_out(self.grad.data().data() + n * out_stride,
                                     out_channels, w.positions());
          if (k.requires_grad) {
            Im2Col(x.value.data().data() + n * in_stride, w, cols.data());
            RowMap grad_k(k.EnsureGrad().mutable_data().data(), out_channels,
                          w.patch());
            grad_k.noalias() +=
                grad_out *
                ConstRowMap(cols.data(), w.patch(), w.positions()).transpose();
          }
          if (x.requires_grad) {
            RowMap grad_cols(cols.data(), w.patch(), w.positions());
            grad_cols.noalias() = weights.transpose() * grad_out;
            Col2Im(cols.data(), w,
                   x.EnsureGrad().mutable_data().data() + n * in_stride);
          }
          if (has_bias && self.inputs[2]->requires_grad) {
            NdArray& grad_b = self.inputs[2]->EnsureGrad();
            // Plain loop: Eigen's vectorized sum depends on buffer alignment.
            for (int64_t c = 0; c < out_channels; ++c) {
              double total = 0.0;
              for (int64_t j = 0; j < grad_out.cols(); ++j) total += grad_out(c, j);
              grad_b[c] += total;
            }
          }
        }
      });
}

Variable Deconv2d(const Variable& input, const Variable& kernel,
                  const Variable& bias, Conv2dGeometry geometry,
                  int output_padding) {
  CheckRank(input, 4, "Deconv2d", "input");
  CheckRank(kernel, 4, "Deconv2d", "kernel");
  const Shape& ys = input.shape();
  const Shape& ks = kernel.shape();
  if (ys[1] != ks[0]) {
    throw ContractError("Deconv2d: input channel dimension (dim 1) is " +
                        std::to_string(ys[1]) + " but kernel expects " +
                        std::to_string(ks[0]));
  }
  if (geometry.stride < 1 || geometry.padding < 0 || output_padding < 0 ||
      output_padding >= geometry.stride) {
    throw ContractError(
        "Deconv2d: need stride >= 1, padding >= 0, 0 <= output_padding < "
        "stride");
  }
  CheckBias(bias, ks[1], "Deconv2d");
  const int64_t out_h =
      (ys[2] - 1) * geometry.stride - 2 * geometry.padding + ks[2] + output_padding;
  const int64_t out_w =
      (ys[3] - 1) * geometry.stride - 2 * geometry.padding + ks[3] + output_padding;
  if (out_h < 1 || out_w < 1) {
    throw ContractError("Deconv2d: empty output for input " +
                        ShapeToString(ys));
  }
  // The window describes the forward convolution this op is the adjoint of.
  const Window w{ks[1], out_h, out_w, ks[2], ks[3], ys[2], ys[3],
                 geometry.stride, geometry.padding};
  if ((w.height + 2 * w.padding - w.kernel_h) / w.stride + 1 != ys[2] ||
      (w.width + 2 * w.padding - w.kernel_w) / w.stride + 1 != ys[3]) {
    throw ContractError("Deconv2d: inconsistent geometry for input " +
                        ShapeToString(ys));
  }
  const int64_t batch = ys[0];
  const int64_t in_channels = ks[0];
  const int64_t out_channels = ks[1];
  const int64_t in_stride = in_channels * w.positions();
  const int64_t out_stride = out_channels * w.height * w.width;
  NdArray out({batch, out_channels, out_h, out_w});
  std::vector<double> cols(w.patch() * w.positions());
  const ConstRowMap weights(kernel.value().data().data(), in_channels,
                            w.patch());
  for (int64_t n = 0; n < batch; ++n) {
    RowMap col_map(cols.data(), w.patch(), w.positions());
    col_map.noalias() =
        weights.transpose() *
        ConstRowMap(input.value().data().data() + n * in_stride, in_channels,
                    w.positions());
    double* image = out.mutable_data().data() + n * out_stride;
    Col2Im(cols.data(), w, image);
    if (bias.defined()) {
      const int64_t plane = w.height * w.width;
      for (int64_t c = 0; c < out_channels; ++c) {
        const double b = bias.value()[c];
        for (int64_t i = 0; i < plane; ++i) image[c * plane + i] += b;
      }
    }
  }

  std::vector<Variable> inputs = {input, kernel};
  if (bias.defined()) inputs.push_back(bias);
  const bool has_bias = bias.defined();
  return Variable::FromOp(
      std::move(out), std::move(inputs),
      [w, batch, in_channels, out_channels, in_stride, out_stride,
       has_bias](GraphNode& self) {
        GraphNode& y = *self.inputs[0];
        GraphNode& k = *self.inputs[1];
        const ConstRowMap weights(k.value.data().data(), in_channels,
                                  w.patch());
        std::vector<double> cols(w.patch() * w.positions());
        for (int64_t n = 0; n < batch; ++n) {
          Im2Col(self.grad.data().data() + n * out_stride, w, cols.data());
          const ConstRowMap grad_cols(cols.data(), w.patch(), w.positions());
          if (y.requires_grad) {
            RowMap grad_y(y.EnsureGrad().mutable_data().data() + n * in_stride,
                          in_channels, w.positions());
            grad_y.noalias() += weights * grad_cols;
          }
          if (k.requires_grad) {
            RowMap grad_k(k.EnsureGrad().mutable_data().data(), in_channels,
                          w.patch());
            grad_k.noalias() +=
                ConstRowMap(y.value.data().data() + n * in_stride, in_channels,
                            w.positions()) *
                grad_cols.transpose();
          }
          if (has_bias && self.inputs[2]->requires_grad) {
            NdArray& grad_b = self.inputs[2]->EnsureGrad();
            const int64_t plane = w.height * w.width;
            const double* g = self.grad.data().data() + n * out_stride;
            for (int64_t c = 0; c < out_channels; ++c) {
              double sum = 0.0;
              for (int64_t i = 0; i < plane; ++i) sum += g[c * plane + i];
              grad_b[c] += sum;
            }
          }
        }
      });
}

}  // namespace numerics
}  // namespace epointda
