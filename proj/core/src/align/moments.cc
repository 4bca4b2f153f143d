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

#include "epointda/align/moments.h"

#include <cmath>

#include "Eigen/Core"
#include "epointda/numerics/rng.h"

namespace epointda {
namespace align {
namespace {

using numerics::GraphNode;
using numerics::Shape;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMatrix>;
using MutMap = Eigen::Map<RowMatrix>;

void CheckPair(const Shape& s, const Shape& t, const char* op) {
  if (s.size() != 2 || t.size() != 2) {
    throw ContractError(std::string(op) + ": activations must be [N, D], got " +
                        numerics::ShapeToString(s) + " and " + numerics::ShapeToString(t));
  }
  if (s[1] != t[1]) {
    throw ContractError(std::string(op) + ": feature dimension mismatch (" +
                        std::to_string(s[1]) + " vs " + std::to_string(t[1]) + ")");
  }
  if (s[0] < 1 || t[0] < 1) throw ContractError(std::string(op) + ": empty batch");
}

ConstMap AsMatrix(const NdArray& a) {
  return ConstMap(a.data().data(), a.dim(0), a.dim(1));
}

double IntPow(double x, int p) {
  double out = 1.0;
  for (int i = 0; i < p; ++i) out *= x;
  return out;
}

RowMatrix PowElements(const RowMatrix& m, int p) {
  return m.unaryExpr([p](double v) { return IntPow(v, p); });
}

Variable ExactHomm(const Variable& source, const Variable& target, int p) {
  const ConstMap xs = AsMatrix(source.value());
  const ConstMap xt = AsMatrix(target.value());
  const double ns = static_cast<double>(xs.rows());
  const double nt = static_cast<double>(xt.rows());
  const double scale = 1.0 / std::pow(static_cast<double>(xs.cols()), p);
  const RowMatrix gss = xs * xs.transpose();
  const RowMatrix gtt = xt * xt.transpose();
  const RowMatrix gst = xs * xt.transpose();
  const double value = scale * (PowElements(gss, p).sum() / (ns * ns) +
                                PowElements(gtt, p).sum() / (nt * nt) -
                                2.0 * PowElements(gst, p).sum() / (ns * nt));
  return Variable::FromOp(
      NdArray::Scalar(value), {source, target},
      [p, scale, ns, nt, gss, gtt, gst](GraphNode& self) {
        const double g = self.grad[0] * scale * 2.0 * p;
        GraphNode& src = *self.inputs[0];
        GraphNode& tgt = *self.inputs[1];
        const ConstMap xs = AsMatrix(src.value);
        const ConstMap xt = AsMatrix(tgt.value);
        const RowMatrix pss = PowElements(gss, p - 1);
        const RowMatrix ptt = PowElements(gtt, p - 1);
        const RowMatrix pst = PowElements(gst, p - 1);
        if (src.requires_grad) {
          MutMap ds(src.EnsureGrad().mutable_data().data(), xs.rows(), xs.cols());
          ds += g * (pss * xs / (ns * ns) - pst * xt / (ns * nt));
        }
        if (tgt.requires_grad) {
          MutMap dt(tgt.EnsureGrad().mutable_data().data(), xt.rows(), xt.cols());
          dt += g * (ptt * xt / (nt * nt) - pst.transpose() * xs / (ns * nt));
        }
      });
}

Variable MonteCarloHomm(const Variable& source, const Variable& target,
                        const HommConfig& config) {
  const ConstMap xs = AsMatrix(source.value());
  const ConstMap xt = AsMatrix(target.value());
  const int p = config.order;
  const int samples = config.samples;
  const auto d = static_cast<uint64_t>(xs.cols());
  numerics::Rng rng(config.seed);
  std::vector<int64_t> tuples(static_cast<size_t>(samples) * p);
  for (int64_t& index : tuples) index = static_cast<int64_t>(numerics::UniformIndex(rng, d));

  const auto moment = [p](const ConstMap& x, const int64_t* tuple) {
    double total = 0.0;
    for (Eigen::Index a = 0; a < x.rows(); ++a) {
      double prod = 1.0;
      for (int k = 0; k < p; ++k) prod *= x(a, tuple[k]);
      total += prod;
    }
    return total / static_cast<double>(x.rows());
  };
  std::vector<double> diff(static_cast<size_t>(samples));
  double value = 0.0;
  for (int j = 0; j < samples; ++j) {
    const int64_t* tuple = &tuples[static_cast<size_t>(j) * p];
    diff[j] = moment(xs, tuple) - moment(xt, tuple);
    value += diff[j] * diff[j];
  }
  value /= samples;

  return Variable::FromOp(
      NdArray::Scalar(value), {source, target},
      [p, samples, tuples = std::move(tuples), diff = std::move(diff)](GraphNode& self) {
        const double g = self.grad[0] * 2.0 / samples;
        for (int side = 0; side < 2; ++side) {
          GraphNode& node = *self.inputs[side];
          if (!node.requires_grad) continue;
          const ConstMap x = AsMatrix(node.value);
          MutMap dx(node.EnsureGrad().mutable_data().data(), x.rows(), x.cols());
          const double sign = side == 0 ? 1.0 : -1.0;
          const double per_row = g * sign / static_cast<double>(x.rows());
          for (int j = 0; j < samples; ++j) {
            const int64_t* tuple = &tuples[static_cast<size_t>(j) * p];
            const double coeff = per_row * diff[j];
            for (Eigen::Index a = 0; a < x.rows(); ++a) {
              for (int k = 0; k < p; ++k) {
                double prod = coeff;
                for (int l = 0; l < p; ++l) {
                  if (l != k) prod *= x(a, tuple[l]);
                }
                dx(a, tuple[k]) += prod;
              }
            }
          }
        }
      });
}

}  // namespace

const char* HommModeName(HommMode mode) {
  switch (mode) {
    case HommMode::kAuto: return "auto";
    case HommMode::kExact: return "exact";
    case HommMode::kMonteCarlo: return "mc";
  }
  return "auto";
}

HommMode ParseHommMode(const std::string& name) {
  if (name == "auto") return HommMode::kAuto;
  if (name == "exact") return HommMode::kExact;
  if (name == "mc") return HommMode::kMonteCarlo;
  throw ContractError("unknown HoMM mode '" + name + "'");
}

void HommConfig::Validate() const {
  if (order < 1) throw ContractError("HommConfig: order must be >= 1");
  if (samples < 1) throw ContractError("HommConfig: sample count must be >= 1");
}

Variable HommLoss(const Variable& source, const Variable& target, const HommConfig& config) {
  config.Validate();
  CheckPair(source.shape(), target.shape(), "homm_loss");
  const int64_t d = source.shape()[1];
  const bool exact_allowed = config.order <= 2 || d <= 8;
  switch (config.mode) {
    case HommMode::kExact:
      if (!exact_allowed) {
        throw ContractError("homm_loss: order " + std::to_string(config.order) +
                            " with D=" + std::to_string(d) +
                            " needs Monte Carlo mode");
      }
      return ExactHomm(source, target, config.order);
    case HommMode::kMonteCarlo:
      return MonteCarloHomm(source, target, config);
    case HommMode::kAuto:
      break;
  }
  return exact_allowed ? ExactHomm(source, target, config.order)
                       : MonteCarloHomm(source, target, config);
}

double HommDense(const NdArray& source, const NdArray& target, int order) {
  CheckPair(source.shape(), target.shape(), "HommDense");
  const ConstMap xs = AsMatrix(source);
  const ConstMap xt = AsMatrix(target);
  const int64_t d = xs.cols();
  int64_t entries = 1;
  for (int k = 0; k < order; ++k) entries *= d;
  std::vector<int64_t> tuple(order, 0);
  double total = 0.0;
  for (int64_t e = 0; e < entries; ++e) {
    int64_t rest = e;
    for (int k = 0; k < order; ++k) {
      tuple[k] = rest % d;
      rest /= d;
    }
    const auto moment = [&](const ConstMap& x) {
      double sum = 0.0;
      for (Eigen::Index a = 0; a < x.rows(); ++a) {
        double prod = 1.0;
        for (int k = 0; k < order; ++k) prod *= x(a, tuple[k]);
        sum += prod;
      }
      return sum / static_cast<double>(x.rows());
    };
    const double diff = moment(xs) - moment(xt);
    total += diff * diff;
  }
  return total / static_cast<double>(entries);
}

Variable CoralLoss(const Variable& source, const Variable& target) {
  CheckPair(source.shape(), target.shape(), "coral_loss");
  if (source.shape()[0] < 2 || target.shape()[0] < 2) {
    throw ContractError("coral_loss: covariance needs at least two samples per batch");
  }
  const auto centered = [](const NdArray& a) {
    RowMatrix xc = AsMatrix(a);
    for (Eigen::Index j = 0; j < xc.cols(); ++j) {
      double mean = 0.0;
      for (Eigen::Index i = 0; i < xc.rows(); ++i) mean += xc(i, j);
      mean /= static_cast<double>(xc.rows());
      for (Eigen::Index i = 0; i < xc.rows(); ++i) xc(i, j) -= mean;
    }
    return xc;
  };
  const RowMatrix xs = centered(source.value());
  const RowMatrix xt = centered(target.value());
  const double ns = static_cast<double>(xs.rows());
  const double nt = static_cast<double>(xt.rows());
  const double d = static_cast<double>(xs.cols());
  const RowMatrix delta =
      xs.transpose() * xs / (ns - 1.0) - xt.transpose() * xt / (nt - 1.0);
  const double value = delta.squaredNorm() / (4.0 * d * d);
  return Variable::FromOp(
      NdArray::Scalar(value), {source, target},
      [xs, xt, delta, ns, nt, d](GraphNode& self) {
        const double g = self.grad[0] / (d * d);
        GraphNode& src = *self.inputs[0];
        GraphNode& tgt = *self.inputs[1];
        if (src.requires_grad) {
          MutMap ds(src.EnsureGrad().mutable_data().data(), xs.rows(), xs.cols());
          ds += (g / (ns - 1.0)) * (xs * delta);
        }
        if (tgt.requires_grad) {
          MutMap dt(tgt.EnsureGrad().mutable_data().data(), xt.rows(), xt.cols());
          dt -= (g / (nt - 1.0)) * (xt * delta);
        }
      });
}

}  // namespace align
}  // namespace epointda
