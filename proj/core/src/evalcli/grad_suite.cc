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

#include "epointda/evalcli/grad_suite.h"

#include <functional>
#include <memory>

#include "epointda/align/asac.h"
#include "epointda/align/moments.h"
#include "epointda/noiserender/gan.h"
#include "epointda/noiserender/renderer.h"
#include "epointda/numerics/grad_check.h"
#include "epointda/numerics/losses.h"
#include "epointda/numerics/ops.h"
#include "epointda/numerics/rng.h"
#include "epointda/segmodel/network.h"
#include "epointda/segmodel/objective.h"

namespace epointda {
namespace evalcli {
namespace {

using numerics::NdArray;
using numerics::NormMode;
using numerics::Rng;
using numerics::Shape;
using numerics::Variable;
using Inputs = std::vector<Variable>;

NdArray Uniform(const Shape& shape, Rng& rng, double low = -1.0, double high = 1.0) {
  NdArray out(shape);
  for (double& v : out.mutable_data()) v = numerics::UniformRange(rng, low, high);
  return out;
}

// Values bounded away from zero, for kinked functions.
NdArray AwayFromZero(const Shape& shape, Rng& rng) {
  NdArray out(shape);
  for (double& v : out.mutable_data()) {
    const double m = numerics::UniformRange(rng, 0.1, 1.0);
    v = numerics::UniformUnit(rng) < 0.5 ? -m : m;
  }
  return out;
}

std::vector<uint8_t> Labels(size_t n, int classes, Rng& rng) {
  std::vector<uint8_t> out(n);
  for (auto& v : out) v = static_cast<uint8_t>(numerics::UniformIndex(rng, classes));
  return out;
}

class Suite {
 public:
  explicit Suite(uint64_t seed) : rng_(seed) {}

  // Checks sum(w * fn(inputs)) with a fresh random weighting w.
  void Weighted(const std::string& name, const std::function<Variable(const Inputs&)>& fn,
                const std::vector<NdArray>& point) {
    const Shape out_shape = fn(Constants(point)).shape();
    const Variable w = Variable::Constant(Uniform(out_shape, rng_));
    Scalar(name, [&fn, w](const Inputs& v) { return numerics::Sum(numerics::Mul(fn(v), w)); },
           point);
  }

  void Scalar(const std::string& name, const numerics::ScalarFunction& fn,
              const std::vector<NdArray>& point) {
    entries_.push_back({name, numerics::GradCheck(fn, point).max_relative_error});
  }

  Rng& rng() { return rng_; }
  std::vector<GradSuiteEntry> entries() const { return entries_; }

 private:
  static Inputs Constants(const std::vector<NdArray>& point) {
    Inputs out;
    for (const NdArray& p : point) out.push_back(Variable::Constant(p));
    return out;
  }

  Rng rng_;
  std::vector<GradSuiteEntry> entries_;
};

}  // namespace

std::vector<GradSuiteEntry> RunGradientSuite(uint64_t seed) {
  Suite s(seed);
  Rng& rng = s.rng();

  s.Weighted("conv2d", [](const Inputs& v) { return numerics::Conv2d(v[0], v[1], v[2], {1, 1}); },
             {Uniform({2, 2, 4, 5}, rng), Uniform({3, 2, 3, 3}, rng), Uniform({3}, rng)});
  s.Weighted("conv2d_strided",
             [](const Inputs& v) { return numerics::Conv2d(v[0], v[1], v[2], {2, 1}); },
             {Uniform({1, 2, 5, 6}, rng), Uniform({2, 2, 3, 3}, rng), Uniform({2}, rng)});
  s.Weighted("deconv2d",
             [](const Inputs& v) { return numerics::Deconv2d(v[0], v[1], v[2], {2, 0}); },
             {Uniform({2, 3, 2, 3}, rng), Uniform({3, 2, 3, 3}, rng), Uniform({2}, rng)});
  s.Weighted("deconv2d_padded",
             [](const Inputs& v) { return numerics::Deconv2d(v[0], v[1], v[2], {2, 1}, 1); },
             {Uniform({1, 2, 3, 3}, rng), Uniform({2, 2, 3, 3}, rng), Uniform({2}, rng)});

  const struct {
    const char* name;
    NormMode mode;
    int groups;
  } norms[] = {{"norm_batch", NormMode::kBatch, 1},
               {"norm_instance", NormMode::kInstance, 1},
               {"norm_layer", NormMode::kLayer, 1},
               {"norm_group", NormMode::kGroup, 2}};
  for (const auto& n : norms) {
    s.Weighted(n.name,
               [n](const Inputs& v) { return numerics::Normalize(v[0], n.mode, 1e-5, n.groups); },
               {Uniform({2, 4, 3, 3}, rng)});
  }
  s.Weighted("norm_with_stats",
             [](const Inputs& v) {
               return numerics::NormalizeWithStats(v[0], {0.1, -0.2}, {0.5, 2.0}, 1e-5);
             },
             {Uniform({2, 2, 2, 3}, rng)});
  s.Weighted("channel_affine",
             [](const Inputs& v) { return numerics::ChannelAffine(v[0], v[1], v[2]); },
             {Uniform({2, 3, 2, 2}, rng), Uniform({3}, rng), Uniform({3}, rng)});

  s.Weighted("relu", [](const Inputs& v) { return numerics::Relu(v[0]); },
             {AwayFromZero({2, 3, 2, 2}, rng)});
  s.Weighted("abs", [](const Inputs& v) { return numerics::Abs(v[0]); },
             {AwayFromZero({2, 3, 2, 2}, rng)});
  s.Weighted("sigmoid", [](const Inputs& v) { return numerics::Sigmoid(v[0]); },
             {Uniform({2, 3, 2, 2}, rng, -3.0, 3.0)});
  s.Weighted("log", [](const Inputs& v) { return numerics::Log(v[0]); },
             {Uniform({2, 3, 2, 2}, rng, 0.2, 2.0)});
  s.Weighted("channel_softmax", [](const Inputs& v) { return numerics::ChannelSoftmax(v[0]); },
             {Uniform({2, 3, 2, 2}, rng, -2.0, 2.0)});
  s.Weighted("mul_channel_broadcast",
             [](const Inputs& v) { return numerics::MulChannelBroadcast(v[0], v[1]); },
             {Uniform({2, 3, 2, 2}, rng), Uniform({2, 1, 2, 2}, rng)});
  s.Weighted("add_batch_broadcast",
             [](const Inputs& v) { return numerics::AddBatchBroadcast(v[0], v[1]); },
             {Uniform({3, 2, 2, 2}, rng), Uniform({1, 2, 2, 2}, rng)});
  s.Weighted("global_mean_pool", [](const Inputs& v) { return numerics::GlobalMeanPool(v[0]); },
             {Uniform({2, 3, 2, 3}, rng)});

  s.Weighted("asac_attention",
             [](const Inputs& v) { return align::AsacAttention(v[0], v[1], v[2]); },
             {Uniform({2, 3, 3, 4}, rng), Uniform({1, 3, 1, 1}, rng), Uniform({1}, rng)});
  s.Weighted("asac",
             [](const Inputs& v) {
               return align::AsacForward(v[0], v[1], v[2], v[3], v[4], {1, 1});
             },
             {Uniform({2, 3, 3, 4}, rng), Uniform({1, 3, 1, 1}, rng), Uniform({1}, rng),
              Uniform({2, 3, 3, 3}, rng), Uniform({2}, rng)});

  const std::vector<uint8_t> labels = Labels(2 * 2 * 3, 3, rng);
  s.Scalar("focal_loss",
           [labels](const Inputs& v) { return segmodel::FocalLoss(v[0], labels, 2.0); },
           {Uniform({2, 3, 2, 3}, rng, -2.0, 2.0)});
  s.Scalar("focal_loss_gamma0",
           [labels](const Inputs& v) { return numerics::SoftmaxFocalLoss(v[0], labels, 0.0); },
           {Uniform({2, 3, 2, 3}, rng, -2.0, 2.0)});
  const std::vector<uint8_t> mask = Labels(2 * 2 * 3, 2, rng);
  s.Scalar("mask_loss", [mask](const Inputs& v) { return noiserender::MaskLoss(v[0], mask); },
           {Uniform({2, 2, 2, 3}, rng, -2.0, 2.0)});

  for (int order = 1; order <= 3; ++order) {
    align::HommConfig exact;
    exact.order = order;
    exact.mode = align::HommMode::kExact;
    s.Scalar("homm_exact_p" + std::to_string(order),
             [exact](const Inputs& v) { return align::HommLoss(v[0], v[1], exact); },
             {Uniform({4, 3}, rng), Uniform({5, 3}, rng)});
  }
  align::HommConfig mc;
  mc.order = 3;
  mc.samples = 40;
  mc.seed = 7;
  mc.mode = align::HommMode::kMonteCarlo;
  s.Scalar("homm_monte_carlo_p3",
           [mc](const Inputs& v) { return align::HommLoss(v[0], v[1], mc); },
           {Uniform({4, 12}, rng), Uniform({3, 12}, rng)});
  s.Scalar("coral", [](const Inputs& v) { return align::CoralLoss(v[0], v[1]); },
           {Uniform({5, 3}, rng), Uniform({6, 3}, rng)});

  s.Scalar("gan_rs",
           [](const Inputs& v) {
             return noiserender::GanLossRs(numerics::Sigmoid(v[0]), numerics::Sigmoid(v[1]));
           },
           {Uniform({3, 1}, rng), Uniform({4, 1}, rng)});
  s.Scalar("gan_sr",
           [](const Inputs& v) {
             return noiserender::GanLossSr(numerics::Sigmoid(v[0]), numerics::Sigmoid(v[1]));
           },
           {Uniform({3, 1}, rng), Uniform({4, 1}, rng)});
  s.Scalar("cycle",
           [](const Inputs& v) {
             const Variable a = v[2];
             const Variable b = v[3];
             const noiserender::ImageMap gs = [a](const Variable& x) {
               return numerics::MulChannelBroadcast(x, a);
             };
             const noiserender::ImageMap gr = [b](const Variable& x) {
               return numerics::AddScalar(numerics::Mul(x, b), 0.3);
             };
             return noiserender::CycleLoss(gs, gr, v[0], v[1]);
           },
           {Uniform({1, 2, 2, 2}, rng), Uniform({1, 2, 2, 2}, rng),
            Uniform({1, 1, 2, 2}, rng, 0.5, 1.5), Uniform({1, 2, 2, 2}, rng, 0.5, 1.5)});

  // End to end through the segmentation network's input.
  segmodel::SegNetConfig net_config;
  net_config.widths = {2, 3, 3};
  auto net = std::make_shared<segmodel::SegNet>(net_config, 3);
  const std::vector<uint8_t> seg_labels = Labels(1 * 4 * 8, 3, rng);
  s.Scalar("segnet_input",
           [net, seg_labels](const Inputs& v) {
             return segmodel::FocalLoss(net->Forward(v[0], true, false).logits, seg_labels, 2.0);
           },
           {Uniform({1, 3, 4, 8}, rng)});
  return s.entries();
}

}  // namespace evalcli
}  // namespace epointda
