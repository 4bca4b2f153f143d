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
#include <numeric>

#include "epointda/numerics/checkpoint.h"
#include "epointda/numerics/grad_check.h"
#include "epointda/numerics/layers.h"
#include "epointda/numerics/losses.h"
#include "epointda/numerics/ops.h"
#include "epointda/numerics/optimizer.h"
#include "gtest/gtest.h"

namespace epointda {
namespace numerics {
namespace {

NdArray RandomArray(const Shape& shape, Rng& rng, double low = -1.0,
                    double high = 1.0) {
  NdArray out(shape);
  for (double& v : out.mutable_data()) v = UniformRange(rng, low, high);
  return out;
}

// Sum(y * w) with fixed random w, so that gradients are not degenerate.
Variable Project(const Variable& y, uint64_t seed) {
  Rng rng(seed);
  return Sum(Mul(y, Variable::Constant(RandomArray(y.shape(), rng))));
}

TEST(NdArrayTest, ShapeMustMatchData) {
  EXPECT_THROW(NdArray({2, 3}, std::vector<double>(5, 0.0)), ContractError);
  NdArray a({2, 3}, 1.5);
  EXPECT_EQ(a.size(), 6);
  a.at({1, 2}) = 4.0;
  EXPECT_EQ(a[5], 4.0);
  EXPECT_THROW(a.at({2, 0}), ContractError);
}

TEST(Conv2dTest, AllOnesCenterIsNine) {
  const Variable x = Variable::Constant(NdArray({1, 1, 3, 3}, 1.0));
  const Variable k = Variable::Constant(NdArray({1, 1, 3, 3}, 1.0));
  const Variable y = Conv2d(x, k, Variable(), {1, 1});
  ASSERT_EQ(y.shape(), (Shape{1, 1, 3, 3}));
  EXPECT_DOUBLE_EQ(y.value().at({0, 0, 1, 1}), 9.0);
  EXPECT_DOUBLE_EQ(y.value().at({0, 0, 0, 0}), 4.0);
  EXPECT_DOUBLE_EQ(y.value().at({0, 0, 0, 1}), 6.0);
}

TEST(Conv2dTest, UnitKernelIsIdentity) {
  Rng rng(3);
  const NdArray input = RandomArray({2, 1, 4, 5}, rng);
  const Variable y =
      Conv2d(Variable::Constant(input), Variable::Constant(NdArray({1, 1, 1, 1}, 1.0)),
             Variable::Constant(NdArray({1}, 0.0)), {1, 0});
  EXPECT_EQ(y.value().values(), input.values());
}

TEST(Conv2dTest, KernelGradientMatchesFiniteDifferences) {
  Rng rng(11);
  const NdArray input = RandomArray({1, 1, 5, 5}, rng);
  const NdArray kernel = RandomArray({1, 1, 3, 3}, rng);
  const GradCheckResult result = GradCheck(
      [&](const std::vector<Variable>& v) {
        return Sum(Conv2d(Variable::Constant(input), v[0], Variable(), {1, 1}));
      },
      {kernel});
  EXPECT_LT(result.max_relative_error, 1e-5);
}

TEST(Conv2dTest, AllInputsGradientStrided) {
  Rng rng(12);
  const GradCheckResult result = GradCheck(
      [](const std::vector<Variable>& v) {
        return Project(Conv2d(v[0], v[1], v[2], {2, 1}), 5);
      },
      {RandomArray({2, 3, 6, 7}, rng), RandomArray({4, 3, 3, 3}, rng),
       RandomArray({4}, rng)});
  EXPECT_LT(result.max_relative_error, 1e-5);
}

TEST(Conv2dTest, ShapeMismatchNamesDimension) {
  const Variable x = Variable::Constant(NdArray({1, 2, 4, 4}));
  const Variable k = Variable::Constant(NdArray({1, 3, 3, 3}));
  try {
    Conv2d(x, k, Variable(), {1, 1});
    FAIL() << "expected ContractError";
  } catch (const ContractError& e) {
    EXPECT_NE(std::string(e.what()).find("dim 1"), std::string::npos);
  }
  EXPECT_THROW(Conv2d(x, Variable::Constant(NdArray({1, 2, 2, 2})), Variable(),
                      {1, 0}),
               ContractError);
}

TEST(Deconv2dTest, AdjointIdentity) {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const int stride = 1 + trial % 3;
    const int padding = trial % 2;
    const int64_t channels = 1 + trial % 3, kernels = 1 + (trial + 1) % 4;
    const int64_t height = 5 + trial % 4, width = 6 + trial % 3;
    const NdArray x = RandomArray({2, channels, height, width}, rng);
    const NdArray w = RandomArray({kernels, channels, 3, 3}, rng);
    const Variable cx =
        Conv2d(Variable::Constant(x), Variable::Constant(w), Variable(),
               {stride, padding});
    const NdArray y = RandomArray(cx.shape(), rng);
    const int64_t natural_h = (cx.shape()[2] - 1) * stride - 2 * padding + 3;
    const int output_padding = static_cast<int>(height - natural_h);
    ASSERT_GE(output_padding, 0);
    ASSERT_LT(output_padding, stride);
    const Variable dy = Deconv2d(Variable::Constant(y), Variable::Constant(w),
                                 Variable(), {stride, padding}, output_padding);
    ASSERT_EQ(dy.shape()[2], height);
    if (dy.shape()[3] != width) continue;  // Width needs its own padding.
    EXPECT_NEAR(Dot(cx.value(), y), Dot(x, dy.value()), 1e-9);
  }
}

TEST(Deconv2dTest, UnitKernelIsIdentity) {
  Rng rng(22);
  const NdArray input = RandomArray({1, 2, 3, 4}, rng);
  NdArray kernel({2, 2, 1, 1}, 0.0);
  kernel.at({0, 0, 0, 0}) = 1.0;
  kernel.at({1, 1, 0, 0}) = 1.0;
  const Variable y = Deconv2d(Variable::Constant(input),
                              Variable::Constant(kernel), Variable(), {1, 0});
  EXPECT_EQ(y.value().values(), input.values());
}

TEST(Deconv2dTest, GradientMatchesFiniteDifferences) {
  Rng rng(23);
  const GradCheckResult result = GradCheck(
      [](const std::vector<Variable>& v) {
        return Project(Deconv2d(v[0], v[1], v[2], {2, 0}), 8);
      },
      {RandomArray({2, 3, 3, 4}, rng), RandomArray({3, 2, 2, 2}, rng),
       RandomArray({2}, rng)});
  EXPECT_LT(result.max_relative_error, 1e-5);
}

TEST(NormalizeTest, ConstantChannelBecomesZero) {
  const Variable y =
      Normalize(Variable::Constant(NdArray({1, 1, 3, 3}, 7.0)),
                NormMode::kInstance, 1e-5);
  for (const double v : y.value().data()) EXPECT_EQ(v, 0.0);
}

TEST(NormalizeTest, InstanceNormHandValues) {
  const Variable y = Normalize(
      Variable::Constant(NdArray({1, 1, 2, 2}, {1.0, 2.0, 3.0, 4.0})),
      NormMode::kInstance, 1e-5);
  const double expected[] = {-1.3416, -0.4472, 0.4472, 1.3416};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(y.value()[i], expected[i], 1e-3);
}

TEST(NormalizeTest, InstanceStatisticsOnRandomInput) {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const NdArray x = RandomArray({3, 4, 5, 6}, rng, -3.0, 5.0);
    const NdArray y = Normalize(Variable::Constant(x), NormMode::kInstance, 1e-5).value();
    for (int64_t plane = 0; plane < 12; ++plane) {
      double mean = 0.0, var = 0.0;
      for (int i = 0; i < 30; ++i) mean += y[plane * 30 + i];
      mean /= 30.0;
      for (int i = 0; i < 30; ++i) {
        var += (y[plane * 30 + i] - mean) * (y[plane * 30 + i] - mean);
      }
      var /= 30.0;
      EXPECT_LT(std::abs(mean), 1e-6);
      EXPECT_LT(std::abs(var - 1.0), 1e-4);
    }
  }
}

TEST(NormalizeTest, GroupStatisticsPerMode) {
  Rng rng(32);
  const NdArray x = RandomArray({2, 4, 3, 3}, rng, 0.0, 4.0);
  // LN over a whole sample; GN(2) over channel pairs; BN over a channel.
  const NdArray ln = Normalize(Variable::Constant(x), NormMode::kLayer, 1e-5).value();
  const NdArray gn = Normalize(Variable::Constant(x), NormMode::kGroup, 1e-5, 2).value();
  const NdArray bn = Normalize(Variable::Constant(x), NormMode::kBatch, 1e-5).value();
  auto mean_of = [](const NdArray& a, const std::vector<int64_t>& idx) {
    double s = 0.0;
    for (const int64_t i : idx) s += a[i];
    return s / static_cast<double>(idx.size());
  };
  std::vector<int64_t> sample0(36), pair1(18), channel2;
  std::iota(sample0.begin(), sample0.end(), 0);
  std::iota(pair1.begin(), pair1.end(), 18);
  for (int n = 0; n < 2; ++n) {
    for (int i = 0; i < 9; ++i) channel2.push_back(n * 36 + 18 + i);
  }
  EXPECT_NEAR(mean_of(ln, sample0), 0.0, 1e-12);
  EXPECT_NEAR(mean_of(gn, pair1), 0.0, 1e-12);
  EXPECT_NEAR(mean_of(bn, channel2), 0.0, 1e-12);
  EXPECT_THROW(Normalize(Variable::Constant(x), NormMode::kGroup, 1e-5, 3),
               ContractError);
}

TEST(NormalizeTest, GradientsAllModes) {
  Rng rng(33);
  for (const NormMode mode : {NormMode::kBatch, NormMode::kInstance,
                              NormMode::kLayer, NormMode::kGroup}) {
    const GradCheckResult result = GradCheck(
        [mode](const std::vector<Variable>& v) {
          return Project(Normalize(v[0], mode, 1e-5, 2), 9);
        },
        {RandomArray({2, 4, 3, 3}, rng)});
    EXPECT_LT(result.max_relative_error, 1e-4) << NormModeName(mode);
  }
}

TEST(ActivationsTest, SoftmaxSumsToOne) {
  Rng rng(41);
  const NdArray y =
      ChannelSoftmax(Variable::Constant(RandomArray({2, 5, 3, 4}, rng, -20, 20)))
          .value();
  for (int n = 0; n < 2; ++n) {
    for (int p = 0; p < 12; ++p) {
      double total = 0.0;
      for (int c = 0; c < 5; ++c) total += y[(n * 5 + c) * 12 + p];
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  }
}

TEST(ActivationsTest, Relu) {
  const NdArray y =
      Relu(Variable::Constant(NdArray({4}, {-2.0, -0.5, 0.5, 3.0}))).value();
  EXPECT_EQ(y.values(), (std::vector<double>{0.0, 0.0, 0.5, 3.0}));
}

TEST(ActivationsTest, SigmoidGradientAnalyticAndNumeric) {
  Rng rng(42);
  const NdArray x = RandomArray({7}, rng, -4.0, 4.0);
  Variable p = Variable::Parameter(x);
  Sum(Sigmoid(p)).Backward();
  for (int i = 0; i < 7; ++i) {
    const double s = 1.0 / (1.0 + std::exp(-x[i]));
    EXPECT_NEAR(p.grad()[i], s * (1.0 - s), 1e-12);
  }
  const GradCheckResult result = GradCheck(
      [](const std::vector<Variable>& v) { return Sum(Sigmoid(v[0])); }, {x});
  EXPECT_LT(result.max_relative_error, 1e-6);
}

TEST(ActivationsTest, ElementwiseGradients) {
  Rng rng(43);
  // Values kept away from the kinks of relu and abs.
  NdArray x = RandomArray({2, 3, 2, 2}, rng, 0.2, 1.0);
  for (int64_t i = 0; i < x.size(); i += 2) x[i] = -x[i];
  const NdArray positive = RandomArray({2, 3, 2, 2}, rng, 0.5, 2.0);
  const NdArray weights = RandomArray({2, 1, 2, 2}, rng);
  const std::vector<std::pair<const char*, ScalarFunction>> cases = {
      {"relu", [](const std::vector<Variable>& v) { return Project(Relu(v[0]), 1); }},
      {"abs", [](const std::vector<Variable>& v) { return Project(Abs(v[0]), 2); }},
      {"softmax", [](const std::vector<Variable>& v) {
         return Project(ChannelSoftmax(v[0]), 3);
       }},
      {"mul", [&](const std::vector<Variable>& v) {
         return Project(Mul(v[0], Sigmoid(v[0])), 4);
       }},
      {"broadcast", [&](const std::vector<Variable>& v) {
         return Project(MulChannelBroadcast(v[0], Variable::Constant(weights)), 5);
       }},
      {"pool", [](const std::vector<Variable>& v) {
         return Project(GlobalMeanPool(v[0]), 6);
       }},
      {"slice", [](const std::vector<Variable>& v) {
         return Project(SliceChannels(v[0], 1, 3), 7);
       }},
  };
  for (const auto& [name, fn] : cases) {
    EXPECT_LT(GradCheck(fn, {x}).max_relative_error, 1e-6) << name;
  }
  EXPECT_LT(GradCheck([](const std::vector<Variable>& v) {
              return Sum(Log(v[0]));
            },
            {positive})
                .max_relative_error,
            1e-6);
  EXPECT_LT(GradCheck([&](const std::vector<Variable>& v) {
              return Project(MulChannelBroadcast(Variable::Constant(x), v[0]), 8);
            },
            {weights})
                .max_relative_error,
            1e-6);
}

TEST(ActivationsTest, ChannelAffineGradient) {
  Rng rng(44);
  const GradCheckResult result = GradCheck(
      [](const std::vector<Variable>& v) {
        return Project(ChannelAffine(v[0], v[1], v[2]), 12);
      },
      {RandomArray({2, 3, 2, 2}, rng), RandomArray({3}, rng),
       RandomArray({3}, rng)});
  EXPECT_LT(result.max_relative_error, 1e-6);
}

TEST(SgdTest, VanillaDescent) {
  std::vector<Variable> params = {Variable::Parameter(NdArray::Scalar(1.0))};
  std::vector<NdArray> grads = {NdArray::Scalar(0.5)};
  OptimizerState state;
  state.config = {0.1, 0.0, 0.5, 20000};
  ASSERT_TRUE(SgdStep(params, grads, state).applied);
  EXPECT_DOUBLE_EQ(params[0].value()[0], 0.95);
  EXPECT_EQ(state.step_count, 1);
}

TEST(SgdTest, MomentumTwoSteps) {
  std::vector<Variable> params = {Variable::Parameter(NdArray::Scalar(0.0))};
  std::vector<NdArray> grads = {NdArray::Scalar(1.0)};
  OptimizerState state;
  state.config = {0.05, 0.9, 0.5, 20000};
  SgdStep(params, grads, state);
  EXPECT_NEAR(params[0].value()[0], -0.05, 1e-15);
  SgdStep(params, grads, state);
  EXPECT_NEAR(params[0].value()[0], -0.05 - 0.095, 1e-15);
}

TEST(SgdTest, LearningRateSchedule) {
  OptimizerState state;
  state.config = {0.05, 0.9, 0.5, 20000};
  state.step_count = 20000;
  EXPECT_DOUBLE_EQ(state.LearningRate(), 0.025);
  for (const int64_t n : {0, 1, 19999, 20000, 39999, 40000, 65000}) {
    state.step_count = n;
    EXPECT_EQ(state.LearningRate(), 0.05 * std::pow(0.5, n / 20000)) << n;
  }
}

TEST(SgdTest, NonFiniteGradientRejected) {
  std::vector<Variable> params = {Variable::Parameter(NdArray({2}, 1.0))};
  std::vector<NdArray> grads = {NdArray({2}, {0.1, std::nan("")})};
  OptimizerState state;
  const StepOutcome outcome = SgdStep(params, grads, state);
  EXPECT_FALSE(outcome.applied);
  EXPECT_FALSE(outcome.diagnostic.empty());
  EXPECT_EQ(state.step_count, 0);
  EXPECT_EQ(params[0].value()[0], 1.0);
}

TEST(GradCheckTest, SumOfSquares) {
  Rng rng(51);
  const GradCheckResult result = GradCheck(
      [](const std::vector<Variable>& v) { return Sum(Mul(v[0], v[0])); },
      {RandomArray({10}, rng)});
  EXPECT_LT(result.max_relative_error, 1e-8);
}

TEST(GradCheckTest, ConstantFunction) {
  const GradCheckResult result = GradCheck(
      [](const std::vector<Variable>& v) {
        return Sum(Scale(v[0], 0.0));
      },
      {NdArray({3}, 2.0)});
  EXPECT_EQ(result.max_relative_error, 0.0);
  EXPECT_EQ(result.analytic, 0.0);
}

TEST(GraphTest, DetachStopsGradient) {
  Variable a = Variable::Parameter(NdArray::Scalar(2.0));
  Variable b = Variable::Parameter(NdArray::Scalar(3.0));
  Sum(Add(Mul(a, b.Detach()), b)).Backward();
  EXPECT_EQ(a.grad()[0], 3.0);
  EXPECT_EQ(b.grad()[0], 1.0);
}

TEST(GraphTest, GradientsAccumulateUntilZeroed) {
  Variable a = Variable::Parameter(NdArray::Scalar(2.0));
  Sum(Mul(a, a)).Backward();
  Sum(Mul(a, a)).Backward();
  EXPECT_EQ(a.grad()[0], 8.0);
  a.ZeroGrad();
  EXPECT_EQ(a.grad()[0], 0.0);
}

TEST(LayersTest, GlorotBounds) {
  Rng rng(61);
  const NdArray w = GlorotUniform({8, 4, 3, 3}, 36, 72, rng);
  const double limit = std::sqrt(6.0 / 108.0);
  for (const double v : w.data()) EXPECT_LE(std::abs(v), limit);
}

TEST(LayersTest, CheckpointRoundTrip) {
  Rng rng(62);
  Conv2dLayer conv(2, 3, 3, {1, 1}, rng);
  NormLayer norm(3, NormMode::kBatch, 1e-5, 1);
  ParameterList params;
  conv.Collect("conv", &params);
  norm.Collect("norm", &params);
  const std::string path = ::testing::TempDir() + "/ckpt.bin";
  SaveCheckpoint(path, params);

  Rng other(99);
  Conv2dLayer conv2(2, 3, 3, {1, 1}, other);
  NormLayer norm2(3, NormMode::kBatch, 1e-5, 1);
  ParameterList params2;
  conv2.Collect("conv", &params2);
  norm2.Collect("norm", &params2);
  LoadCheckpoint(path, params2);
  for (size_t i = 0; i < params.size(); ++i) {
    for (int64_t j = 0; j < params[i].variable.value().size(); ++j) {
      EXPECT_EQ(static_cast<float>(params[i].variable.value()[j]),
                params2[i].variable.value()[j]);
    }
  }
}

TEST(PropertyTest, RandomShapeGradientChecks) {
  Rng rng(71);
  for (int trial = 0; trial < 12; ++trial) {
    const int64_t n = 1 + UniformIndex(rng, 2);
    const int64_t c = 1 + UniformIndex(rng, 3);
    const int64_t k = 1 + UniformIndex(rng, 3);
    const int64_t h = 3 + UniformIndex(rng, 4);
    const int64_t w = 3 + UniformIndex(rng, 4);
    const int stride = 1 + static_cast<int>(UniformIndex(rng, 2));
    const GradCheckResult conv = GradCheck(
        [stride](const std::vector<Variable>& v) {
          return Project(Conv2d(v[0], v[1], v[2], {stride, 1}), 13);
        },
        {RandomArray({n, c, h, w}, rng), RandomArray({k, c, 3, 3}, rng),
         RandomArray({k}, rng)});
    EXPECT_LT(conv.max_relative_error, 1e-4) << "trial " << trial;
    const GradCheckResult norm = GradCheck(
        [](const std::vector<Variable>& v) {
          return Project(Normalize(v[0], NormMode::kInstance, 1e-5), 14);
        },
        {RandomArray({n, c, h, w}, rng)});
    EXPECT_LT(norm.max_relative_error, 1e-4) << "trial " << trial;
  }
}

TEST(FocalLossTest, SinglePixelHalfProbability) {
  const Variable logits = Variable::Constant(NdArray({1, 2, 1, 1}, 0.4));
  EXPECT_NEAR(SoftmaxFocalLoss(logits, {1}, 2.0).value()[0], 0.25 * std::log(2.0), 1e-15);
  EXPECT_NEAR(SoftmaxFocalLoss(logits, {1}, 2.0).value()[0], 0.1733, 1e-4);
}

TEST(FocalLossTest, MatchesFrozenReference) {
  // Pixel 0 has logits (0.3, -1.2, 2.0) and label 2; pixel 1 has
  // (1.5, 0.1, -0.4) and label 0.
  const Variable logits = Variable::Constant(
      NdArray({1, 3, 1, 2}, std::vector<double>{0.3, 1.5, -1.2, 0.1, 2.0, -0.4}));
  EXPECT_NEAR(SoftmaxFocalLoss(logits, {2, 0}, 2.0).value()[0], 0.016798686105789194, 1e-14);
}

TEST(FocalLossTest, GammaZeroIsCrossEntropy) {
  Rng rng(41);
  const NdArray z = RandomArray({2, 4, 3, 2}, rng, -3.0, 3.0);
  std::vector<uint8_t> labels(12);
  for (auto& l : labels) l = static_cast<uint8_t>(UniformIndex(rng, 4));
  double ce = 0.0;
  for (int64_t n = 0; n < 2; ++n) {
    for (int64_t h = 0; h < 3; ++h) {
      for (int64_t w = 0; w < 2; ++w) {
        double denom = 0.0;
        for (int64_t c = 0; c < 4; ++c) denom += std::exp(z.at({n, c, h, w}));
        const int64_t k = labels[(n * 3 + h) * 2 + w];
        ce -= z.at({n, k, h, w}) - std::log(denom);
      }
    }
  }
  EXPECT_NEAR(SoftmaxFocalLoss(Variable::Constant(z), labels, 0.0).value()[0], ce / 12.0,
              1e-12);
}

TEST(FocalLossTest, GradientCheck) {
  Rng rng(42);
  std::vector<uint8_t> labels(2 * 3 * 4);
  for (auto& l : labels) l = static_cast<uint8_t>(UniformIndex(rng, 3));
  for (double gamma : {0.0, 1.0, 2.0, 3.5}) {
    const auto result = GradCheck(
        [&](const std::vector<Variable>& v) { return SoftmaxFocalLoss(v[0], labels, gamma); },
        {RandomArray({2, 3, 3, 4}, rng, -2.0, 2.0)});
    EXPECT_LT(result.max_relative_error, 1e-4) << "gamma " << gamma;
  }
}

TEST(FocalLossTest, RejectsBadLabels) {
  const Variable logits = Variable::Constant(NdArray({1, 3, 1, 2}, 0.0));
  EXPECT_THROW(SoftmaxFocalLoss(logits, {0, 3}, 2.0), ContractError);
  EXPECT_THROW(SoftmaxFocalLoss(logits, {0}, 2.0), ContractError);
  EXPECT_THROW(SoftmaxFocalLoss(logits, {0, 1}, -1.0), ContractError);
}

TEST(ChannelArgmaxTest, TiesGoToLowerIndex) {
  const NdArray z({1, 3, 1, 3}, std::vector<double>{1, 0, 5, 1, 2, 5, 0, 2, 1});
  EXPECT_EQ(ChannelArgmax(z), (std::vector<uint8_t>{0, 1, 0}));
}

TEST(AddBatchBroadcastTest, ValueAndGradient) {
  Rng rng(43);
  const auto result = GradCheck(
      [](const std::vector<Variable>& v) {
        return Project(AddBatchBroadcast(v[0], v[1]), 7);
      },
      {RandomArray({3, 2, 2, 2}, rng), RandomArray({1, 2, 2, 2}, rng)});
  EXPECT_LT(result.max_relative_error, 1e-4);
  EXPECT_THROW(AddBatchBroadcast(Variable::Constant(NdArray({2, 2}, 0.0)),
                                 Variable::Constant(NdArray({2, 2}, 0.0))),
               ContractError);
}

}  // namespace
}  // namespace numerics
}  // namespace epointda
