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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "epointda/geometry/projection.h"
#include "epointda/geometry/tensor.h"
#include "epointda/noiserender/completion.h"
#include "epointda/noiserender/gan.h"
#include "epointda/noiserender/renderer.h"
#include "epointda/numerics/grad_check.h"
#include "epointda/numerics/ops.h"
#include "epointda/simulator/dataset.h"
#include "gtest/gtest.h"

namespace epointda {
namespace noiserender {
namespace {

using geometry::RangeImage;
using numerics::Rng;
using numerics::Shape;

NdArray RandomArray(const Shape& shape, Rng& rng, double low = -1.0, double high = 1.0) {
  NdArray out(shape);
  for (double& v : out.mutable_data()) v = numerics::UniformRange(rng, low, high);
  return out;
}

RangeImage FullImage(int rows, int cols, uint64_t seed) {
  Rng rng(seed);
  RangeImage image(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      image.SetPoint(r, c,
                     {numerics::UniformRange(rng, 2, 20), numerics::UniformRange(rng, -5, 5),
                      numerics::UniformRange(rng, -1, 1)},
                     static_cast<uint8_t>(c % 3));
    }
  }
  return image;
}

TEST(GanLossTest, ConstantHalfExample) {
  const Variable half = Variable::Constant(NdArray({4, 1}, 0.5));
  EXPECT_NEAR(GanLossRs(half, half).value()[0], 2.0 * std::log(0.5), 1e-15);
  EXPECT_NEAR(GanLossSr(half, half).value()[0], -1.3862943611198906, 1e-12);
}

TEST(GanLossTest, LimitApproachesZeroFromBelow) {
  const Variable gen = Variable::Constant(NdArray({2, 1}, 1.0 - 1e-9));
  const Variable genuine = Variable::Constant(NdArray({2, 1}, 1e-9));
  const double v = GanLossRs(gen, genuine).value()[0];
  EXPECT_LT(v, 0.0);
  EXPECT_GT(v, -1e-8);
}

TEST(GanLossTest, MixedBatchMatchesScalarSum) {
  const std::vector<double> gen = {0.1, 0.7, 0.35, 0.9, 0.55};
  const std::vector<double> genuine = {0.2, 0.6, 0.95};
  double a = 0.0;
  for (double v : gen) a += std::log(v);
  double b = 0.0;
  for (double v : genuine) b += std::log(1.0 - v);
  const Variable g = Variable::Constant(NdArray({5, 1}, gen));
  const Variable s = Variable::Constant(NdArray({3, 1}, genuine));
  EXPECT_NEAR(GanLossRs(g, s).value()[0], a / 5.0 + b / 3.0, 1e-12);
  EXPECT_NEAR(GanLossSr(g, s).value()[0], a / 5.0 + b / 3.0, 1e-12);
  double sa = 0.0;
  for (double v : gen) sa += std::log(1.0 - v);
  double sb = 0.0;
  for (double v : genuine) sb += std::log(v);
  EXPECT_NEAR(GanLossRs(g, s, GanConvention::kStandard).value()[0], sa / 5.0 + sb / 3.0,
              1e-12);
}

TEST(GanLossTest, RejectsClosedIntervalEndpoints) {
  const Variable ok = Variable::Constant(NdArray({2, 1}, 0.5));
  EXPECT_THROW(GanLossRs(Variable::Constant(NdArray({2, 1}, 0.0)), ok), ContractError);
  EXPECT_THROW(GanLossSr(ok, Variable::Constant(NdArray({2, 1}, 1.0))), ContractError);
  EXPECT_THROW(ParseGanConvention("wgan"), ContractError);
  EXPECT_EQ(ParseGanConvention(GanConventionName(GanConvention::kStandard)),
            GanConvention::kStandard);
}

TEST(CycleLossTest, IdentityGeneratorsGiveZero) {
  Rng rng(1);
  const Variable real = Variable::Constant(RandomArray({2, 3, 4, 5}, rng));
  const Variable sim = Variable::Constant(RandomArray({2, 3, 4, 5}, rng));
  const ImageMap id = [](const Variable& x) { return x; };
  EXPECT_EQ(CycleLoss(id, id, real, sim).value()[0], 0.0);
}

TEST(CycleLossTest, UnitOffsetExample) {
  // g_r(g_s(-0.5)) = 0.5 = real + 1 while g_s(g_r(0.5)) = 0.5 = sim.
  const Variable real = Variable::Constant(NdArray({1, 3, 2, 2}, -0.5));
  const Variable sim = Variable::Constant(NdArray({1, 3, 2, 2}, 0.5));
  const ImageMap g_s = [](const Variable& x) { return numerics::Abs(x); };
  const ImageMap g_r = [](const Variable& x) { return x; };
  EXPECT_NEAR(CycleLoss(g_s, g_r, real, sim).value()[0], 1.0, 1e-15);
}

TEST(CycleLossTest, SymmetricUnderRoleSwap) {
  Rng rng(2);
  const Variable real = Variable::Constant(RandomArray({2, 3, 4, 4}, rng));
  const Variable sim = Variable::Constant(RandomArray({2, 3, 4, 4}, rng));
  const ImageMap f = [](const Variable& x) { return numerics::Scale(x, 1.5); };
  const ImageMap g = [](const Variable& x) { return numerics::AddScalar(x, 0.25); };
  EXPECT_NEAR(CycleLoss(f, g, real, sim).value()[0], CycleLoss(g, f, sim, real).value()[0],
              1e-14);
}

TEST(GanBundleTest, DiscriminatorsStayInsideUnitInterval) {
  const GanBundle bundle({}, 3);
  Rng rng(3);
  const Variable x = Variable::Constant(RandomArray({3, 3, 8, 16}, rng, -5.0, 5.0));
  for (const NdArray& d : {bundle.DiscriminateSim(x).value(), bundle.DiscriminateReal(x).value()}) {
    EXPECT_EQ(d.shape(), (Shape{3, 1}));
    for (double v : d.data()) {
      EXPECT_GT(v, 0.0);
      EXPECT_LT(v, 1.0);
    }
  }
  EXPECT_EQ(bundle.GenerateReal(x).shape(), x.shape());
}

TEST(GanBundleTest, ShortTrainingStaysFinite) {
  const auto sensor = geometry::SensorConfig::DeskScale();
  const auto sim = simulator::GenerateDataset({}, 4, sensor, 1);
  simulator::NoiseSpec spec;
  spec.uniform_drop = 0.2;
  std::vector<RangeImage> real;
  for (const auto& n : simulator::InjectDropoutAll(sim, spec)) real.push_back(n.image);
  GanTrainConfig cfg;
  cfg.steps = 3;
  const GanTrainResult result = TrainGanBundle(real, sim, {}, cfg);
  ASSERT_EQ(result.log.size(), 3u);
  for (const GanStepLosses& l : result.log) {
    EXPECT_TRUE(std::isfinite(l.gan_rs) && std::isfinite(l.gan_sr) && std::isfinite(l.cyc));
  }
  const RangeImage filled = CompleteImage(
      real[0], {CompletionBackend::kAdversarial, 3}, &result.bundle);
  EXPECT_EQ(geometry::ExtractMask(filled).CountOnes(), filled.pixels());
}

TEST(CompletionTest, HoleBetweenTwoReturnsIsAveraged) {
  RangeImage image(1, 3);
  image.SetPoint(0, 0, {2.0, 4.0, -1.0}, 1);
  image.SetPoint(0, 2, {6.0, -2.0, 3.0}, 1);
  const RangeImage out = CompleteImage(image, {});
  EXPECT_DOUBLE_EQ(out.value(0, 1, 0), 4.0);
  EXPECT_DOUBLE_EQ(out.value(0, 1, 1), 1.0);
  EXPECT_DOUBLE_EQ(out.value(0, 1, 2), 1.0);
  EXPECT_EQ(out.mask(0, 1), 1);
}

TEST(CompletionTest, FullImageIsUnchanged) {
  const RangeImage image = FullImage(4, 7, 4);
  const RangeImage out = CompleteImage(image, {});
  EXPECT_EQ(out.data(), image.data());
  EXPECT_EQ(out.mask(), image.mask());
}

TEST(CompletionTest, CheckerboardOnConstantImage) {
  RangeImage image(6, 8);
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 8; ++c) {
      if ((r + c) % 2 == 0) image.SetPoint(r, c, {3.0, -1.5, 0.25}, 0);
    }
  }
  const RangeImage out = CompleteImage(image, {});
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 8; ++c) {
      EXPECT_DOUBLE_EQ(out.value(r, c, 0), 3.0);
      EXPECT_DOUBLE_EQ(out.value(r, c, 1), -1.5);
      EXPECT_DOUBLE_EQ(out.value(r, c, 2), 0.25);
    }
  }
}

TEST(CompletionTest, IsIdempotentAndFillsEverything) {
  const auto sensor = geometry::SensorConfig::DeskScale();
  const auto clean = simulator::GenerateDataset({}, 2, sensor, 5);
  simulator::NoiseSpec spec;
  spec.uniform_drop = 0.3;
  spec.block_count = 2;
  for (const auto& noisy : simulator::InjectDropoutAll(clean, spec)) {
    const RangeImage once = CompleteImage(noisy.image, {CompletionBackend::kInterp, 5});
    const RangeImage twice = CompleteImage(once, {CompletionBackend::kInterp, 5});
    EXPECT_EQ(geometry::ExtractMask(once).CountOnes(), once.pixels());
    EXPECT_EQ(once.data(), twice.data());
    EXPECT_EQ(once.labels(), noisy.image.labels());
  }
}

TEST(CompletionTest, RejectsEmptyImageAndBadWindow) {
  EXPECT_THROW(CompleteImage(RangeImage(3, 3), {}), ContractError);
  EXPECT_THROW(CompleteImage(FullImage(2, 2, 1), {CompletionBackend::kInterp, 4}),
               ContractError);
  EXPECT_THROW(CompleteImage(FullImage(2, 2, 1), {CompletionBackend::kAdversarial, 3}),
               ContractError);
}

TEST(MaskLossTest, UniformLogitsGiveLnTwo) {
  const Variable logits = Variable::Constant(NdArray({2, 2, 3, 4}, 0.7));
  std::vector<uint8_t> mask(24);
  for (size_t i = 0; i < mask.size(); ++i) mask[i] = i % 3 == 0;
  EXPECT_NEAR(MaskLoss(logits, mask).value()[0], std::log(2.0), 1e-15);
}

TEST(MaskLossTest, ConfidentCorrectLogitsGiveZero) {
  NdArray logits({1, 2, 1, 2});
  const std::vector<uint8_t> mask = {1, 0};
  logits.at({0, kKeptChannel, 0, 0}) = 60.0;
  logits.at({0, kDroppedChannel, 0, 0}) = -60.0;
  logits.at({0, kKeptChannel, 0, 1}) = -60.0;
  logits.at({0, kDroppedChannel, 0, 1}) = 60.0;
  EXPECT_NEAR(MaskLoss(Variable::Constant(logits), mask).value()[0], 0.0, 1e-40);
}

TEST(MaskLossTest, GradientCheck) {
  Rng rng(6);
  std::vector<uint8_t> mask(2 * 3 * 3);
  for (auto& m : mask) m = numerics::UniformUnit(rng) < 0.5;
  const auto result = numerics::GradCheck(
      [&](const std::vector<Variable>& v) { return MaskLoss(v[0], mask); },
      {RandomArray({2, 2, 3, 3}, rng, -2.0, 2.0)});
  EXPECT_LT(result.max_relative_error, 1e-5);
}

TEST(MaskLossTest, RejectsNonBinaryMask) {
  const Variable logits = Variable::Constant(NdArray({1, 2, 1, 2}, 0.0));
  EXPECT_THROW(MaskLoss(logits, {1, 2}), ContractError);
  EXPECT_THROW(MaskLoss(logits, {1}), ContractError);
}

TEST(RendererTest, OutputMatchesInputResolution) {
  RendererConfig cfg;
  cfg.position_rows = 0;
  cfg.position_cols = 0;
  const RendererNet net(cfg, 1);
  Rng rng(7);
  const NdArray y = net.Forward(Variable::Constant(RandomArray({2, 3, 5, 9}, rng))).value();
  EXPECT_EQ(y.shape(), (Shape{2, 2, 5, 9}));
  const RendererNet positional({}, 1);
  EXPECT_THROW(positional.Forward(Variable::Constant(RandomArray({1, 3, 5, 9}, rng))),
               ContractError);
}

TEST(RendererTest, CheckpointRoundTrip) {
  const RendererNet a({}, 1);
  const RendererNet b({}, 2);
  const std::string path =
      (std::filesystem::temp_directory_path() / "epointda_renderer_test.bin").string();
  SaveRenderer(path, a);
  LoadRenderer(path, b);
  const auto pa = a.Parameters();
  const auto pb = b.Parameters();
  ASSERT_EQ(pa.size(), pb.size());
  for (size_t i = 0; i < pa.size(); ++i) {
    const auto va = pa[i].variable.value().data();
    const auto vb = pb[i].variable.value().data();
    for (size_t k = 0; k < va.size(); ++k) {
      EXPECT_EQ(vb[k], static_cast<double>(static_cast<float>(va[k])));
    }
  }
  std::remove(path.c_str());
}

TEST(RenderAdaptedTest, AllKeptIsIdentity) {
  const RangeImage image = FullImage(3, 4, 8);
  const std::vector<double> keep(12, 0.9);
  const RangeImage out = RenderAdapted(image, keep);
  EXPECT_EQ(out.data(), image.data());
  EXPECT_EQ(out.labels(), image.labels());
}

TEST(RenderAdaptedTest, AllDroppedIsZeroImage) {
  const RangeImage image = FullImage(3, 4, 9);
  const std::vector<double> keep(12, 0.1);
  const RangeImage out = RenderAdapted(image, keep);
  for (double v : out.data()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(geometry::ExtractMask(out).CountOnes(), 0);
  EXPECT_EQ(out.labels(), image.labels());
}

TEST(RenderAdaptedTest, SingleDroppedPixel) {
  const RangeImage image = FullImage(3, 4, 10);
  std::vector<double> keep(12, 1.0);
  keep[1 * 4 + 2] = 0.2;
  const RangeImage out = RenderAdapted(image, keep);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) {
      for (int ch = 0; ch < 3; ++ch) {
        const double expected = (r == 1 && c == 2) ? 0.0 : image.value(r, c, ch);
        EXPECT_EQ(out.value(r, c, ch), expected);
      }
    }
  }
  EXPECT_EQ(out.mask(1, 2), 0);
  EXPECT_TRUE(out.MaskConsistent());
}

TEST(RenderAdaptedTest, MaskIsBinarizedOutputAndInputMask) {
  const auto sensor = geometry::SensorConfig::DeskScale();
  const auto clean = simulator::GenerateDataset({}, 2, sensor, 11);
  const RendererNet net({}, 4);
  Rng rng(12);
  for (const RangeImage& image : clean) {
    const RangeImage completed = CompleteImage(image, {});
    const std::vector<double> keep = net.KeepProbability({&completed});
    for (const RangeImage& out :
         {RenderAdapted(image, keep, 0.5), RenderAdaptedSampled(image, keep, rng)}) {
      EXPECT_TRUE(out.MaskConsistent());
      const geometry::DropoutMask m = geometry::ExtractMask(out);
      for (size_t k = 0; k < keep.size(); ++k) {
        EXPECT_LE(m.values[k], image.mask()[k]);
      }
    }
    const geometry::DropoutMask m = geometry::ExtractMask(RenderAdapted(image, keep, 0.5));
    for (size_t k = 0; k < keep.size(); ++k) {
      EXPECT_EQ(m.values[k], (keep[k] >= 0.5 && image.mask()[k]) ? 1 : 0);
    }
  }
}

TEST(RenderAdaptedTest, RejectsSizeMismatch) {
  const RangeImage image = FullImage(2, 2, 1);
  EXPECT_THROW(RenderAdapted(image, std::vector<double>(3, 1.0)), ContractError);
}

std::vector<RangeImage> Completed(const std::vector<RangeImage>& images) {
  std::vector<RangeImage> out;
  for (const RangeImage& image : images) out.push_back(CompleteImage(image, {}));
  return out;
}

TEST(TrainRendererTest, SameSeedGivesIdenticalParameters) {
  const auto sensor = geometry::SensorConfig::DeskScale();
  const auto clean = simulator::GenerateDataset({}, 6, sensor, 13);
  RendererTrainConfig cfg;
  cfg.epochs = 1;
  cfg.batch_size = 2;
  cfg.seed = 5;
  const auto a = TrainRenderer(clean, {}, cfg);
  const auto b = TrainRenderer(clean, {}, cfg);
  const auto pa = a.net.Parameters();
  const auto pb = b.net.Parameters();
  for (size_t i = 0; i < pa.size(); ++i) {
    EXPECT_TRUE(std::ranges::equal(pa[i].variable.value().data(), pb[i].variable.value().data()))
        << pa[i].name;
  }
  EXPECT_EQ(a.epoch_loss, b.epoch_loss);
}

TEST(TrainRendererTest, NoDropoutConvergesToAllKept) {
  const auto sensor = geometry::SensorConfig::DeskScale();
  const auto full = Completed(simulator::GenerateDataset({}, 12, sensor, 14));
  RendererTrainConfig cfg;
  cfg.epochs = 3;
  const auto result = TrainRenderer(full, {}, cfg);
  ASSERT_FALSE(result.aborted) << result.diagnostic;
  EXPECT_LT(result.epoch_loss.back(), 0.05);
  const std::vector<double> keep = result.net.KeepProbability({&full[0]});
  for (double p : keep) EXPECT_GT(p, 0.5);
}

TEST(TrainRendererTest, LearnsFixedBlockDropout) {
  const auto sensor = geometry::SensorConfig::DeskScale();
  const auto clean = simulator::GenerateDataset({}, 80, sensor, 15);
  simulator::NoiseSpec spec;
  spec.block_count = 3;
  spec.block_rows = 3;
  spec.block_cols = 20;
  spec.block_seed = 5;
  const auto noisy = simulator::InjectDropoutAll(clean, spec);
  std::vector<RangeImage> train;
  for (int i = 0; i < 60; ++i) train.push_back(noisy[i].image);
  RendererTrainConfig cfg;
  cfg.epochs = 5;
  cfg.seed = 1;
  const auto result = TrainRenderer(train, {}, cfg);
  ASSERT_FALSE(result.aborted) << result.diagnostic;
  ASSERT_EQ(result.epoch_loss.size(), 5u);
  for (size_t e = 1; e < result.epoch_loss.size(); ++e) {
    EXPECT_LT(result.epoch_loss[e], result.epoch_loss[e - 1]) << "epoch " << e;
  }

  int64_t inter = 0;
  int64_t uni = 0;
  int64_t base_inter = 0;
  int64_t base_uni = 0;
  for (int i = 60; i < 80; ++i) {
    const RangeImage completed = CompleteImage(clean[i], {});
    const RangeImage adapted =
        RenderAdapted(clean[i], result.net.KeepProbability({&completed}));
    const auto pred = geometry::ExtractMask(adapted).values;
    const auto& truth = noisy[i].mask.values;
    const auto& own = clean[i].mask();
    for (size_t k = 0; k < truth.size(); ++k) {
      inter += pred[k] && truth[k];
      uni += pred[k] || truth[k];
      base_inter += own[k] && truth[k];
      base_uni += own[k] || truth[k];
    }
  }
  const double iou = static_cast<double>(inter) / uni;
  const double baseline = static_cast<double>(base_inter) / base_uni;
  EXPECT_GE(iou, 0.9);
  EXPECT_GT(iou, baseline);
}

}  // namespace
}  // namespace noiserender
}  // namespace epointda
