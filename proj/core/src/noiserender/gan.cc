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

#include "epointda/noiserender/gan.h"

#include "epointda/geometry/tensor.h"
#include "epointda/numerics/ops.h"

namespace epointda {
namespace noiserender {
namespace {

using numerics::Conv2dLayer;
using numerics::Rng;

void CheckOpenUnit(const Variable& v, const char* what) {
  for (const double x : v.value().data()) {
    if (!(x > 0.0 && x < 1.0)) {
      throw ContractError(std::string(what) +
                          ": discriminator outputs must lie strictly in (0, 1)");
    }
  }
}

// E[log a] + E[log(1 - b)].
Variable LogPair(const Variable& a, const Variable& b) {
  return numerics::Add(numerics::Mean(numerics::Log(a)),
                       numerics::Mean(numerics::Log(
                           numerics::AddScalar(numerics::Scale(b, -1.0), 1.0))));
}

Variable AdversarialValue(const Variable& d_on_generated, const Variable& d_on_genuine,
                          GanConvention convention, const char* what) {
  CheckOpenUnit(d_on_generated, what);
  CheckOpenUnit(d_on_genuine, what);
  return convention == GanConvention::kSwapped
             ? LogPair(d_on_generated, d_on_genuine)
             : LogPair(d_on_genuine, d_on_generated);
}

}  // namespace

const char* GanConventionName(GanConvention c) {
  return c == GanConvention::kSwapped ? "swapped" : "standard";
}

GanConvention ParseGanConvention(const std::string& name) {
  if (name == "swapped") return GanConvention::kSwapped;
  if (name == "standard") return GanConvention::kStandard;
  throw ContractError("unknown GAN convention '" + name + "'");
}

Variable GanLossRs(const Variable& d_on_generated, const Variable& d_on_sim,
                   GanConvention convention) {
  return AdversarialValue(d_on_generated, d_on_sim, convention, "gan_loss_rs");
}

Variable GanLossSr(const Variable& d_on_generated, const Variable& d_on_real,
                   GanConvention convention) {
  return AdversarialValue(d_on_generated, d_on_real, convention, "gan_loss_sr");
}

Variable CycleLoss(const ImageMap& g_s, const ImageMap& g_r, const Variable& real,
                   const Variable& sim) {
  if (real.shape() != sim.shape()) {
    throw ContractError("cycle_loss: real and sim batches differ in shape");
  }
  const Variable real_cycle = numerics::Sub(g_r(g_s(real)), real);
  const Variable sim_cycle = numerics::Sub(g_s(g_r(sim)), sim);
  return numerics::Add(numerics::Mean(numerics::Abs(real_cycle)),
                       numerics::Mean(numerics::Abs(sim_cycle)));
}

GanBundle::GanBundle(const GanBundleConfig& config, uint64_t seed) : config_(config) {
  Rng rng(seed);
  const int g = config.generator_width;
  const int d = config.discriminator_width;
  for (Generator* gen : {&gs_, &gr_}) {
    gen->c1 = Conv2dLayer(3, g, 3, {1, 1}, rng);
    gen->c2 = Conv2dLayer(g, g, 3, {1, 1}, rng);
    gen->c3 = Conv2dLayer(g, 3, 3, {1, 1}, rng);
  }
  for (Discriminator* disc : {&ds_, &dr_}) {
    disc->c1 = Conv2dLayer(3, d, 3, {2, 1}, rng);
    disc->c2 = Conv2dLayer(d, d, 3, {2, 1}, rng);
    disc->head = Conv2dLayer(d, 1, 1, {1, 0}, rng);
  }
}

Variable GanBundle::RunGenerator(const Generator& g, const Variable& x) {
  const Variable h = numerics::Relu(g.c1.Forward(x));
  return g.c3.Forward(numerics::Relu(g.c2.Forward(h)));
}

Variable GanBundle::RunDiscriminator(const Discriminator& d, const Variable& x) {
  const Variable h = numerics::Relu(d.c2.Forward(numerics::Relu(d.c1.Forward(x))));
  return numerics::Sigmoid(numerics::GlobalMeanPool(d.head.Forward(h)));
}

Variable GanBundle::GenerateSim(const Variable& real, const NdArray& mask) const {
  NdArray holes(mask.shape());
  auto dst = holes.mutable_data();
  const auto src = mask.data();
  for (size_t i = 0; i < dst.size(); ++i) dst[i] = 1.0 - src[i];
  return numerics::Add(real, numerics::MulChannelBroadcast(
                                 RunGenerator(gs_, real), Variable::Constant(holes)));
}

Variable GanBundle::GenerateReal(const Variable& sim) const {
  return numerics::Add(sim, RunGenerator(gr_, sim));
}

Variable GanBundle::DiscriminateSim(const Variable& x) const {
  return RunDiscriminator(ds_, x);
}

Variable GanBundle::DiscriminateReal(const Variable& x) const {
  return RunDiscriminator(dr_, x);
}

numerics::ParameterList GanBundle::GeneratorParameters() const {
  numerics::ParameterList out;
  for (const auto& [name, gen] : {std::pair{"g_s", &gs_}, std::pair{"g_r", &gr_}}) {
    gen->c1.Collect(std::string(name) + ".c1", &out);
    gen->c2.Collect(std::string(name) + ".c2", &out);
    gen->c3.Collect(std::string(name) + ".c3", &out);
  }
  return out;
}

numerics::ParameterList GanBundle::DiscriminatorParameters() const {
  numerics::ParameterList out;
  for (const auto& [name, disc] : {std::pair{"d_s", &ds_}, std::pair{"d_r", &dr_}}) {
    disc->c1.Collect(std::string(name) + ".c1", &out);
    disc->c2.Collect(std::string(name) + ".c2", &out);
    disc->head.Collect(std::string(name) + ".head", &out);
  }
  return out;
}

GanStepLosses GanTrainStep(GanBundle& bundle, numerics::SgdOptimizer& gen_opt,
                           numerics::SgdOptimizer& disc_opt,
                           const std::vector<const geometry::RangeImage*>& real,
                           const std::vector<const geometry::RangeImage*>& sim,
                           const GanTrainConfig& config) {
  const double scale = bundle.config().input_scale;
  const Variable x_r = Variable::Constant(geometry::ImagesToTensor(real, scale));
  const Variable x_s = Variable::Constant(geometry::ImagesToTensor(sim, scale));
  const NdArray m_r = geometry::MasksToTensor(real);
  // Swapped discriminators minimize the adversarial value; standard ones
  // maximize it.
  const double d_sign = config.convention == GanConvention::kSwapped ? 1.0 : -1.0;

  GanStepLosses losses;
  {
    const Variable fake_s = bundle.GenerateSim(x_r, m_r).Detach();
    const Variable fake_r = bundle.GenerateReal(x_s).Detach();
    const Variable rs = GanLossRs(bundle.DiscriminateSim(fake_s),
                                  bundle.DiscriminateSim(x_s), config.convention);
    const Variable sr = GanLossSr(bundle.DiscriminateReal(fake_r),
                                  bundle.DiscriminateReal(x_r), config.convention);
    losses.gan_rs = rs.value()[0];
    losses.gan_sr = sr.value()[0];
    const Variable d_loss = numerics::Scale(
        numerics::Add(numerics::Scale(rs, config.lambda_gan_rs),
                      numerics::Scale(sr, config.lambda_gan_sr)),
        d_sign);
    disc_opt.ZeroGrad();
    d_loss.Backward();
    const auto outcome = disc_opt.Step();
    if (!outcome.applied) throw TrainingError("discriminator step: " + outcome.diagnostic);
  }
  {
    const Variable fake_s = bundle.GenerateSim(x_r, m_r);
    const Variable fake_r = bundle.GenerateReal(x_s);
    const Variable rs = GanLossRs(bundle.DiscriminateSim(fake_s),
                                  bundle.DiscriminateSim(x_s), config.convention);
    const Variable sr = GanLossSr(bundle.DiscriminateReal(fake_r),
                                  bundle.DiscriminateReal(x_r), config.convention);
    const ImageMap g_s = [&](const Variable& v) { return bundle.GenerateSim(v, m_r); };
    const ImageMap g_r = [&](const Variable& v) { return bundle.GenerateReal(v); };
    const Variable cyc = CycleLoss(g_s, g_r, x_r, x_s);
    losses.cyc = cyc.value()[0];
    const Variable g_loss = numerics::Add(
        numerics::Scale(numerics::Add(numerics::Scale(rs, config.lambda_gan_rs),
                                      numerics::Scale(sr, config.lambda_gan_sr)),
                        -d_sign),
        numerics::Scale(cyc, config.lambda_cyc));
    gen_opt.ZeroGrad();
    disc_opt.ZeroGrad();
    g_loss.Backward();
    disc_opt.ZeroGrad();  // generator step only
    const auto outcome = gen_opt.Step();
    if (!outcome.applied) throw TrainingError("generator step: " + outcome.diagnostic);
  }
  return losses;
}

GanTrainResult TrainGanBundle(const std::vector<geometry::RangeImage>& real,
                              const std::vector<geometry::RangeImage>& sim,
                              const GanBundleConfig& bundle_config,
                              const GanTrainConfig& config) {
  if (real.empty() || sim.empty()) {
    throw ContractError("TrainGanBundle: both domains need images");
  }
  GanTrainResult result{GanBundle(bundle_config, numerics::DeriveSeed(config.seed, {1})),
                        {}};
  numerics::SgdOptimizer gen_opt(numerics::Trainable(result.bundle.GeneratorParameters()),
                                 config.sgd);
  numerics::SgdOptimizer disc_opt(
      numerics::Trainable(result.bundle.DiscriminatorParameters()), config.sgd);
  Rng rng(numerics::DeriveSeed(config.seed, {2}));
  for (int step = 0; step < config.steps; ++step) {
    std::vector<const geometry::RangeImage*> real_batch, sim_batch;
    for (int b = 0; b < config.batch_size; ++b) {
      real_batch.push_back(&real[numerics::UniformIndex(rng, real.size())]);
      sim_batch.push_back(&sim[numerics::UniformIndex(rng, sim.size())]);
    }
    result.log.push_back(
        GanTrainStep(result.bundle, gen_opt, disc_opt, real_batch, sim_batch, config));
  }
  return result;
}

}  // namespace noiserender
}  // namespace epointda
