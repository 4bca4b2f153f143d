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

#include "epointda/segmodel/train.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "epointda/geometry/tensor.h"
#include "epointda/numerics/ops.h"
#include "epointda/numerics/rng.h"
#include "epointda/text_format.h"

namespace epointda {
namespace segmodel {
namespace {

using geometry::RangeImage;
using numerics::Rng;

constexpr char kLogHeader[] = "step,loss_total,loss_seg,loss_homm,loss_mask,lr";

// Seed streams of one training run.
enum Stream : uint64_t {
  kSegInit = 10,
  kRendererInit = 11,
  kGanInit = 12,
  kSourceOrder = 20,
  kTargetOrder = 21,
  kRenderNoise = 22,
  kRendererOrder = 23,
  kHommSamples = 30,
};

// Endless shuffled pass over [0, n), reshuffled after each sweep.
class Cycler {
 public:
  Cycler(size_t n, uint64_t seed) : order_(n), rng_(seed) { Reshuffle(); }

  std::vector<size_t> Next(size_t count) {
    std::vector<size_t> out;
    for (size_t i = 0; i < count; ++i) {
      if (cursor_ == order_.size()) Reshuffle();
      out.push_back(order_[cursor_++]);
    }
    return out;
  }

 private:
  void Reshuffle() {
    std::iota(order_.begin(), order_.end(), size_t{0});
    std::shuffle(order_.begin(), order_.end(), rng_);
    cursor_ = 0;
  }

  std::vector<size_t> order_;
  Rng rng_;
  size_t cursor_ = 0;
};

std::vector<std::vector<size_t>> EpochBatches(size_t n, int batch_size, Rng& rng) {
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<size_t>> batches;
  for (size_t start = 0; start < n; start += batch_size) {
    batches.emplace_back(order.begin() + start,
                         order.begin() + std::min(n, start + batch_size));
  }
  return batches;
}

std::vector<NdArray> Snapshot(const numerics::ParameterList& params) {
  std::vector<NdArray> out;
  for (const auto& p : params) out.push_back(p.variable.value());
  return out;
}

bool SameValues(const numerics::ParameterList& params, const std::vector<NdArray>& snapshot) {
  for (size_t i = 0; i < params.size(); ++i) {
    if (!std::ranges::equal(params[i].variable.value().data(), snapshot[i].data())) {
      return false;
    }
  }
  return true;
}

void CheckDatasets(const std::vector<RangeImage>& images, const char* what) {
  if (images.empty()) throw ContractError(std::string("adapt_train: ") + what + " is empty");
}

}  // namespace

const char* RenderModeName(RenderMode mode) {
  return mode == RenderMode::kSampled ? "sampled" : "threshold";
}

RenderMode ParseRenderMode(const std::string& name) {
  if (name == "sampled") return RenderMode::kSampled;
  if (name == "threshold") return RenderMode::kThreshold;
  throw ContractError("unknown render mode '" + name + "'");
}

void AdaptConfig::Validate() const {
  net.Validate();
  weights.Validate();
  homm.Validate();
  completion.Validate();
  if (use_sdnr) renderer.Validate();
  if (epochs < 0) throw ContractError("AdaptConfig: epochs must be >= 0");
  if (batch_size < 1 || renderer_batch_size < 1) {
    throw ContractError("AdaptConfig: batch sizes must be positive");
  }
  if (!(render_threshold >= 0.0 && render_threshold <= 1.0)) {
    throw ContractError("AdaptConfig: render threshold must be in [0, 1]");
  }
}

TrainState AdaptTrain(const std::vector<RangeImage>& source,
                      const std::vector<RangeImage>& target, const AdaptConfig& config,
                      const noiserender::RendererNet* pretrained) {
  config.Validate();
  CheckDatasets(source, "source data");
  CheckDatasets(target, "target data");
  const uint64_t seed = config.seed;
  const bool adversarial = config.completion.backend == noiserender::CompletionBackend::kAdversarial;
  const bool use_homm = config.weights.homm > 0.0;

  TrainState state;
  state.seed = seed;
  state.net = SegNet(config.net, numerics::DeriveSeed(seed, {kSegInit}));
  state.has_renderer = config.use_sdnr;
  if (state.has_renderer) {
    state.renderer = noiserender::RendererNet(config.renderer,
                                              numerics::DeriveSeed(seed, {kRendererInit}));
    if (pretrained != nullptr) {
      const auto src = pretrained->Parameters();
      const auto dst = state.renderer.Parameters();
      if (src.size() != dst.size()) {
        throw ContractError("adapt_train: pretrained renderer has a different layout");
      }
      for (size_t i = 0; i < src.size(); ++i) {
        if (src[i].variable.shape() != dst[i].variable.shape()) {
          throw ContractError("adapt_train: pretrained renderer shape mismatch at " +
                              src[i].name);
        }
        Variable v = dst[i].variable;
        v.SetValue(src[i].variable.value());
      }
    }
  }
  state.has_gan = config.use_sdnr && adversarial;
  if (state.has_gan) {
    state.gan = noiserender::GanBundle(config.gan, numerics::DeriveSeed(seed, {kGanInit}));
  }

  const numerics::ParameterList seg_params = state.net.Parameters();
  numerics::SgdOptimizer seg_opt(numerics::Trainable(seg_params), config.sgd);
  numerics::ParameterList renderer_params;
  if (state.has_renderer) renderer_params = state.renderer.Parameters();
  numerics::SgdOptimizer renderer_opt(numerics::Trainable(renderer_params),
                                      config.renderer_sgd);
  std::unique_ptr<numerics::SgdOptimizer> gen_opt;
  std::unique_ptr<numerics::SgdOptimizer> disc_opt;
  if (state.has_gan) {
    gen_opt = std::make_unique<numerics::SgdOptimizer>(
        numerics::Trainable(state.gan.GeneratorParameters()), config.gan_train.sgd);
    disc_opt = std::make_unique<numerics::SgdOptimizer>(
        numerics::Trainable(state.gan.DiscriminatorParameters()), config.gan_train.sgd);
  }

  // Renderer inputs: completed images. With the interpolation backend they
  // never change and are computed once.
  std::vector<noiserender::RendererPair> target_pairs;
  std::vector<RangeImage> source_completed;
  if (state.has_renderer && !adversarial) {
    target_pairs = noiserender::MakeRendererPairs(target, config.completion);
    for (const RangeImage& image : source) {
      source_completed.push_back(noiserender::CompleteImage(image, config.completion));
    }
  }
  // A frozen renderer on fixed inputs yields fixed keep probabilities.
  std::vector<std::vector<double>> keep_cache;
  if (state.has_renderer && !adversarial && config.freeze_renderer) {
    constexpr size_t kChunk = 20;
    for (size_t start = 0; start < source.size(); start += kChunk) {
      std::vector<const RangeImage*> chunk;
      for (size_t i = start; i < std::min(source.size(), start + kChunk); ++i) {
        chunk.push_back(&source_completed[i]);
      }
      const std::vector<double> keep = state.renderer.KeepProbability(chunk);
      const size_t plane = static_cast<size_t>(source[start].pixels());
      for (size_t k = 0; k < chunk.size(); ++k) {
        keep_cache.emplace_back(keep.begin() + k * plane, keep.begin() + (k + 1) * plane);
      }
    }
  }

  Rng source_rng(numerics::DeriveSeed(seed, {kSourceOrder}));
  Cycler target_cycler(target.size(), numerics::DeriveSeed(seed, {kTargetOrder}));
  Cycler renderer_cycler(target.size(), numerics::DeriveSeed(seed, {kRendererOrder}));
  Rng render_rng(numerics::DeriveSeed(seed, {kRenderNoise}));

  const auto abort = [&state](const std::string& why) {
    state.aborted = true;
    state.diagnostic = "step " + std::to_string(state.step) + ": " + why;
  };

  for (int epoch = 0; epoch < config.epochs && !state.aborted; ++epoch) {
    for (const std::vector<size_t>& batch :
         EpochBatches(source.size(), config.batch_size, source_rng)) {
      LossComponents components;

      // (a) adversarial completion update.
      if (state.has_gan) {
        std::vector<const RangeImage*> real;
        std::vector<const RangeImage*> sim;
        for (size_t i : target_cycler.Next(config.gan_train.batch_size)) real.push_back(&target[i]);
        for (size_t i = 0; i < std::min<size_t>(batch.size(), config.gan_train.batch_size); ++i) {
          sim.push_back(&source[batch[i]]);
        }
        const noiserender::GanStepLosses gl =
            noiserender::GanTrainStep(state.gan, *gen_opt, *disc_opt, real, sim, config.gan_train);
        components.gan_rs = gl.gan_rs;
        components.gan_sr = gl.gan_sr;
        components.cyc = gl.cyc;
      }

      // (b) renderer update; the segmentation network must not move.
      if (state.has_renderer && !config.freeze_renderer) {
        const std::vector<size_t> picks = renderer_cycler.Next(config.renderer_batch_size);
        std::vector<noiserender::RendererPair> fresh;
        std::vector<const noiserender::RendererPair*> pairs;
        if (adversarial) {
          std::vector<RangeImage> chosen;
          for (size_t i : picks) chosen.push_back(target[i]);
          fresh = noiserender::MakeRendererPairs(chosen, config.completion, &state.gan);
          for (const auto& p : fresh) pairs.push_back(&p);
        } else {
          for (size_t i : picks) pairs.push_back(&target_pairs[i]);
        }
        std::vector<NdArray> before;
        if (config.check_truncation) before = Snapshot(seg_params);
        components.mask = noiserender::RendererTrainStep(state.renderer, renderer_opt, pairs);
        if (config.check_truncation) {
          ++state.truncation_checks;
          if (!SameValues(seg_params, before)) ++state.truncation_violations;
        }
        if (!std::isfinite(components.mask)) {
          abort("non-finite renderer loss or gradient");
          break;
        }
      }

      // (c) segmentation update on rendered source images.
      std::vector<RangeImage> adapted;
      std::vector<const RangeImage*> inputs;
      std::vector<const RangeImage*> label_source;
      for (size_t i : batch) label_source.push_back(&source[i]);
      if (state.has_renderer) {
        std::vector<RangeImage> completed_now;
        std::vector<const RangeImage*> completed;
        for (size_t i : batch) {
          if (adversarial) {
            completed_now.push_back(
                noiserender::CompleteImage(source[i], config.completion, &state.gan));
          }
        }
        for (size_t k = 0; k < batch.size(); ++k) {
          completed.push_back(adversarial ? &completed_now[k] : &source_completed[batch[k]]);
        }
        const size_t plane = static_cast<size_t>(source[batch[0]].pixels());
        const std::vector<double> keep =
            keep_cache.empty() ? state.renderer.KeepProbability(completed) : std::vector<double>();
        for (size_t k = 0; k < batch.size(); ++k) {
          const std::span<const double> p =
              keep_cache.empty() ? std::span<const double>(keep.data() + k * plane, plane)
                                 : std::span<const double>(keep_cache[batch[k]]);
          adapted.push_back(config.render_mode == RenderMode::kSampled
                                ? noiserender::RenderAdaptedSampled(source[batch[k]], p, render_rng)
                                : noiserender::RenderAdapted(source[batch[k]], p,
                                                             config.render_threshold));
        }
        for (const RangeImage& image : adapted) inputs.push_back(&image);
      } else {
        inputs = label_source;
      }

      std::vector<NdArray> before;
      if (config.check_truncation && state.has_renderer) before = Snapshot(renderer_params);
      const double scale = config.net.input_scale;
      const Variable x = Variable::Constant(geometry::ImagesToTensor(inputs, scale));
      const SegOutput out = state.net.Forward(x, true, true);
      const Variable seg =
          FocalLoss(out.logits, geometry::StackLabels(label_source), config.net.focal_gamma);
      Variable loss = numerics::Scale(seg, config.weights.seg);
      components.seg = seg.value()[0];
      if (use_homm) {
        std::vector<const RangeImage*> tgt;
        for (size_t i : target_cycler.Next(batch.size())) tgt.push_back(&target[i]);
        const Variable xt = Variable::Constant(geometry::ImagesToTensor(tgt, scale));
        const Variable ft = state.net.Features(xt, true, false);
        align::HommConfig homm = config.homm;
        homm.seed = numerics::DeriveSeed(seed, {kHommSamples, static_cast<uint64_t>(state.step)});
        const Variable h = align::HommLoss(out.features, ft, homm);
        components.homm = h.value()[0];
        loss = numerics::Add(loss, numerics::Scale(h, config.weights.homm));
      }
      if (!std::isfinite(loss.value()[0])) {
        abort("non-finite segmentation objective");
        break;
      }
      const double lr = seg_opt.state().LearningRate();
      seg_opt.ZeroGrad();
      loss.Backward();
      const numerics::StepOutcome outcome = seg_opt.Step();
      if (!outcome.applied) {
        abort(outcome.diagnostic);
        break;
      }
      if (config.check_truncation && state.has_renderer) {
        ++state.truncation_checks;
        if (!SameValues(renderer_params, before)) ++state.truncation_violations;
      }

      LossLogRow row;
      row.step = state.step;
      row.loss_total = TotalObjective(components, config.weights);
      row.loss_seg = components.seg;
      row.loss_homm = components.homm;
      row.loss_mask = components.mask;
      row.lr = lr;
      state.log.push_back(row);
      state.components.push_back(components);
      ++state.step;
    }
  }
  state.seg_optimizer = seg_opt.state();
  state.renderer_optimizer = renderer_opt.state();
  return state;
}

TrainState TrainSupervised(const std::vector<RangeImage>& source, const SegNetConfig& net,
                           int epochs, int batch_size, const numerics::SgdConfig& sgd,
                           uint64_t seed) {
  CheckDatasets(source, "source data");
  if (epochs < 0 || batch_size < 1) {
    throw ContractError("train_supervised: invalid epochs or batch size");
  }
  TrainState state;
  state.seed = seed;
  state.net = SegNet(net, numerics::DeriveSeed(seed, {kSegInit}));
  numerics::SgdOptimizer opt(numerics::Trainable(state.net.Parameters()), sgd);
  Rng rng(numerics::DeriveSeed(seed, {kSourceOrder}));
  for (int epoch = 0; epoch < epochs && !state.aborted; ++epoch) {
    for (const std::vector<size_t>& batch : EpochBatches(source.size(), batch_size, rng)) {
      std::vector<const RangeImage*> images;
      for (size_t i : batch) images.push_back(&source[i]);
      const Variable x = Variable::Constant(geometry::ImagesToTensor(images, net.input_scale));
      const Variable loss = FocalLoss(state.net.Forward(x, true, true).logits,
                                      geometry::StackLabels(images), net.focal_gamma);
      const double value = loss.value()[0];
      if (!std::isfinite(value)) {
        state.aborted = true;
        state.diagnostic = "step " + std::to_string(state.step) + ": non-finite loss";
        break;
      }
      const double lr = opt.state().LearningRate();
      opt.ZeroGrad();
      loss.Backward();
      const numerics::StepOutcome outcome = opt.Step();
      if (!outcome.applied) {
        state.aborted = true;
        state.diagnostic = "step " + std::to_string(state.step) + ": " + outcome.diagnostic;
        break;
      }
      LossComponents components;
      components.seg = value;
      state.log.push_back({state.step, value, value, 0.0, 0.0, lr});
      state.components.push_back(components);
      ++state.step;
    }
  }
  state.seg_optimizer = opt.state();
  return state;
}

void WriteLossLog(const std::string& path, const std::vector<LossLogRow>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << kLogHeader << '\n';
  for (const LossLogRow& r : rows) {
    out << r.step << ',' << FormatDouble(r.loss_total) << ',' << FormatDouble(r.loss_seg) << ','
        << FormatDouble(r.loss_homm) << ',' << FormatDouble(r.loss_mask) << ','
        << FormatDouble(r.lr) << '\n';
  }
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<LossLogRow> ReadLossLog(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line != kLogHeader) {
    throw ContractError("'" + path + "': unexpected loss log header");
  }
  std::vector<LossLogRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = SplitString(line, ',');
    if (f.size() != 6) throw ContractError("'" + path + "': malformed row '" + line + "'");
    rows.push_back({ParseInt(f[0], "step"), ParseDouble(f[1], "loss_total"),
                    ParseDouble(f[2], "loss_seg"), ParseDouble(f[3], "loss_homm"),
                    ParseDouble(f[4], "loss_mask"), ParseDouble(f[5], "lr")});
  }
  return rows;
}

}  // namespace segmodel
}  // namespace epointda
