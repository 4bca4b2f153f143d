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

#include "epointda/evalcli/experiment.h"

#include <chrono>
#include <map>

#include "epointda/geometry/projection.h"
#include "epointda/noiserender/completion.h"
#include "epointda/errors.h"
#include "epointda/numerics/rng.h"

namespace epointda {
namespace evalcli {

using geometry::RangeImage;

std::string ModuleToggles::Name() const {
  std::string name;
  if (sdnr) name += "+SDNR";
  if (in) name += "+IN";
  if (homm) name += "+HoMM";
  if (asac) name += "+ASAC";
  if (hhead) name += "+HHead";
  return name.empty() ? "Baseline" : name;
}

simulator::NoiseSpec ExperimentConfig::DefaultNoise() {
  simulator::NoiseSpec spec;
  spec.uniform_drop = 0.15;
  spec.range_coeff = 0.5;
  spec.block_count = 6;
  spec.block_rows = 3;
  spec.block_cols = 20;
  spec.block_seed = 5;
  spec.seed = 9;
  return spec;
}

simulator::SceneSamplerConfig ExperimentConfig::DefaultScenes() {
  simulator::SceneSamplerConfig scenes;
  scenes.sensor_height_jitter = 0.5;
  return scenes;
}

segmodel::AdaptConfig ExperimentConfig::DefaultTraining() {
  segmodel::AdaptConfig train;
  train.net.widths = {8, 16, 32};
  train.epochs = 4;
  train.batch_size = 8;
  return train;
}

segmodel::AdaptConfig ExperimentConfig::Resolve() const {
  segmodel::AdaptConfig out = train;
  out.seed = seed;
  out.use_sdnr = modules.sdnr;
  out.freeze_renderer = modules.sdnr && freeze_pretrained_renderer;
  out.net.norm = modules.in ? numerics::NormMode::kInstance : numerics::NormMode::kBatch;
  if (norm_override) out.net.norm = *norm_override;
  if (!modules.homm) out.weights.homm = 0.0;
  out.net.use_asac = modules.asac;
  out.net.num_head_convs = modules.hhead ? 2 : 1;
  if (head_convs_override) out.net.num_head_convs = *head_convs_override;
  out.renderer.position_rows = sensor.rows;
  out.renderer.position_cols = sensor.cols;
  return out;
}

namespace {

std::string JoinInts(const auto& values) {
  std::string out;
  for (const int v : values) out += (out.empty() ? "" : "/") + std::to_string(v);
  return out;
}

std::vector<int> SplitInts(const std::string& text, const std::string& what) {
  std::vector<int> out;
  for (const std::string& part : SplitString(text, '/')) {
    out.push_back(static_cast<int>(ParseInt(part, what)));
  }
  return out;
}

const char* Bool(bool v) { return v ? "true" : "false"; }

}  // namespace

KeyValues ExperimentConfig::Fields() const {
  KeyValues f;
  const auto add = [&f](const std::string& k, const std::string& v) { f.emplace_back(k, v); };
  add("seed", std::to_string(seed));
  add("data_seed", std::to_string(data_seed));
  add("sensor.rows", std::to_string(sensor.rows));
  add("sensor.cols", std::to_string(sensor.cols));
  add("source_count", std::to_string(source_count));
  add("target_count", std::to_string(target_count));
  add("test_count", std::to_string(test_count));
  add("source.sensor_height", FormatDouble(source_scenes.sensor_height));
  add("source.sensor_height_jitter", FormatDouble(source_scenes.sensor_height_jitter));
  add("target.sensor_height", FormatDouble(target_scenes.sensor_height));
  add("target.sensor_height_jitter", FormatDouble(target_scenes.sensor_height_jitter));
  for (const auto& [k, v] : simulator::NoiseSpecFields(noise)) add(k, v);
  add("modules.sdnr", Bool(modules.sdnr));
  add("modules.in", Bool(modules.in));
  add("modules.homm", Bool(modules.homm));
  add("modules.asac", Bool(modules.asac));
  add("modules.hhead", Bool(modules.hhead));
  add("norm_override", norm_override ? numerics::NormModeName(*norm_override) : "none");
  add("head_convs_override",
      head_convs_override ? std::to_string(*head_convs_override) : "none");
  add("net.widths", JoinInts(train.net.widths));
  add("net.norm_groups", std::to_string(train.net.norm_groups));
  add("net.focal_gamma", FormatDouble(train.net.focal_gamma));
  add("net.input_scale", FormatDouble(train.net.input_scale));
  add("weights.gan_rs", FormatDouble(train.weights.gan_rs));
  add("weights.gan_sr", FormatDouble(train.weights.gan_sr));
  add("weights.cyc", FormatDouble(train.weights.cyc));
  add("weights.mask", FormatDouble(train.weights.mask));
  add("weights.homm", FormatDouble(train.weights.homm));
  add("weights.seg", FormatDouble(train.weights.seg));
  add("homm.order", std::to_string(train.homm.order));
  add("homm.samples", std::to_string(train.homm.samples));
  add("homm.mode", align::HommModeName(train.homm.mode));
  add("render_mode", segmodel::RenderModeName(train.render_mode));
  add("render_threshold", FormatDouble(train.render_threshold));
  add("completion", noiserender::CompletionBackendName(train.completion.backend));
  add("completion.window", std::to_string(train.completion.window));
  add("renderer.widths", JoinInts(train.renderer.widths));
  add("renderer.sgd.base_lr", FormatDouble(train.renderer_sgd.base_lr));
  add("renderer.sgd.momentum", FormatDouble(train.renderer_sgd.momentum));
  add("renderer.batch_size", std::to_string(train.renderer_batch_size));
  add("renderer.pretrain_epochs", std::to_string(renderer_pretrain_epochs));
  add("renderer.pretrain_count", std::to_string(renderer_pretrain_count));
  add("renderer.freeze_pretrained", Bool(freeze_pretrained_renderer));
  add("epochs", std::to_string(train.epochs));
  add("batch_size", std::to_string(train.batch_size));
  add("sgd.base_lr", FormatDouble(train.sgd.base_lr));
  add("sgd.momentum", FormatDouble(train.sgd.momentum));
  add("sgd.decay_factor", FormatDouble(train.sgd.decay_factor));
  add("sgd.decay_every", std::to_string(train.sgd.decay_every));
  const segmodel::AdaptConfig r = Resolve();
  add("resolved.modules", modules.Name());
  add("resolved.net.norm", numerics::NormModeName(r.net.norm));
  add("resolved.net.use_asac", Bool(r.net.use_asac));
  add("resolved.net.num_head_convs", std::to_string(r.net.num_head_convs));
  add("resolved.weights.homm", FormatDouble(r.weights.homm));
  add("resolved.renderer.frozen", Bool(r.freeze_renderer));
  return f;
}

ExperimentConfig ExperimentConfig::FromFields(const KeyValues& fields) {
  ExperimentConfig c;
  std::map<std::string, std::string> noise_fields;
  for (const auto& [key, value] : fields) {
    const auto integer = [&] { return static_cast<int>(ParseInt(value, key)); };
    const auto real = [&] { return ParseDouble(value, key); };
    const auto flag = [&] { return ParseBool(value, key); };
    if (key.starts_with("noise.")) {
      noise_fields[key] = value;
    } else if (key == "seed") {
      c.seed = ParseUint(value, key);
    } else if (key == "data_seed") {
      c.data_seed = ParseUint(value, key);
    } else if (key == "sensor.rows") {
      c.sensor.rows = integer();
    } else if (key == "sensor.cols") {
      c.sensor.cols = integer();
    } else if (key == "source_count") {
      c.source_count = integer();
    } else if (key == "target_count") {
      c.target_count = integer();
    } else if (key == "test_count") {
      c.test_count = integer();
    } else if (key == "source.sensor_height") {
      c.source_scenes.sensor_height = real();
    } else if (key == "source.sensor_height_jitter") {
      c.source_scenes.sensor_height_jitter = real();
    } else if (key == "target.sensor_height") {
      c.target_scenes.sensor_height = real();
    } else if (key == "target.sensor_height_jitter") {
      c.target_scenes.sensor_height_jitter = real();
    } else if (key == "modules.sdnr") {
      c.modules.sdnr = flag();
    } else if (key == "modules.in") {
      c.modules.in = flag();
    } else if (key == "modules.homm") {
      c.modules.homm = flag();
    } else if (key == "modules.asac") {
      c.modules.asac = flag();
    } else if (key == "modules.hhead") {
      c.modules.hhead = flag();
    } else if (key == "norm_override") {
      c.norm_override.reset();
      if (value != "none") c.norm_override = numerics::ParseNormMode(value);
    } else if (key == "head_convs_override") {
      c.head_convs_override.reset();
      if (value != "none") c.head_convs_override = integer();
    } else if (key == "net.widths") {
      const std::vector<int> w = SplitInts(value, key);
      if (w.size() != 3) throw ContractError("net.widths needs three entries");
      c.train.net.widths = {w[0], w[1], w[2]};
    } else if (key == "net.norm_groups") {
      c.train.net.norm_groups = integer();
    } else if (key == "net.focal_gamma") {
      c.train.net.focal_gamma = real();
    } else if (key == "net.input_scale") {
      c.train.net.input_scale = real();
    } else if (key == "weights.gan_rs") {
      c.train.weights.gan_rs = real();
    } else if (key == "weights.gan_sr") {
      c.train.weights.gan_sr = real();
    } else if (key == "weights.cyc") {
      c.train.weights.cyc = real();
    } else if (key == "weights.mask") {
      c.train.weights.mask = real();
    } else if (key == "weights.homm") {
      c.train.weights.homm = real();
    } else if (key == "weights.seg") {
      c.train.weights.seg = real();
    } else if (key == "homm.order") {
      c.train.homm.order = integer();
    } else if (key == "homm.samples") {
      c.train.homm.samples = integer();
    } else if (key == "homm.mode") {
      c.train.homm.mode = align::ParseHommMode(value);
    } else if (key == "render_mode") {
      c.train.render_mode = segmodel::ParseRenderMode(value);
    } else if (key == "render_threshold") {
      c.train.render_threshold = real();
    } else if (key == "completion") {
      c.train.completion.backend = noiserender::ParseCompletionBackend(value);
    } else if (key == "completion.window") {
      c.train.completion.window = integer();
    } else if (key == "renderer.widths") {
      c.train.renderer.widths = SplitInts(value, key);
    } else if (key == "renderer.sgd.base_lr") {
      c.train.renderer_sgd.base_lr = real();
    } else if (key == "renderer.sgd.momentum") {
      c.train.renderer_sgd.momentum = real();
    } else if (key == "renderer.batch_size") {
      c.train.renderer_batch_size = integer();
    } else if (key == "renderer.pretrain_epochs") {
      c.renderer_pretrain_epochs = integer();
    } else if (key == "renderer.pretrain_count") {
      c.renderer_pretrain_count = integer();
    } else if (key == "renderer.freeze_pretrained") {
      c.freeze_pretrained_renderer = flag();
    } else if (key == "epochs") {
      c.train.epochs = integer();
    } else if (key == "batch_size") {
      c.train.batch_size = integer();
    } else if (key == "sgd.base_lr") {
      c.train.sgd.base_lr = real();
    } else if (key == "sgd.momentum") {
      c.train.sgd.momentum = real();
    } else if (key == "sgd.decay_factor") {
      c.train.sgd.decay_factor = real();
    } else if (key == "sgd.decay_every") {
      c.train.sgd.decay_every = ParseInt(value, key);
    } else if (!key.starts_with("resolved.")) {
      throw ContractError("unknown experiment field '" + key + "'");
    }
  }
  if (!noise_fields.empty()) {
    simulator::NoiseSpec noise = DefaultNoise();
    std::map<std::string, std::string> merged = simulator::NoiseSpecFields(noise);
    for (const auto& [k, v] : noise_fields) merged[k] = v;
    c.noise = simulator::NoiseSpecFromFields(merged);
  }
  c.Resolve().Validate();
  return c;
}

BenchmarkData MakeBenchmark(const ExperimentConfig& config) {
  BenchmarkData data;
  const uint64_t s = config.data_seed;
  data.source = simulator::GenerateDataset(config.source_scenes, config.source_count,
                                           config.sensor, numerics::DeriveSeed(s, {1}));
  const auto noisy = [&](int count, uint64_t stream, bool keep_clean) {
    const auto clean = simulator::GenerateDataset(config.target_scenes, count, config.sensor,
                                                  numerics::DeriveSeed(s, {stream}));
    simulator::NoiseSpec spec = config.noise;
    spec.seed = numerics::DeriveSeed(config.noise.seed, {s, stream});
    std::vector<RangeImage> images;
    for (auto& n : simulator::InjectDropoutAll(clean, spec)) {
      images.push_back(std::move(n.image));
      if (keep_clean) data.test_masks.push_back(std::move(n.mask));
    }
    if (keep_clean) data.test_clean = clean;
    return images;
  };
  data.target = noisy(config.target_count, 2, false);
  data.test = noisy(config.test_count, 3, true);
  return data;
}

noiserender::RendererTrainResult PretrainRenderer(const BenchmarkData& data,
                                                  const ExperimentConfig& config) {
  const segmodel::AdaptConfig resolved = config.Resolve();
  const size_t count = std::min<size_t>(data.target.size(), config.renderer_pretrain_count);
  const std::vector<RangeImage> subset(data.target.begin(), data.target.begin() + count);
  noiserender::RendererTrainConfig rc;
  rc.epochs = config.renderer_pretrain_epochs;
  rc.batch_size = resolved.renderer_batch_size;
  rc.sgd = resolved.renderer_sgd;
  rc.completion = resolved.completion;
  rc.seed = numerics::DeriveSeed(config.seed, {40});
  return noiserender::TrainRenderer(subset, resolved.renderer, rc);
}

MetricsRecord Evaluate(segmodel::SegNet& net, const std::vector<RangeImage>& images,
                       int num_classes) {
  MetricsAccumulator acc(num_classes);
  constexpr size_t kChunk = 20;
  for (size_t start = 0; start < images.size(); start += kChunk) {
    std::vector<const RangeImage*> batch;
    for (size_t i = start; i < std::min(images.size(), start + kChunk); ++i) {
      batch.push_back(&images[i]);
    }
    const std::vector<uint8_t> pred = segmodel::PredictBatch(net, batch);
    const size_t plane = static_cast<size_t>(batch[0]->pixels());
    for (size_t k = 0; k < batch.size(); ++k) {
      const std::vector<uint8_t> p(pred.begin() + k * plane, pred.begin() + (k + 1) * plane);
      acc.Add(p, batch[k]->labels(), batch[k]->mask());
    }
  }
  return acc.Result();
}

ExperimentResult RunExperiment(const ExperimentConfig& config, const BenchmarkData& data,
                               const noiserender::RendererNet* renderer) {
  const segmodel::AdaptConfig resolved = config.Resolve();
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult result;
  result.state = segmodel::AdaptTrain(data.source, data.target, resolved,
                                      resolved.use_sdnr ? renderer : nullptr);
  result.train_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (result.state.aborted) throw TrainingError(result.state.diagnostic);
  result.metrics = Evaluate(result.state.net, data.test, resolved.net.num_classes);
  return result;
}

MaskFidelity RenderedMaskFidelity(const noiserender::RendererNet& renderer,
                                  const std::vector<RangeImage>& clean,
                                  const std::vector<geometry::DropoutMask>& truth,
                                  const noiserender::CompletionConfig& completion,
                                  double threshold) {
  if (clean.size() != truth.size() || clean.empty()) {
    throw ContractError("mask fidelity: need matching, non-empty frame and mask lists");
  }
  int64_t kept_inter = 0, kept_union = 0, drop_inter = 0, drop_union = 0;
  int64_t base_inter = 0, base_union = 0;
  for (size_t i = 0; i < clean.size(); ++i) {
    const RangeImage completed = noiserender::CompleteImage(clean[i], completion);
    const RangeImage adapted =
        noiserender::RenderAdapted(clean[i], renderer.KeepProbability({&completed}), threshold);
    const auto& pred = adapted.mask();
    const auto& own = clean[i].mask();
    const auto& gt = truth[i].values;
    for (size_t k = 0; k < gt.size(); ++k) {
      kept_inter += pred[k] && gt[k];
      kept_union += pred[k] || gt[k];
      base_inter += own[k] && gt[k];
      base_union += own[k] || gt[k];
      const bool pd = own[k] && !pred[k];
      const bool gd = own[k] && !gt[k];
      drop_inter += pd && gd;
      drop_union += pd || gd;
    }
  }
  const auto ratio = [](int64_t a, int64_t b) { return b == 0 ? 1.0 : double(a) / double(b); };
  return {ratio(kept_inter, kept_union), ratio(drop_inter, drop_union),
          ratio(base_inter, base_union)};
}

}  // namespace evalcli
}  // namespace epointda
