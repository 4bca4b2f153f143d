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

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "epointda/align/spatial_report.h"
#include "epointda/binary_io.h"
#include "epointda/evalcli/ablation.h"
#include "epointda/evalcli/experiment.h"
#include "epointda/evalcli/grad_suite.h"
#include "epointda/evalcli/manifest.h"
#include "epointda/evalcli/metrics.h"
#include "epointda/geometry/io.h"
#include "epointda/geometry/projection.h"
#include "epointda/noiserender/renderer.h"
#include "epointda/segmodel/network.h"
#include "epointda/segmodel/train.h"
#include "epointda/simulator/dataset.h"
#include "epointda/text_format.h"

namespace fs = std::filesystem;
using namespace epointda;

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void WriteManifest(const std::string& dir, const std::string& command, const KeyValues& config,
                   const KeyValues& results, double seconds,
                   const std::vector<evalcli::EpochSummary>& epochs = {}) {
  evalcli::RunManifest m;
  m.command = command;
  m.config = config;
  m.results = results;
  m.epochs = epochs;
  m.wall_seconds = seconds;
  evalcli::WriteRunManifest((fs::path(dir) / "run.manifest").string(), m);
}

// Options shared by commands that build an ExperimentConfig.
struct ExperimentFlags {
  uint64_t seed = 0;
  int epochs = -1;
  int batch_size = -1;
  double lr = -1.0;
  std::string modules = "full";
  std::string norm;
  int head_convs = 0;
  std::string config_path;

  void Add(CLI::App* app) {
    app->add_option("--seed", seed, "Run seed");
    app->add_option("--epochs", epochs, "Training epochs");
    app->add_option("--batch-size", batch_size, "Segmentation batch size");
    app->add_option("--lr", lr, "Segmentation base learning rate");
    app->add_option("--modules", modules,
                    "Module set: full, baseline, or a '+'-joined subset of "
                    "sdnr,in,homm,asac,hhead")
        ->capture_default_str();
    app->add_option("--norm", norm, "Normalization override: batch, instance, layer, group");
    app->add_option("--head-convs", head_convs, "Head convolution override (1-5)");
    app->add_option("--config", config_path, "Start from the config fields of a run manifest")
        ->check(CLI::ExistingFile);
  }

  evalcli::ExperimentConfig Build() const {
    evalcli::ExperimentConfig c;
    if (!config_path.empty()) {
      c = evalcli::ExperimentConfig::FromFields(
          evalcli::ReadRunManifest(config_path).config);
    }
    c.seed = seed;
    if (epochs >= 0) c.train.epochs = epochs;
    if (batch_size > 0) c.train.batch_size = batch_size;
    if (lr > 0.0) c.train.sgd.base_lr = lr;
    if (config_path.empty() || modules != "full") c.modules = ParseModules(modules);
    if (!norm.empty()) c.norm_override = numerics::ParseNormMode(norm);
    if (head_convs > 0) c.head_convs_override = head_convs;
    return c;
  }

  static evalcli::ModuleToggles ParseModules(const std::string& text) {
    if (text == "full") return {};
    evalcli::ModuleToggles t{false, false, false, false, false};
    if (text == "baseline") return t;
    for (const std::string& part : SplitString(text, '+')) {
      if (part.empty()) continue;
      if (part == "sdnr") {
        t.sdnr = true;
      } else if (part == "in") {
        t.in = true;
      } else if (part == "homm") {
        t.homm = true;
      } else if (part == "asac") {
        t.asac = true;
      } else if (part == "hhead") {
        t.hhead = true;
      } else {
        throw CLI::ValidationError("--modules", "unknown module '" + part + "'");
      }
    }
    return t;
  }
};

int Simulate(const std::string& out, int count, uint64_t seed, bool noisy,
             const evalcli::ExperimentConfig& defaults) {
  const auto start = Clock::now();
  std::vector<geometry::RangeImage> images = simulator::GenerateDataset(
      defaults.source_scenes, count, defaults.sensor, seed);
  std::map<std::string, std::string> fields = {{"seed", std::to_string(seed)},
                                               {"noisy", noisy ? "true" : "false"}};
  if (noisy) {
    simulator::NoiseSpec spec = defaults.noise;
    spec.seed = seed;
    std::vector<geometry::RangeImage> dropped;
    for (auto& n : simulator::InjectDropoutAll(images, spec)) dropped.push_back(std::move(n.image));
    images = std::move(dropped);
    for (const auto& [k, v] : simulator::NoiseSpecFields(spec)) fields[k] = v;
  }
  const std::string manifest = simulator::WriteDataset(out, images, fields);
  KeyValues config(fields.begin(), fields.end());
  config.emplace_back("count", std::to_string(count));
  WriteManifest(out, "simulate", config, {{"result.dataset", manifest}}, Seconds(start));
  std::cout << manifest << "\n";
  return 0;
}

int Project(const std::string& input, const std::string& output, const std::string& format) {
  const geometry::CloudFormat f =
      format == "kitti" ? geometry::CloudFormat::kKittiBin : geometry::CloudFormat::kEpda;
  const geometry::PointCloud cloud = geometry::LoadPointCloud(input, f);
  const geometry::Projection p =
      geometry::ProjectCloud(cloud, geometry::SensorConfig::DeskScale());
  const fs::path dir = fs::path(output).parent_path();
  if (!dir.empty()) fs::create_directories(dir);
  geometry::SaveRangeImage(output, p.image);
  WriteManifest(dir.empty() ? "." : dir.string(), "project",
                {{"input", input}, {"format", format}},
                {{"result.binned", std::to_string(p.stats.binned)},
                 {"result.occluded", std::to_string(p.stats.occluded)},
                 {"result.out_of_fov", std::to_string(p.stats.out_of_fov)}},
                0.0);
  std::cout << output << "\n";
  return 0;
}

int TrainDnr(const std::string& target, const std::string& out, int epochs, uint64_t seed) {
  const auto start = Clock::now();
  fs::create_directories(out);
  const auto images = simulator::LoadDataset(target);
  const evalcli::ExperimentConfig defaults;
  noiserender::RendererConfig rc = defaults.Resolve().renderer;
  rc.position_rows = images.front().rows();
  rc.position_cols = images.front().cols();
  noiserender::RendererTrainConfig tc;
  tc.epochs = epochs;
  tc.seed = seed;
  const auto result = noiserender::TrainRenderer(images, rc, tc);
  noiserender::SaveRenderer((fs::path(out) / "renderer.ckpt").string(), result.net);
  std::vector<evalcli::EpochSummary> summary;
  for (size_t e = 0; e < result.epoch_loss.size(); ++e) {
    summary.push_back({static_cast<int>(e), result.epoch_loss[e], 0.0, 0.0, result.epoch_loss[e]});
  }
  WriteManifest(out, "train-dnr",
                {{"target", target}, {"epochs", std::to_string(epochs)},
                 {"seed", std::to_string(seed)}},
                {{"result.aborted", result.aborted ? "true" : "false"}}, Seconds(start),
                summary);
  if (result.aborted) {
    std::cerr << "renderer training aborted: " << result.diagnostic << "\n";
    return 1;
  }
  return 0;
}

int Adapt(const std::string& source_path, const std::string& target_path,
          const std::string& test_path, const std::string& out,
          const evalcli::ExperimentConfig& config) {
  const auto start = Clock::now();
  fs::create_directories(out);
  evalcli::BenchmarkData data;
  data.source = simulator::LoadDataset(source_path);
  data.target = simulator::LoadDataset(target_path);
  data.test = test_path.empty() ? data.target : simulator::LoadDataset(test_path);
  evalcli::ExperimentConfig c = config;
  c.sensor.rows = data.source.front().rows();
  c.sensor.cols = data.source.front().cols();
  c.source_count = static_cast<int>(data.source.size());
  c.target_count = static_cast<int>(data.target.size());
  c.test_count = static_cast<int>(data.test.size());
  noiserender::RendererTrainResult renderer;
  if (c.modules.sdnr) renderer = evalcli::PretrainRenderer(data, c);
  const evalcli::ExperimentResult r =
      evalcli::RunExperiment(c, data, c.modules.sdnr ? &renderer.net : nullptr);
  segmodel::SaveSegNet((fs::path(out) / "seg.ckpt").string(), r.state.net);
  evalcli::WriteMetricsCsv((fs::path(out) / "metrics.csv").string(), r.metrics);
  segmodel::WriteLossLog((fs::path(out) / "loss.csv").string(), r.state.log);
  evalcli::RunManifest m = evalcli::ExperimentManifest("adapt", c, r, Seconds(start));
  m.config.emplace_back("resolved.source", source_path);
  m.config.emplace_back("resolved.target", target_path);
  evalcli::WriteRunManifest((fs::path(out) / "run.manifest").string(), m);
  std::cout << evalcli::MetricsToCsv(r.metrics);
  return 0;
}

int Eval(const std::string& checkpoint, const std::string& config_path,
         const std::string& data_path, const std::string& out) {
  const auto start = Clock::now();
  const std::string manifest_path =
      config_path.empty() ? (fs::path(checkpoint).parent_path() / "run.manifest").string()
                          : config_path;
  const evalcli::ExperimentConfig c =
      evalcli::ExperimentConfig::FromFields(evalcli::ReadRunManifest(manifest_path).config);
  segmodel::SegNet net(c.Resolve().net, 0);
  segmodel::LoadSegNet(checkpoint, net);
  const auto images = simulator::LoadDataset(data_path);
  const fs::path out_dir = fs::path(out).parent_path();
  if (!out_dir.empty()) fs::create_directories(out_dir);
  const evalcli::MetricsRecord metrics =
      evalcli::Evaluate(net, images, c.Resolve().net.num_classes);
  evalcli::WriteMetricsCsv(out, metrics);
  WriteManifest(out_dir.empty() ? "." : out_dir.string(), "eval", {{"checkpoint", checkpoint}, {"data", data_path}},
                evalcli::MetricsResults(metrics), Seconds(start));
  std::cout << evalcli::MetricsToCsv(metrics);
  return 0;
}

int Ablate(const std::string& axis_name, const std::string& out,
           const evalcli::ExperimentConfig& base) {
  const auto start = Clock::now();
  fs::create_directories(out);
  const evalcli::AblationAxis axis = evalcli::ParseAblationAxis(axis_name);
  const evalcli::AblationTable table = evalcli::RunAblation(base, axis);
  const std::string csv = evalcli::AblationToCsv(table);
  WriteFileBytes((fs::path(out) / ("ablation_" + axis_name + ".csv")).string(), csv);
  KeyValues results;
  for (const auto& row : table.rows) {
    results.emplace_back("result." + row.label, row.metrics ? "ok" : "failed: " + row.error);
  }
  KeyValues config = base.Fields();
  config.emplace_back("resolved.axis", axis_name);
  WriteManifest(out, "ablate", config, results, Seconds(start));
  std::cout << csv;
  return 0;
}

int GradCheck(double tolerance) {
  bool ok = true;
  for (const auto& e : evalcli::RunGradientSuite()) {
    const bool pass = e.max_relative_error < tolerance;
    ok = ok && pass;
    std::printf("%-24s %.3e %s\n", e.name.c_str(), e.max_relative_error, pass ? "ok" : "FAIL");
  }
  return ok ? 0 : 1;
}

int Report(const std::string& source_path, const std::string& target_path, int channel,
           const std::vector<std::string>& positions, int bins, const std::string& out) {
  const auto source = simulator::LoadDataset(source_path);
  const auto target = simulator::LoadDataset(target_path);
  std::vector<align::PixelPosition> pos;
  for (const std::string& p : positions) {
    const auto rc = SplitString(p, ':');
    if (rc.size() != 2) throw CLI::ValidationError("--position", "expected row:col, got " + p);
    pos.push_back({static_cast<int>(ParseInt(rc[0], "row")),
                   static_cast<int>(ParseInt(rc[1], "col"))});
  }
  const align::SpatialReport report = align::SpatialDistributionReport(
      {{"source", &source}, {"target", &target}}, channel, pos, bins);
  align::WriteHistogramCsv(out, report.rows);
  for (const auto& g : report.gaps) {
    std::printf("position %d ks %.4f critical %.4f %s\n", g.position_id, g.ks_statistic,
                g.critical_value, g.differs() ? "differs" : "same");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"epointda: simulation-to-real LiDAR segmentation laboratory"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  auto* simulate = app.add_subcommand("simulate", "Generate a simulated range-image dataset");
  std::string sim_out;
  int sim_count = 100;
  uint64_t sim_seed = 0;
  bool sim_noisy = false;
  simulate->add_option("--out", sim_out, "Output directory")->required();
  simulate->add_option("--count", sim_count, "Number of frames")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim_seed, "Dataset seed");
  simulate->add_flag("--noisy", sim_noisy, "Apply the benchmark dropout noise");

  auto* project = app.add_subcommand("project", "Project a point cloud to a range image");
  std::string proj_in, proj_out, proj_format = "epda";
  project->add_option("--input", proj_in, "EPDA or KITTI .bin file")
      ->required()
      ->check(CLI::ExistingFile);
  project->add_option("--out", proj_out, "Output EPRI file")->required();
  project->add_option("--format", proj_format, "epda or kitti")
      ->check(CLI::IsMember({"epda", "kitti"}));

  auto* train_dnr = app.add_subcommand("train-dnr", "Train the dropout-noise renderer");
  std::string dnr_target, dnr_out;
  int dnr_epochs = 5;
  uint64_t dnr_seed = 0;
  train_dnr->add_option("--target", dnr_target, "Target dataset manifest")
      ->required()
      ->check(CLI::ExistingFile);
  train_dnr->add_option("--out", dnr_out, "Output directory")->required();
  train_dnr->add_option("--epochs", dnr_epochs, "Epochs");
  train_dnr->add_option("--seed", dnr_seed, "Seed");

  auto* adapt = app.add_subcommand("adapt", "Run domain-adaptive training and evaluation");
  std::string ad_source, ad_target, ad_test, ad_out;
  ExperimentFlags ad_flags;
  adapt->add_option("--source", ad_source, "Source dataset manifest")
      ->required()
      ->check(CLI::ExistingFile);
  adapt->add_option("--target", ad_target, "Target dataset manifest")
      ->required()
      ->check(CLI::ExistingFile);
  adapt->add_option("--test", ad_test, "Evaluation dataset manifest (default: target)")
      ->check(CLI::ExistingFile);
  adapt->add_option("--out", ad_out, "Output directory")->required();
  ad_flags.Add(adapt);

  auto* eval = app.add_subcommand("eval", "Evaluate a segmentation checkpoint");
  std::string ev_ckpt, ev_config, ev_data, ev_out;
  eval->add_option("--checkpoint", ev_ckpt, "Segmentation checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--config", ev_config, "Run manifest (default: next to the checkpoint)")
      ->check(CLI::ExistingFile);
  eval->add_option("--data", ev_data, "Dataset manifest")->required()->check(CLI::ExistingFile);
  eval->add_option("--out", ev_out, "Metrics CSV path")->required();

  auto* ablate = app.add_subcommand("ablate", "Run an ablation table on the simulator benchmark");
  std::string ab_axis = "modules", ab_out;
  ExperimentFlags ab_flags;
  ablate->add_option("--axis", ab_axis, "modules, normalization or head_convs")
      ->check(CLI::IsMember({"modules", "normalization", "head_convs"}));
  ablate->add_option("--out", ab_out, "Output directory")->required();
  ab_flags.Add(ablate);

  auto* gradcheck = app.add_subcommand("gradcheck", "Run the finite-difference gradient suite");
  double gc_tol = 1e-4;
  gradcheck->add_option("--tolerance", gc_tol, "Maximum relative error");

  auto* report = app.add_subcommand("report", "Per-position value histograms across domains");
  std::string rp_source, rp_target, rp_out;
  int rp_channel = align::kRangeChannel, rp_bins = 20;
  std::vector<std::string> rp_positions;
  report->add_option("--source", rp_source, "Source dataset manifest")
      ->required()
      ->check(CLI::ExistingFile);
  report->add_option("--target", rp_target, "Target dataset manifest")
      ->required()
      ->check(CLI::ExistingFile);
  report->add_option("--channel", rp_channel, "Channel index, or -1 for range");
  report->add_option("--position", rp_positions, "Pixel as row:col (repeatable)")->required();
  report->add_option("--bins", rp_bins, "Histogram bins");
  report->add_option("--out", rp_out, "Histogram CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return Simulate(sim_out, sim_count, sim_seed, sim_noisy, {});
    if (*project) return Project(proj_in, proj_out, proj_format);
    if (*train_dnr) return TrainDnr(dnr_target, dnr_out, dnr_epochs, dnr_seed);
    if (*adapt) return Adapt(ad_source, ad_target, ad_test, ad_out, ad_flags.Build());
    if (*eval) return Eval(ev_ckpt, ev_config, ev_data, ev_out);
    if (*ablate) return Ablate(ab_axis, ab_out, ab_flags.Build());
    if (*gradcheck) return GradCheck(gc_tol);
    if (*report) {
      return Report(rp_source, rp_target, rp_channel, rp_positions, rp_bins, rp_out);
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
