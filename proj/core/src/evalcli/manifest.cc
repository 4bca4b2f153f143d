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

#include "epointda/evalcli/manifest.h"

#include <algorithm>

#include "epointda/binary_io.h"
#include "epointda/errors.h"
#include "epointda/geometry/range_image.h"

namespace epointda {
namespace evalcli {
namespace {

std::string RatioText(const std::optional<double>& v) {
  return v ? FormatDouble(*v) : "undefined";
}

}  // namespace

const char* CodeVersion() { return "epointda-" EPOINTDA_VERSION; }

std::vector<EpochSummary> SummarizeEpochs(const std::vector<segmodel::LossLogRow>& log,
                                          int epochs) {
  std::vector<EpochSummary> out;
  if (epochs <= 0 || log.empty()) return out;
  const size_t per_epoch = (log.size() + epochs - 1) / epochs;
  for (size_t start = 0, e = 0; start < log.size(); start += per_epoch, ++e) {
    const size_t end = std::min(log.size(), start + per_epoch);
    EpochSummary s;
    s.epoch = static_cast<int>(e);
    for (size_t i = start; i < end; ++i) {
      s.loss_total += log[i].loss_total;
      s.loss_seg += log[i].loss_seg;
      s.loss_homm += log[i].loss_homm;
      s.loss_mask += log[i].loss_mask;
    }
    const double n = static_cast<double>(end - start);
    s.loss_total /= n;
    s.loss_seg /= n;
    s.loss_homm /= n;
    s.loss_mask /= n;
    out.push_back(s);
  }
  return out;
}

KeyValues MetricsResults(const MetricsRecord& metrics) {
  KeyValues out;
  for (const int cls : {geometry::kCar, geometry::kPedestrian}) {
    const ClassMetrics& m = metrics.at(cls);
    const std::string name = geometry::ClassName(cls);
    out.emplace_back("result." + name + "_precision", RatioText(m.precision));
    out.emplace_back("result." + name + "_recall", RatioText(m.recall));
    out.emplace_back("result." + name + "_iou", RatioText(m.iou));
  }
  return out;
}

RunManifest ExperimentManifest(const std::string& command, const ExperimentConfig& config,
                               const ExperimentResult& result, double wall_seconds) {
  RunManifest m;
  m.command = command;
  m.config = config.Fields();
  m.epochs = SummarizeEpochs(result.state.log, config.train.epochs);
  m.results = MetricsResults(result.metrics);
  m.results.emplace_back("result.steps", std::to_string(result.state.step));
  m.wall_seconds = wall_seconds;
  return m;
}

std::string RunManifest::Serialize() const {
  KeyValues all;
  all.emplace_back("command", command);
  all.emplace_back("code_version", code_version);
  all.insert(all.end(), config.begin(), config.end());
  for (const EpochSummary& e : epochs) {
    const std::string p = "epoch." + std::to_string(e.epoch) + ".";
    all.emplace_back(p + "loss_total", FormatDouble(e.loss_total));
    all.emplace_back(p + "loss_seg", FormatDouble(e.loss_seg));
    all.emplace_back(p + "loss_homm", FormatDouble(e.loss_homm));
    all.emplace_back(p + "loss_mask", FormatDouble(e.loss_mask));
  }
  all.insert(all.end(), results.begin(), results.end());
  all.emplace_back("time.wall_seconds", FormatDouble(wall_seconds));
  return SerializeKeyValues(all);
}

RunManifest RunManifest::Parse(const std::string& text) {
  RunManifest m;
  m.code_version.clear();
  for (const auto& [key, value] : ParseKeyValues(text)) {
    if (key == "command") {
      m.command = value;
    } else if (key == "code_version") {
      m.code_version = value;
    } else if (key == "time.wall_seconds") {
      m.wall_seconds = ParseDouble(value, key);
    } else if (key.starts_with("result.")) {
      m.results.emplace_back(key, value);
    } else if (key.starts_with("epoch.")) {
      const std::vector<std::string> parts = SplitString(key, '.');
      if (parts.size() != 3) throw ContractError("manifest: malformed key '" + key + "'");
      const int epoch = static_cast<int>(ParseInt(parts[1], key));
      if (epoch == static_cast<int>(m.epochs.size())) m.epochs.push_back({epoch});
      if (epoch != static_cast<int>(m.epochs.size()) - 1) {
        throw ContractError("manifest: epochs out of order at '" + key + "'");
      }
      EpochSummary& e = m.epochs.back();
      const double v = ParseDouble(value, key);
      if (parts[2] == "loss_total") {
        e.loss_total = v;
      } else if (parts[2] == "loss_seg") {
        e.loss_seg = v;
      } else if (parts[2] == "loss_homm") {
        e.loss_homm = v;
      } else if (parts[2] == "loss_mask") {
        e.loss_mask = v;
      } else {
        throw ContractError("manifest: unknown epoch field '" + key + "'");
      }
    } else {
      m.config.emplace_back(key, value);
    }
  }
  return m;
}

void WriteRunManifest(const std::string& path, const RunManifest& manifest) {
  WriteFileBytes(path, manifest.Serialize());
}

RunManifest ReadRunManifest(const std::string& path) {
  return RunManifest::Parse(ReadFileBytes(path));
}

}  // namespace evalcli
}  // namespace epointda
