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

#include "epointda/evalcli/ablation.h"

#include <exception>
#include <sstream>

#include "epointda/errors.h"
#include "epointda/geometry/range_image.h"
#include "epointda/text_format.h"

namespace epointda {
namespace evalcli {
namespace {

constexpr char kFailed[] = "failed";
constexpr char kUndefined[] = "undefined";
constexpr int kReportedClasses[] = {geometry::kCar, geometry::kPedestrian};

std::string Percent(const std::optional<double>& v) {
  return v ? FormatFixed(*v * 100.0, 1) : kUndefined;
}

std::optional<double> ParsePercent(const std::string& text, const char* what) {
  if (text == kUndefined) return std::nullopt;
  return ParseDouble(text, what) / 100.0;
}

std::string Header(AblationAxis axis) {
  return std::string(AblationAxisName(axis)) +
         ",car_precision,car_recall,car_iou,pedestrian_precision,pedestrian_recall,"
         "pedestrian_iou,status";
}

}  // namespace

const char* AblationAxisName(AblationAxis axis) {
  switch (axis) {
    case AblationAxis::kModules:
      return "modules";
    case AblationAxis::kNormalization:
      return "normalization";
    case AblationAxis::kHeadConvs:
      return "head_convs";
  }
  return "unknown";
}

AblationAxis ParseAblationAxis(const std::string& name) {
  for (AblationAxis a :
       {AblationAxis::kModules, AblationAxis::kNormalization, AblationAxis::kHeadConvs}) {
    if (name == AblationAxisName(a)) return a;
  }
  throw ContractError("unknown ablation axis '" + name + "'");
}

std::vector<AblationCell> AblationCells(const ExperimentConfig& base, AblationAxis axis) {
  std::vector<AblationCell> cells;
  switch (axis) {
    case AblationAxis::kModules:
      for (int k = 0; k <= 5; ++k) {
        ExperimentConfig c = base;
        c.modules = {k >= 1, k >= 2, k >= 3, k >= 4, k >= 5};
        c.norm_override.reset();
        c.head_convs_override.reset();
        cells.push_back({c.modules.Name(), c});
      }
      break;
    case AblationAxis::kNormalization:
      for (numerics::NormMode m : {numerics::NormMode::kBatch, numerics::NormMode::kInstance,
                                   numerics::NormMode::kLayer, numerics::NormMode::kGroup}) {
        ExperimentConfig c = base;
        c.modules = {};
        c.norm_override = m;
        c.head_convs_override.reset();
        cells.push_back({numerics::NormModeName(m), c});
      }
      break;
    case AblationAxis::kHeadConvs:
      for (int k = 1; k <= 5; ++k) {
        ExperimentConfig c = base;
        c.modules = {};
        c.norm_override.reset();
        c.head_convs_override = k;
        cells.push_back({std::to_string(k), c});
      }
      break;
  }
  return cells;
}

AblationTable RunAblation(const std::vector<AblationCell>& cells, AblationAxis axis,
                          const BenchmarkData& data,
                          const noiserender::RendererNet* renderer) {
  AblationTable table;
  table.axis = axis;
  for (const AblationCell& cell : cells) {
    AblationRow row;
    row.label = cell.label;
    try {
      const ExperimentResult result = RunExperiment(cell.config, data, renderer);
      row.metrics = result.metrics;
      row.train_seconds = result.train_seconds;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

AblationTable RunAblation(const ExperimentConfig& base, AblationAxis axis) {
  const BenchmarkData data = MakeBenchmark(base);
  const noiserender::RendererTrainResult renderer = PretrainRenderer(data, base);
  return RunAblation(AblationCells(base, axis), axis, data, &renderer.net);
}

std::string AblationToCsv(const AblationTable& table) {
  std::ostringstream out;
  out << Header(table.axis) << '\n';
  for (const AblationRow& row : table.rows) {
    if (row.label.find(',') != std::string::npos) {
      throw ContractError("ablation CSV: label contains a comma");
    }
    out << row.label;
    for (const int cls : kReportedClasses) {
      if (row.metrics) {
        const ClassMetrics& m = row.metrics->at(cls);
        out << ',' << Percent(m.precision) << ',' << Percent(m.recall) << ','
            << Percent(m.iou);
      } else {
        out << ',' << kFailed << ',' << kFailed << ',' << kFailed;
      }
    }
    out << ',' << (row.metrics ? "ok" : kFailed) << '\n';
  }
  return out.str();
}

AblationTable AblationFromCsv(const std::string& text) {
  const std::vector<std::string> lines = SplitString(text, '\n');
  if (lines.empty()) throw ContractError("ablation CSV: empty input");
  AblationTable table;
  const std::vector<std::string> head = SplitString(lines[0], ',');
  table.axis = ParseAblationAxis(head[0]);
  if (lines[0] != Header(table.axis)) throw ContractError("ablation CSV: unexpected header");
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::vector<std::string> f = SplitString(lines[i], ',');
    if (f.size() != 8) throw ContractError("ablation CSV: malformed row '" + lines[i] + "'");
    AblationRow row;
    row.label = f[0];
    if (f[7] == "ok") {
      MetricsRecord record;
      record.classes.resize(geometry::kNumClasses);
      for (int c = 0; c < geometry::kNumClasses; ++c) record.classes[c].cls = c;
      size_t col = 1;
      for (const int cls : kReportedClasses) {
        ClassMetrics& m = record.classes[cls];
        m.precision = ParsePercent(f[col++], "precision");
        m.recall = ParsePercent(f[col++], "recall");
        m.iou = ParsePercent(f[col++], "iou");
      }
      row.metrics = record;
    } else if (f[7] == kFailed) {
      row.error = kFailed;
    } else {
      throw ContractError("ablation CSV: unknown status '" + f[7] + "'");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace evalcli
}  // namespace epointda
