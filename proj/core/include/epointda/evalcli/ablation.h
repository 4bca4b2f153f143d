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

#ifndef EPOINTDA_EVALCLI_ABLATION_H_
#define EPOINTDA_EVALCLI_ABLATION_H_

#include <optional>
#include <string>
#include <vector>

#include "epointda/evalcli/experiment.h"
#include "epointda/evalcli/metrics.h"

namespace epointda {
namespace evalcli {

enum class AblationAxis { kModules, kNormalization, kHeadConvs };

const char* AblationAxisName(AblationAxis axis);
AblationAxis ParseAblationAxis(const std::string& name);

struct AblationCell {
  std::string label;
  ExperimentConfig config;
};

// modules: the six cumulative toggle rows from Baseline to the full model.
// normalization: the full model under BN, IN, LN and GN.
// head_convs: the full model with 1..5 head convolutions.
std::vector<AblationCell> AblationCells(const ExperimentConfig& base, AblationAxis axis);

struct AblationRow {
  std::string label;
  std::optional<MetricsRecord> metrics;  // empty when the cell failed
  std::string error;
  double train_seconds = 0.0;
};

struct AblationTable {
  AblationAxis axis = AblationAxis::kModules;
  std::vector<AblationRow> rows;
};

// Runs every cell on shared data and one pretrained renderer. A failing
// cell is recorded and the remaining cells still run.
AblationTable RunAblation(const std::vector<AblationCell>& cells, AblationAxis axis,
                          const BenchmarkData& data,
                          const noiserender::RendererNet* renderer);

// Generates the data and pretrains the renderer from `base` first.
AblationTable RunAblation(const ExperimentConfig& base, AblationAxis axis);

// Columns: <axis>, car_precision, car_recall, car_iou, pedestrian_precision,
// pedestrian_recall, pedestrian_iou, status. Ratios are x100 with one
// decimal; failed cells print "failed" and undefined ratios "undefined".
std::string AblationToCsv(const AblationTable& table);
AblationTable AblationFromCsv(const std::string& text);

}  // namespace evalcli
}  // namespace epointda

#endif  // EPOINTDA_EVALCLI_ABLATION_H_
