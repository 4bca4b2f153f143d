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

#ifndef EPOINTDA_EVALCLI_MANIFEST_H_
#define EPOINTDA_EVALCLI_MANIFEST_H_

#include <string>
#include <vector>

#include "epointda/evalcli/experiment.h"
#include "epointda/text_format.h"

namespace epointda {
namespace evalcli {

// Library version recorded in every manifest.
const char* CodeVersion();

struct EpochSummary {
  int epoch = 0;
  double loss_total = 0.0;  // means over the epoch's steps
  double loss_seg = 0.0;
  double loss_homm = 0.0;
  double loss_mask = 0.0;
};

// Flat key=value record of one run. `config` holds unprefixed fields that
// rebuild the run; results live under "epoch.", "result." and "time." keys.
struct RunManifest {
  std::string command;
  std::string code_version = CodeVersion();
  KeyValues config;
  std::vector<EpochSummary> epochs;
  KeyValues results;
  double wall_seconds = 0.0;

  std::string Serialize() const;
  static RunManifest Parse(const std::string& text);
};

std::vector<EpochSummary> SummarizeEpochs(const std::vector<segmodel::LossLogRow>& log,
                                          int epochs);

// Car and pedestrian ratios as "result.<class>_<ratio>" entries.
KeyValues MetricsResults(const MetricsRecord& metrics);

RunManifest ExperimentManifest(const std::string& command, const ExperimentConfig& config,
                               const ExperimentResult& result, double wall_seconds);

void WriteRunManifest(const std::string& path, const RunManifest& manifest);
RunManifest ReadRunManifest(const std::string& path);

}  // namespace evalcli
}  // namespace epointda

#endif  // EPOINTDA_EVALCLI_MANIFEST_H_
