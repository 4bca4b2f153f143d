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

#ifndef EPOINTDA_EVALCLI_METRICS_H_
#define EPOINTDA_EVALCLI_METRICS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace epointda {
namespace evalcli {

// A ratio with an empty denominator has no value; it prints as "undefined"
// and is skipped by aggregates.
struct ClassMetrics {
  int cls = 0;
  int64_t n_pred = 0;
  int64_t n_truth = 0;
  int64_t n_intersect = 0;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> iou;
};

struct MetricsRecord {
  std::vector<ClassMetrics> classes;  // indexed by class id

  const ClassMetrics& at(int cls) const;
};

// Pooled counts over any number of frames.
class MetricsAccumulator {
 public:
  explicit MetricsAccumulator(int num_classes);

  // `valid` may be empty (all positions count); otherwise nonzero marks
  // positions that count.
  void Add(const std::vector<uint8_t>& pred, const std::vector<uint8_t>& truth,
           const std::vector<uint8_t>& valid = {});
  MetricsRecord Result() const;

 private:
  int num_classes_;
  std::vector<int64_t> pred_;
  std::vector<int64_t> truth_;
  std::vector<int64_t> inter_;
};

MetricsRecord PrecisionRecallIou(const std::vector<uint8_t>& pred,
                                 const std::vector<uint8_t>& truth,
                                 const std::vector<uint8_t>& valid, int num_classes);

// 1 / (1/pre + 1/rec - 1) for pre, rec in (0, 1].
double IouFromPreRec(double pre, double rec);

// Mean of the defined values; nullopt when none is defined.
std::optional<double> MeanDefined(const std::vector<std::optional<double>>& values);

// Columns class, precision, recall, iou, n_pred, n_truth, n_intersect with
std::string MetricsToCsv(const MetricsRecord& record);
MetricsRecord MetricsFromCsv(const std::string& text);
void WriteMetricsCsv(const std::string& path, const MetricsRecord& record);
MetricsRecord ReadMetricsCsv(const std::string& path);

}  // namespace evalcli
}  // namespace epointda

#endif  // EPOINTDA_EVALCLI_METRICS_H_
