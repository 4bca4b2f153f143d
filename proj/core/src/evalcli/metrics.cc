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

#include "epointda/evalcli/metrics.h"

#include <sstream>

#include "epointda/binary_io.h"
#include "epointda/errors.h"
#include "epointda/geometry/range_image.h"
#include "epointda/text_format.h"

namespace epointda {
namespace evalcli {
namespace {

constexpr char kHeader[] = "class,precision,recall,iou,n_pred,n_truth,n_intersect";
constexpr char kUndefined[] = "undefined";

std::optional<double> Ratio(int64_t num, int64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::string ClassLabel(int cls) {
  if (cls >= 0 && cls < geometry::kNumClasses) return geometry::ClassName(cls);
  return "class" + std::to_string(cls);
}

int ParseClassLabel(const std::string& name) {
  for (int c = 0; c < geometry::kNumClasses; ++c) {
    if (name == geometry::ClassName(c)) return c;
  }
  if (name.rfind("class", 0) == 0) return static_cast<int>(ParseInt(name.substr(5), "class"));
  throw ContractError("metrics CSV: unknown class '" + name + "'");
}

std::string Percent(const std::optional<double>& v) {
  return v ? FormatFixed(*v * 100.0, 1) : kUndefined;
}

std::optional<double> ParsePercent(const std::string& text, const char* what) {
  if (text == kUndefined) return std::nullopt;
  return ParseDouble(text, what) / 100.0;
}

}  // namespace

const ClassMetrics& MetricsRecord::at(int cls) const {
  if (cls < 0 || cls >= static_cast<int>(classes.size())) {
    throw ContractError("MetricsRecord: no class " + std::to_string(cls));
  }
  return classes[cls];
}

MetricsAccumulator::MetricsAccumulator(int num_classes)
    : num_classes_(num_classes), pred_(num_classes), truth_(num_classes), inter_(num_classes) {
  if (num_classes < 1) throw ContractError("metrics: need at least one class");
}

void MetricsAccumulator::Add(const std::vector<uint8_t>& pred,
                             const std::vector<uint8_t>& truth,
                             const std::vector<uint8_t>& valid) {
  if (pred.size() != truth.size() || (!valid.empty() && valid.size() != pred.size())) {
    throw ContractError("precision_recall_iou: shape mismatch (" +
                        std::to_string(pred.size()) + " predictions, " +
                        std::to_string(truth.size()) + " labels, " +
                        std::to_string(valid.size()) + " validity flags)");
  }
  for (size_t i = 0; i < pred.size(); ++i) {
    if (!valid.empty() && valid[i] == 0) continue;
    if (pred[i] >= num_classes_ || truth[i] >= num_classes_) {
      throw ContractError("precision_recall_iou: label out of range at position " +
                          std::to_string(i));
    }
    ++pred_[pred[i]];
    ++truth_[truth[i]];
    if (pred[i] == truth[i]) ++inter_[pred[i]];
  }
}

MetricsRecord MetricsAccumulator::Result() const {
  MetricsRecord record;
  for (int c = 0; c < num_classes_; ++c) {
    ClassMetrics m;
    m.cls = c;
    m.n_pred = pred_[c];
    m.n_truth = truth_[c];
    m.n_intersect = inter_[c];
    m.precision = Ratio(inter_[c], pred_[c]);
    m.recall = Ratio(inter_[c], truth_[c]);
    m.iou = Ratio(inter_[c], pred_[c] + truth_[c] - inter_[c]);
    record.classes.push_back(m);
  }
  return record;
}

MetricsRecord PrecisionRecallIou(const std::vector<uint8_t>& pred,
                                 const std::vector<uint8_t>& truth,
                                 const std::vector<uint8_t>& valid, int num_classes) {
  MetricsAccumulator acc(num_classes);
  acc.Add(pred, truth, valid);
  return acc.Result();
}

double IouFromPreRec(double pre, double rec) {
  if (!(pre > 0.0 && pre <= 1.0) || !(rec > 0.0 && rec <= 1.0)) {
    throw ContractError("iou_from_pre_rec: precision and recall must be in (0, 1]");
  }
  return 1.0 / (1.0 / pre + 1.0 / rec - 1.0);
}

std::optional<double> MeanDefined(const std::vector<std::optional<double>>& values) {
  double total = 0.0;
  int count = 0;
  for (const auto& v : values) {
    if (v) {
      total += *v;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return total / count;
}

std::string MetricsToCsv(const MetricsRecord& record) {
  std::ostringstream out;
  out << kHeader << '\n';
  for (const ClassMetrics& m : record.classes) {
    out << ClassLabel(m.cls) << ',' << Percent(m.precision) << ',' << Percent(m.recall) << ','
        << Percent(m.iou) << ',' << m.n_pred << ',' << m.n_truth << ',' << m.n_intersect
        << '\n';
  }
  return out.str();
}

MetricsRecord MetricsFromCsv(const std::string& text) {
  const std::vector<std::string> lines = SplitString(text, '\n');
  if (lines.empty() || lines[0] != kHeader) {
    throw ContractError("metrics CSV: unexpected header");
  }
  MetricsRecord record;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::vector<std::string> f = SplitString(lines[i], ',');
    if (f.size() != 7) throw ContractError("metrics CSV: malformed row '" + lines[i] + "'");
    ClassMetrics m;
    m.cls = ParseClassLabel(f[0]);
    m.precision = ParsePercent(f[1], "precision");
    m.recall = ParsePercent(f[2], "recall");
    m.iou = ParsePercent(f[3], "iou");
    m.n_pred = ParseInt(f[4], "n_pred");
    m.n_truth = ParseInt(f[5], "n_truth");
    m.n_intersect = ParseInt(f[6], "n_intersect");
    if (m.cls != static_cast<int>(record.classes.size())) {
      throw ContractError("metrics CSV: classes must be listed in order");
    }
    record.classes.push_back(m);
  }
  return record;
}

void WriteMetricsCsv(const std::string& path, const MetricsRecord& record) {
  WriteFileBytes(path, MetricsToCsv(record));
}

MetricsRecord ReadMetricsCsv(const std::string& path) {
  return MetricsFromCsv(ReadFileBytes(path));
}

}  // namespace evalcli
}  // namespace epointda
