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

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "epointda/errors.h"
#include "epointda/evalcli/ablation.h"
#include "epointda/evalcli/experiment.h"
#include "epointda/evalcli/grad_suite.h"
#include "epointda/evalcli/manifest.h"
#include "epointda/evalcli/metrics.h"
#include "epointda/numerics/rng.h"
#include "gtest/gtest.h"

namespace epointda {
namespace evalcli {
namespace {

using numerics::Rng;

std::vector<uint8_t> RandomLabels(size_t n, int classes, Rng& rng) {
  std::vector<uint8_t> out(n);
  for (auto& v : out) v = static_cast<uint8_t>(numerics::UniformIndex(rng, classes));
  return out;
}

ExperimentConfig TinyExperiment() {
  ExperimentConfig c;
  c.sensor.rows = 16;
  c.sensor.cols = 64;
  c.source_count = 12;
  c.target_count = 12;
  c.test_count = 6;
  c.renderer_pretrain_epochs = 1;
  c.renderer_pretrain_count = 12;
  c.train.net.widths = {4, 8, 8};
  c.train.renderer.widths = {4, 4};
  c.train.homm.samples = 50;
  c.train.epochs = 1;
  c.train.batch_size = 4;
  return c;
}

TEST(MetricsTest, PerfectPredictionIsAllOnes) {
  const std::vector<uint8_t> labels = {0, 1, 1, 2, 0, 2};
  const MetricsRecord r = PrecisionRecallIou(labels, labels, {}, 3);
  for (const ClassMetrics& m : r.classes) {
    EXPECT_EQ(*m.precision, 1.0);
    EXPECT_EQ(*m.recall, 1.0);
    EXPECT_EQ(*m.iou, 1.0);
  }
}

TEST(MetricsTest, HandSetExample) {
  // Class 1 predicted at {p1, p2}, true at {p2, p3}.
  const std::vector<uint8_t> pred = {1, 1, 0, 0};
  const std::vector<uint8_t> truth = {0, 1, 1, 0};
  const ClassMetrics m = PrecisionRecallIou(pred, truth, {}, 2).at(1);
  EXPECT_EQ(*m.precision, 0.5);
  EXPECT_EQ(*m.recall, 0.5);
  EXPECT_DOUBLE_EQ(*m.iou, 1.0 / 3.0);
  EXPECT_EQ(m.n_pred, 2);
  EXPECT_EQ(m.n_truth, 2);
  EXPECT_EQ(m.n_intersect, 1);
}

TEST(MetricsTest, AbsentClassIsUndefinedAndSkipped) {
  const MetricsRecord r = PrecisionRecallIou({0, 1, 0}, {0, 1, 1}, {}, 3);
  EXPECT_FALSE(r.at(2).precision.has_value());
  EXPECT_FALSE(r.at(2).recall.has_value());
  EXPECT_FALSE(r.at(2).iou.has_value());
  const auto mean = MeanDefined({r.at(0).iou, r.at(1).iou, r.at(2).iou});
  EXPECT_DOUBLE_EQ(*mean, (0.5 + 0.5) / 2.0);
  EXPECT_FALSE(MeanDefined({std::nullopt}).has_value());
  EXPECT_NE(MetricsToCsv(r).find("pedestrian,undefined,undefined,undefined,0,0,0"),
            std::string::npos);
}

TEST(MetricsTest, ValidMaskExcludesPositions) {
  const MetricsRecord r = PrecisionRecallIou({1, 1, 0}, {1, 0, 0}, {1, 0, 1}, 2);
  EXPECT_EQ(*r.at(1).precision, 1.0);
  EXPECT_EQ(r.at(1).n_pred, 1);
}

TEST(MetricsTest, RandomPropertiesHold) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const size_t n = 1 + numerics::UniformIndex(rng, 200);
    const auto pred = RandomLabels(n, 3, rng);
    const auto truth = RandomLabels(n, 3, rng);
    const MetricsRecord r = PrecisionRecallIou(pred, truth, {}, 3);
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<uint8_t> p2(n), t2(n);
    for (size_t i = 0; i < n; ++i) {
      p2[i] = pred[order[i]];
      t2[i] = truth[order[i]];
    }
    EXPECT_EQ(MetricsToCsv(PrecisionRecallIou(p2, t2, {}, 3)), MetricsToCsv(r));
    for (const ClassMetrics& m : r.classes) {
      if (!m.iou) continue;
      EXPECT_EQ(*m.iou, static_cast<double>(m.n_intersect) /
                            static_cast<double>(m.n_pred + m.n_truth - m.n_intersect));
      if (m.precision && m.recall) {
        EXPECT_LE(*m.iou, std::min(*m.precision, *m.recall) + 1e-15);
        if (*m.precision > 0.0 && *m.recall > 0.0) {
          EXPECT_NEAR(IouFromPreRec(*m.precision, *m.recall), *m.iou, 1e-12);
        }
      }
    }
  }
}

TEST(MetricsTest, RejectsShapeMismatchAndBadLabels) {
  EXPECT_THROW(PrecisionRecallIou({0, 1}, {0}, {}, 2), ContractError);
  EXPECT_THROW(PrecisionRecallIou({0, 1}, {0, 1}, {1}, 2), ContractError);
  EXPECT_THROW(PrecisionRecallIou({0, 2}, {0, 1}, {}, 2), ContractError);
}

TEST(IouFromPreRecTest, PublishedTriples) {
  EXPECT_NEAR(IouFromPreRec(0.752, 0.847), 0.662, 1e-3);
  EXPECT_NEAR(IouFromPreRec(0.659, 0.938), 0.632, 1e-3);
  EXPECT_EQ(IouFromPreRec(1.0, 1.0), 1.0);
}

TEST(IouFromPreRecTest, RejectsOutOfRangeInputs) {
  EXPECT_THROW(IouFromPreRec(0.0, 0.5), ContractError);
  EXPECT_THROW(IouFromPreRec(0.5, 0.0), ContractError);
  EXPECT_THROW(IouFromPreRec(1.2, 0.5), ContractError);
}

TEST(MetricsCsvTest, TextRoundTrip) {
  Rng rng(5);
  const MetricsRecord r =
      PrecisionRecallIou(RandomLabels(500, 3, rng), RandomLabels(500, 3, rng), {}, 3);
  const std::string csv = MetricsToCsv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "class,precision,recall,iou,n_pred,n_truth,n_intersect");
  const MetricsRecord back = MetricsFromCsv(csv);
  EXPECT_EQ(MetricsToCsv(back), csv);
  for (int c = 0; c < 3; ++c) {
    EXPECT_EQ(back.at(c).n_pred, r.at(c).n_pred);
    EXPECT_NEAR(*back.at(c).iou, *r.at(c).iou, 5e-4);
  }
  EXPECT_THROW(MetricsFromCsv("cls,precision\n"), ContractError);
}

TEST(MetricsCsvTest, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "evalcli_metrics_test.csv";
  const MetricsRecord r = PrecisionRecallIou({0, 1, 2, 2}, {0, 1, 1, 2}, {}, 3);
  WriteMetricsCsv(path.string(), r);
  EXPECT_EQ(MetricsToCsv(ReadMetricsCsv(path.string())), MetricsToCsv(r));
}

TEST(ModuleTogglesTest, NamesFollowCumulativeRows) {
  EXPECT_EQ((ModuleToggles{false, false, false, false, false}).Name(), "Baseline");
  EXPECT_EQ(ModuleToggles{}.Name(), "+SDNR+IN+HoMM+ASAC+HHead");
}

TEST(AblationTest, ModulesAxisHasSixCumulativeRows) {
  const auto cells = AblationCells(ExperimentConfig{}, AblationAxis::kModules);
  const std::vector<std::string> names = {"Baseline",          "+SDNR",
                                          "+SDNR+IN",          "+SDNR+IN+HoMM",
                                          "+SDNR+IN+HoMM+ASAC", "+SDNR+IN+HoMM+ASAC+HHead"};
  ASSERT_EQ(cells.size(), names.size());
  for (size_t i = 0; i < cells.size(); ++i) EXPECT_EQ(cells[i].label, names[i]);
  const auto base = cells[0].config.Resolve();
  EXPECT_FALSE(base.use_sdnr);
  EXPECT_EQ(base.net.norm, numerics::NormMode::kBatch);
  EXPECT_EQ(base.weights.homm, 0.0);
  EXPECT_FALSE(base.net.use_asac);
  EXPECT_EQ(base.net.num_head_convs, 1);
  const auto full = cells[5].config.Resolve();
  EXPECT_TRUE(full.use_sdnr);
  EXPECT_EQ(full.net.norm, numerics::NormMode::kInstance);
  EXPECT_GT(full.weights.homm, 0.0);
  EXPECT_TRUE(full.net.use_asac);
  EXPECT_EQ(full.net.num_head_convs, 2);
}

TEST(AblationTest, NormalizationAndHeadAxes) {
  const auto norms = AblationCells(ExperimentConfig{}, AblationAxis::kNormalization);
  ASSERT_EQ(norms.size(), 4u);
  EXPECT_EQ(norms[0].config.Resolve().net.norm, numerics::NormMode::kBatch);
  EXPECT_EQ(norms[3].config.Resolve().net.norm, numerics::NormMode::kGroup);
  const auto heads = AblationCells(ExperimentConfig{}, AblationAxis::kHeadConvs);
  ASSERT_EQ(heads.size(), 5u);
  for (int k = 1; k <= 5; ++k) {
    EXPECT_EQ(heads[k - 1].config.Resolve().net.num_head_convs, k);
    EXPECT_EQ(heads[k - 1].label, std::to_string(k));
  }
  for (AblationAxis a :
       {AblationAxis::kModules, AblationAxis::kNormalization, AblationAxis::kHeadConvs}) {
    EXPECT_EQ(ParseAblationAxis(AblationAxisName(a)), a);
  }
  EXPECT_THROW(ParseAblationAxis("depth"), ContractError);
}

TEST(AblationTest, CsvRoundTripWithFailedCell) {
  AblationTable t;
  t.axis = AblationAxis::kHeadConvs;
  AblationRow ok;
  ok.label = "1";
  ok.metrics = PrecisionRecallIou({0, 1, 1, 2}, {0, 1, 2, 2}, {}, 3);
  AblationRow bad;
  bad.label = "2";
  bad.error = "diverged";
  AblationRow none;
  none.label = "3";
  none.metrics = PrecisionRecallIou({0, 1}, {0, 1}, {}, 3);
  t.rows = {ok, bad, none};
  const std::string csv = AblationToCsv(t);
  EXPECT_EQ(csv,
            "head_convs,car_precision,car_recall,car_iou,pedestrian_precision,"
            "pedestrian_recall,pedestrian_iou,status\n"
            "1,50.0,100.0,50.0,100.0,50.0,50.0,ok\n"
            "2,failed,failed,failed,failed,failed,failed,failed\n"
            "3,100.0,100.0,100.0,undefined,undefined,undefined,ok\n");
  const AblationTable back = AblationFromCsv(csv);
  EXPECT_EQ(back.axis, AblationAxis::kHeadConvs);
  EXPECT_EQ(AblationToCsv(back), csv);
}

TEST(ExperimentConfigTest, FieldsRoundTrip) {
  ExperimentConfig c = TinyExperiment();
  c.seed = 17;
  c.modules = {true, false, true, false, true};
  c.norm_override = numerics::NormMode::kGroup;
  c.head_convs_override = 4;
  c.noise.block_count = 2;
  c.target_scenes.sensor_height_jitter = 0.25;
  c.train.sgd.base_lr = 0.0125;
  const KeyValues fields = c.Fields();
  const ExperimentConfig back = ExperimentConfig::FromFields(fields);
  EXPECT_EQ(back.Fields(), fields);
  EXPECT_EQ(back.Resolve().net.num_head_convs, 4);
  EXPECT_THROW(ExperimentConfig::FromFields({{"colour", "red"}}), ContractError);
  EXPECT_THROW(ExperimentConfig::FromFields({{"epochs", "many"}}), ContractError);
}

TEST(ManifestTest, SerializeParseRoundTrip) {
  RunManifest m;
  m.command = "adapt";
  m.config = TinyExperiment().Fields();
  m.epochs = {{0, 1.5, 1.0, 0.25, 0.25}, {1, 0.75, 0.5, 0.125, 0.125}};
  m.results = {{"result.car_iou", "0.5"}};
  m.wall_seconds = 12.5;
  const std::string text = m.Serialize();
  const RunManifest back = RunManifest::Parse(text);
  EXPECT_EQ(back.Serialize(), text);
  EXPECT_EQ(back.code_version, CodeVersion());
  EXPECT_EQ(back.epochs.size(), 2u);
  EXPECT_EQ(ExperimentConfig::FromFields(back.config).Fields(), m.config);
}

TEST(ManifestTest, EpochSummaryAveragesSteps) {
  std::vector<segmodel::LossLogRow> log;
  for (int i = 0; i < 6; ++i) log.push_back({i, double(i), double(i), 0.0, 1.0, 0.1});
  const auto s = SummarizeEpochs(log, 2);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].loss_total, 1.0);
  EXPECT_EQ(s[1].loss_total, 4.0);
  EXPECT_EQ(s[1].loss_mask, 1.0);
}

class TinyRunTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    config_ = new ExperimentConfig(TinyExperiment());
    data_ = new BenchmarkData(MakeBenchmark(*config_));
    renderer_ = new noiserender::RendererTrainResult(PretrainRenderer(*data_, *config_));
  }
  static void TearDownTestSuite() {
    delete renderer_;
    delete data_;
    delete config_;
  }
  static ExperimentConfig* config_;
  static BenchmarkData* data_;
  static noiserender::RendererTrainResult* renderer_;
};

ExperimentConfig* TinyRunTest::config_ = nullptr;
BenchmarkData* TinyRunTest::data_ = nullptr;
noiserender::RendererTrainResult* TinyRunTest::renderer_ = nullptr;

TEST_F(TinyRunTest, BenchmarkShapes) {
  EXPECT_EQ(data_->source.size(), 12u);
  EXPECT_EQ(data_->target.size(), 12u);
  EXPECT_EQ(data_->test.size(), 6u);
  EXPECT_EQ(data_->test_masks.size(), 6u);
  EXPECT_EQ(data_->test_clean.size(), 6u);
  EXPECT_EQ(data_->source[0].rows(), 16);
  const BenchmarkData again = MakeBenchmark(*config_);
  EXPECT_EQ(again.test[3].data(), data_->test[3].data());
}

TEST_F(TinyRunTest, RepeatedRunGivesIdenticalMetricsCsv) {
  const ExperimentResult a = RunExperiment(*config_, *data_, &renderer_->net);
  const ExperimentResult b = RunExperiment(*config_, *data_, &renderer_->net);
  EXPECT_EQ(MetricsToCsv(a.metrics), MetricsToCsv(b.metrics));
  EXPECT_EQ(a.state.log, b.state.log);
}

TEST_F(TinyRunTest, AblationRecordsFailuresAndContinues) {
  std::vector<AblationCell> cells = AblationCells(*config_, AblationAxis::kHeadConvs);
  cells.resize(2);
  AblationCell broken = cells[0];
  broken.label = "broken";
  broken.config.train.sgd.base_lr = 1e150;
  cells.insert(cells.begin() + 1, broken);
  AblationCell twin = cells[0];
  twin.label = "twin";
  cells.push_back(twin);
  const AblationTable t = RunAblation(cells, AblationAxis::kHeadConvs, *data_, &renderer_->net);
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_TRUE(t.rows[0].metrics.has_value());
  EXPECT_FALSE(t.rows[1].metrics.has_value());
  EXPECT_FALSE(t.rows[1].error.empty());
  EXPECT_TRUE(t.rows[2].metrics.has_value());
  EXPECT_EQ(MetricsToCsv(*t.rows[0].metrics), MetricsToCsv(*t.rows[3].metrics));
}

TEST_F(TinyRunTest, ManifestRebuildsRun) {
  const ExperimentResult a = RunExperiment(*config_, *data_, &renderer_->net);
  const RunManifest m = ExperimentManifest("adapt", *config_, a, 1.0);
  EXPECT_EQ(m.epochs.size(), 1u);
  const ExperimentConfig rebuilt =
      ExperimentConfig::FromFields(RunManifest::Parse(m.Serialize()).config);
  const BenchmarkData data = MakeBenchmark(rebuilt);
  const auto renderer = PretrainRenderer(data, rebuilt);
  const ExperimentResult b = RunExperiment(rebuilt, data, &renderer.net);
  EXPECT_EQ(MetricsToCsv(b.metrics), MetricsToCsv(a.metrics));
}

TEST_F(TinyRunTest, MaskFidelityBounds) {
  const MaskFidelity f = RenderedMaskFidelity(renderer_->net, data_->test_clean,
                                              data_->test_masks, {});
  for (double v : {f.kept_iou, f.dropped_iou, f.all_kept_iou}) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  EXPECT_THROW(RenderedMaskFidelity(renderer_->net, data_->test_clean, {}, {}), ContractError);
}

TEST(GradientSuiteTest, EveryOperationPasses) {
  const auto entries = RunGradientSuite();
  EXPECT_GE(entries.size(), 30u);
  for (const GradSuiteEntry& e : entries) {
    EXPECT_LT(e.max_relative_error, 1e-4) << e.name;
  }
}

}  // namespace
}  // namespace evalcli
}  // namespace epointda
