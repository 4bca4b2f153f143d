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

#include <benchmark/benchmark.h>

#include "epointda/align/moments.h"
#include "epointda/geometry/projection.h"
#include "epointda/geometry/tensor.h"
#include "epointda/noiserender/completion.h"
#include "epointda/noiserender/renderer.h"
#include "epointda/numerics/rng.h"
#include "epointda/segmodel/network.h"
#include "epointda/segmodel/objective.h"
#include "epointda/simulator/dataset.h"
#include "epointda/simulator/scene.h"

namespace epointda {
namespace {

const geometry::SensorConfig kSensor = geometry::SensorConfig::DeskScale();

geometry::RangeImage Frame(uint64_t seed) {
  return simulator::GenerateDataset({}, 1, kSensor, seed).front();
}

void BM_RaycastScan(benchmark::State& state) {
  const simulator::Scene scene = simulator::SampleScene({}, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulator::RaycastScan(scene, {}, kSensor));
  }
}
BENCHMARK(BM_RaycastScan)->Unit(benchmark::kMillisecond);

void BM_ProjectCloud(benchmark::State& state) {
  numerics::Rng rng(4);
  geometry::PointCloud cloud;
  for (int64_t i = 0; i < state.range(0); ++i) {
    cloud.points.emplace_back(numerics::UniformRange(rng, 2.0, 60.0),
                              numerics::UniformRange(rng, -40.0, 40.0),
                              numerics::UniformRange(rng, -3.0, 1.0));
    cloud.labels.push_back(0);
  }
  for (auto _ : state) benchmark::DoNotOptimize(geometry::ProjectCloud(cloud, kSensor));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ProjectCloud)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_InjectDropout(benchmark::State& state) {
  const geometry::RangeImage frame = Frame(5);
  simulator::NoiseSpec spec;
  spec.uniform_drop = 0.15;
  spec.range_coeff = 0.5;
  spec.block_count = 6;
  for (auto _ : state) benchmark::DoNotOptimize(simulator::InjectDropout(frame, spec));
}
BENCHMARK(BM_InjectDropout)->Unit(benchmark::kMicrosecond);

void BM_CompleteImage(benchmark::State& state) {
  simulator::NoiseSpec spec;
  spec.uniform_drop = 0.3;
  const geometry::RangeImage noisy = simulator::InjectDropout(Frame(6), spec).image;
  for (auto _ : state) benchmark::DoNotOptimize(noiserender::CompleteImage(noisy, {}));
}
BENCHMARK(BM_CompleteImage)->Unit(benchmark::kMillisecond);

void BM_RendererKeepProbability(benchmark::State& state) {
  const noiserender::RendererNet net({}, 7);
  const geometry::RangeImage frame = Frame(7);
  for (auto _ : state) benchmark::DoNotOptimize(net.KeepProbability({&frame}));
}
BENCHMARK(BM_RendererKeepProbability)->Unit(benchmark::kMillisecond);

// One forward/backward pass of the focal loss; arg 1 selects the full model.
void BM_SegNetStep(benchmark::State& state) {
  segmodel::SegNetConfig config;
  config.widths = {8, 16, 32};
  if (state.range(0) == 0) {
    config.norm = numerics::NormMode::kBatch;
    config.use_asac = false;
    config.num_head_convs = 1;
  }
  segmodel::SegNet net(config, 8);
  std::vector<geometry::RangeImage> frames;
  for (uint64_t s = 0; s < 8; ++s) frames.push_back(Frame(100 + s));
  std::vector<const geometry::RangeImage*> ptrs;
  std::vector<uint8_t> labels;
  for (const auto& f : frames) {
    ptrs.push_back(&f);
    labels.insert(labels.end(), f.labels().begin(), f.labels().end());
  }
  const numerics::NdArray x = geometry::ImagesToTensor(ptrs, config.input_scale);
  for (auto _ : state) {
    const numerics::Variable input = numerics::Variable::Constant(x);
    numerics::Variable loss =
        segmodel::FocalLoss(net.Forward(input, true).logits, labels, config.focal_gamma);
    loss.Backward();
    benchmark::DoNotOptimize(loss.value());
  }
  state.SetItemsProcessed(state.iterations() * 8);
}
BENCHMARK(BM_SegNetStep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_HommLoss(benchmark::State& state) {
  numerics::Rng rng(9);
  numerics::NdArray s({20, state.range(0)}), t({20, state.range(0)});
  for (double& v : s.mutable_data()) v = numerics::UniformRange(rng, -1.0, 1.0);
  for (double& v : t.mutable_data()) v = numerics::UniformRange(rng, -1.0, 1.0);
  align::HommConfig config;
  config.order = 3;
  config.mode = align::HommMode::kMonteCarlo;
  for (auto _ : state) {
    numerics::Variable a = numerics::Variable::Parameter(s);
    numerics::Variable loss =
        align::HommLoss(a, numerics::Variable::Constant(t), config);
    loss.Backward();
    benchmark::DoNotOptimize(a.grad());
  }
}
BENCHMARK(BM_HommLoss)->Arg(512)->Arg(4096)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace epointda
