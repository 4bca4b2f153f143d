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

#include "epointda/numerics/ops.h"
#include "epointda/numerics/rng.h"

namespace epointda {
namespace numerics {
namespace {

NdArray Random(const Shape& shape, Rng& rng) {
  NdArray out(shape);
  for (double& v : out.mutable_data()) v = UniformRange(rng, -1.0, 1.0);
  return out;
}

// args: batch, in channels, out channels, stride
void BM_Conv2dForwardBackward(benchmark::State& state) {
  Rng rng(1);
  const int64_t batch = state.range(0);
  const int64_t in = state.range(1), out = state.range(2);
  const int stride = static_cast<int>(state.range(3));
  const NdArray x = Random({batch, in, 32, 256}, rng);
  Variable kernel = Variable::Parameter(Random({out, in, 3, 3}, rng));
  Variable bias = Variable::Parameter(NdArray({out}, 0.0));
  for (auto _ : state) {
    Variable input = Variable::Parameter(x);
    Sum(Conv2d(input, kernel, bias, {stride, 1})).Backward();
    benchmark::DoNotOptimize(kernel.grad());
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_Conv2dForwardBackward)
    ->Args({4, 3, 8, 1})
    ->Args({4, 8, 8, 1})
    ->Args({4, 8, 16, 2})
    ->Args({4, 16, 16, 1})
    ->Unit(benchmark::kMillisecond);

void BM_InstanceNorm(benchmark::State& state) {
  Rng rng(2);
  const NdArray x = Random({4, 16, 32, 256}, rng);
  for (auto _ : state) {
    Variable input = Variable::Parameter(x);
    Sum(Normalize(input, NormMode::kInstance, 1e-5)).Backward();
    benchmark::DoNotOptimize(input.grad());
  }
}
BENCHMARK(BM_InstanceNorm)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace numerics
}  // namespace epointda

BENCHMARK_MAIN();
