// Copyright 2026 The foresttune Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "foresttune/data.hpp"
#include "foresttune/forest.hpp"
#include "foresttune/oob.hpp"
#include "foresttune/tree.hpp"

using namespace foresttune;

namespace {

void BM_BestSplit(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Dataset d = synth_sparse_signal(n, 5, 15, 1);
  const std::vector<LevelRanks> ranks = compute_level_ranks(d);
  const TrainingFrame frame(d, ranks);
  std::vector<std::uint32_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0U);
  std::vector<int> features(d.p());
  std::iota(features.begin(), features.end(), 0);
  Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(best_split(frame, rows, features, SplitRule::gini(), rng));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * d.p()));
}
BENCHMARK(BM_BestSplit)->Arg(1000)->Arg(10000);

void BM_Train(benchmark::State& state) {
  const Dataset d = synth_sparse_signal(1000, 20, 80, 2);
  HyperParams params = HyperParams::defaults(d.task, d.p());
  params.num_trees = 50;
  params.mtry = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(train(d, params, 3));
}
BENCHMARK(BM_Train)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_OobBrier(benchmark::State& state) {
  const Dataset d = synth_sparse_signal(1000, 20, 80, 2);
  HyperParams params = HyperParams::defaults(d.task, d.p());
  params.num_trees = 200;
  const Forest forest = train(d, params, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oob_measure(forest, d, Measure::kBrierMulticlass));
  }
}
BENCHMARK(BM_OobBrier)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
