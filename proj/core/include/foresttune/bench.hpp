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

#ifndef FORESTTUNE_BENCH_HPP_
#define FORESTTUNE_BENCH_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "foresttune/data.hpp"
#include "foresttune/forest.hpp"
#include "foresttune/metrics.hpp"
#include "foresttune/tuner.hpp"

namespace foresttune {

// A competitor in the benchmark. `fit` sees only the training split of a
// fold, so any tuning it performs is nested inside the fold.
struct BenchMethod {
  std::string name;
  std::function<Forest(const Dataset& train, std::uint64_t seed)> fit;
};

struct BenchConfig {
  int folds = 5;
  int repetitions = 10;
  std::vector<Measure> measures;
  std::uint64_t seed = 0;
  // Folds evaluated concurrently. Methods should train single-worker when
  // this exceeds 1.
  int workers = 1;
};

// Indexing is [dataset][method][measure] for cells and
// [dataset][method][measure][iteration] for fold values, where iteration is
// rep * folds + fold.
struct BenchResult {
  std::vector<std::string> datasets;
  std::vector<std::string> methods;
  std::vector<Measure> measures;
  int folds = 0;
  int repetitions = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::vector<std::vector<std::optional<double>>>>> fold_values;
  // Mean over successful folds; NaN when a method never succeeded. After
  // impute_failures every cell is finite.
  std::vector<std::vector<std::vector<double>>> cells;
  std::vector<std::vector<double>> failures;  // failed-fold fraction
  std::vector<std::vector<double>> runtimes;  // mean fit seconds, NaN if none
  std::vector<std::vector<std::string>> first_errors;  // empty when none
  bool imputed = false;

  std::size_t iterations() const {
    return static_cast<std::size_t>(folds) * static_cast<std::size_t>(repetitions);
  }
};

inline constexpr double kImputeFailureThreshold = 0.20;

// Any exception thrown while fitting or scoring a fold marks that fold as
// failed for every measure. Measures must suit every dataset's task.
BenchResult run_benchmark(const std::vector<Dataset>& datasets,
                          const std::vector<BenchMethod>& methods, const BenchConfig& config);

// A method failing on more than 20% of iterations gets, per measure, the
// worst mean among the other methods on that dataset. Otherwise the cell is
// the mean of its successful folds.
BenchResult impute_failures(const BenchResult& result);

struct RankTable {
  std::vector<std::string> methods;
  std::vector<Measure> measures;
  std::vector<std::vector<std::vector<double>>> per_dataset;  // [dataset][method][measure]
  std::vector<std::vector<double>> mean;                      // [method][measure]
};

// Ranks 1 (best) to M per dataset and measure with average ranks for ties.
RankTable aggregate_ranks(const BenchResult& result);

// method, one column per measure, training_runtime: averages over datasets.
void write_means_csv(std::ostream& out, const BenchResult& result);
void write_ranks_csv(std::ostream& out, const RankTable& ranks);
// dataset, method, measure, value, failure_fraction, runtime
void write_cells_csv(std::ostream& out, const BenchResult& result);
void write_manifest_json(std::ostream& out, const BenchResult& result);

BenchMethod default_method(int num_trees, int workers = 1);
BenchMethod tuned_method(const TuneConfig& config);
BenchMethod mtry_walk_method(int num_trees, int workers = 1);
BenchMethod caret_method(int num_trees, int bootstrap_iters = 25, int workers = 1);
BenchMethod random_search_method(int num_trees, int points, int workers = 1);

}  // namespace foresttune

#endif  // FORESTTUNE_BENCH_HPP_
