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

// Acceptance checks, one per criterion. Usage:
//   acceptance                 run every criterion
//   acceptance --criterion N   run criterion N only
// Each criterion prints "criterion N: PASS|FAIL - <detail>". The exit status
// is nonzero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "foresttune/bench.hpp"
#include "foresttune/data.hpp"
#include "foresttune/forest.hpp"
#include "foresttune/metrics.hpp"
#include "foresttune/oob.hpp"
#include "foresttune/rng.hpp"
#include "foresttune/smbo.hpp"
#include "foresttune/space.hpp"
#include "foresttune/tree.hpp"
#include "foresttune/tuner.hpp"
#include "oracles.hpp"

using namespace foresttune;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream out;
  out.precision(precision);
  out << v;
  return out.str();
}

std::vector<int> iota_features(std::size_t p) {
  std::vector<int> f(p);
  std::iota(f.begin(), f.end(), 0);
  return f;
}

// --- 1: split search against brute force ----------------------------------

Outcome criterion_split_oracle() {
  Stopwatch clock;
  Rng data_rng(20240101);
  Rng split_rng(1);
  int mismatches = 0;
  std::string first;
  for (int trial = 0; trial < 200; ++trial) {
    const bool classification = trial % 2 == 0;
    const std::size_t n = 2 + data_rng.uniform_index(49);
    const std::size_t p = 1 + data_rng.uniform_index(4);
    const Task task = classification ? Task::kClassification : Task::kRegression;
    Dataset d = fixtures::random_dataset(data_rng, n, p, task, 2 + data_rng.uniform_index(3));
    const std::vector<LevelRanks> ranks = compute_level_ranks(d);
    const TrainingFrame frame(d, ranks);
    std::vector<std::uint32_t> rows(n);
    std::iota(rows.begin(), rows.end(), 0U);
    const auto actual = best_split(frame, rows, iota_features(p),
                                   classification ? SplitRule::gini() : SplitRule::variance(),
                                   split_rng);
    std::vector<std::vector<double>> columns;
    for (const auto& c : d.columns) columns.push_back(c.values);
    const auto expected = oracle::brute_force_split(columns, d.target, classification);
    const bool same =
        actual.has_value() == expected.has_value() &&
        (!actual || (actual->feature == expected->feature &&
                     actual->threshold == expected->threshold &&
                     std::abs(actual->gain - expected->gain) <= 1e-12));
    if (!same) {
      ++mismatches;
      if (first.empty()) first = " (first at trial " + std::to_string(trial) + ")";
    }
  }
  const double t = clock.seconds();
  return {mismatches == 0 && t < 60.0,
          std::to_string(200 - mismatches) + "/200 datasets match" + first + ", " + fmt(t) + "s"};
}

// --- 2: metrics against direct formulas -----------------------------------

Outcome criterion_metric_oracles() {
  Rng rng(77);
  int auc_bad = 0;
  double worst_brier = 0.0;
  double worst_logloss = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(199);
    std::vector<double> truth(n);
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
      truth[i] = i < 2 ? static_cast<double>(i) : static_cast<double>(rng.uniform_index(2));
      // Coarse grid so ties are frequent.
      scores[i] = static_cast<double>(rng.uniform_index(20)) / 20.0;
    }
    if (auc(truth, scores) != oracle::pairwise_auc(truth, scores)) ++auc_bad;

    const std::size_t k = 2 + rng.uniform_index(4);
    std::vector<double> labels(n);
    std::vector<double> proba(n * k);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = static_cast<double>(rng.uniform_index(k));
      double total = 0.0;
      for (std::size_t c = 0; c < k; ++c) {
        proba[i * k + c] = rng.uniform_index(5) == 0 ? 0.0 : rng.uniform01();
        total += proba[i * k + c];
      }
      if (total == 0.0) {
        proba[i * k] = 1.0;
        total = 1.0;
      }
      for (std::size_t c = 0; c < k; ++c) proba[i * k + c] /= total;
    }
    worst_brier = std::max(worst_brier,
                           std::abs(brier(labels, proba, k, BrierConvention::kMulticlass) -
                                    oracle::brier_sum(labels, proba, k)));
    worst_logloss = std::max(
        worst_logloss, std::abs(logloss(labels, proba, k) - oracle::logloss(labels, proba, k)));
  }
  return {auc_bad == 0 && worst_brier <= 1e-12 && worst_logloss <= 1e-12,
          "auc mismatches " + std::to_string(auc_bad) + "/500, max brier diff " +
              fmt(worst_brier) + ", max logloss diff " + fmt(worst_logloss)};
}

// --- 3: byte-identical models across worker counts --------------------------

Outcome criterion_parallel_determinism() {
  Stopwatch clock;
  const Dataset d = synth_sparse_signal(1000, 5, 15, 3);
  HyperParams params = HyperParams::defaults(d.task, d.p());
  params.num_trees = 200;
  const std::string one = serialize_model(train(d, params, 99, 1));
  const std::string two = serialize_model(train(d, params, 99, 2));
  const std::string eight = serialize_model(train(d, params, 99, 8));
  const double t = clock.seconds();
  return {one == two && one == eight && t < 60.0,
          std::string("1 vs 2 workers ") + (one == two ? "identical" : "differ") +
              ", 1 vs 8 workers " + (one == eight ? "identical" : "differ") + " (" +
              std::to_string(one.size()) + " bytes), " + fmt(t) + "s"};
}

// --- 4: monks-2 mtry effect ------------------------------------------------

Outcome criterion_monks_mtry() {
  Stopwatch clock;
  const Dataset d = synth_monks2();
  HyperParams params = HyperParams::defaults(d.task, d.p());
  params.num_trees = 500;
  params.mtry = 2;
  const double low = oob_measure(train(d, params, 1), d, Measure::kMmce);
  params.mtry = 6;
  const double high = oob_measure(train(d, params, 1), d, Measure::kMmce);
  const double t = clock.seconds();
  return {low - high >= 0.05 && high <= 0.05 && t < 60.0,
          "OOB mmce mtry=2 " + fmt(low) + ", mtry=6 " + fmt(high) + ", difference " +
              fmt(low - high) + ", " + fmt(t) + "s"};
}

// --- 5: sparse signal needs a large mtry -----------------------------------

Outcome criterion_sparse_mtry() {
  Stopwatch clock;
  int wins = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Dataset d = synth_sparse_signal(500, 20, 480, seed);
    TuneConfig config;
    config.measure = Measure::kBrierMulticlass;
    config.num_trees = 100;
    config.warmup = 10;
    config.iters = 20;
    config.seed = seed;
    const TuneResult tuned = tune(d, config);
    HyperParams defaults = HyperParams::defaults(d.task, d.p());
    defaults.num_trees = config.num_trees;
    const double baseline = oob_measure(train(d, defaults, seed), d, Measure::kBrierMulticlass);
    const bool win = tuned.recommended.mtry > 22 && tuned.objective < baseline;
    wins += win ? 1 : 0;
    detail += " seed" + std::to_string(seed) + ":mtry=" + std::to_string(tuned.recommended.mtry) +
              ",brier=" + fmt(tuned.objective) + "/" + fmt(baseline);
  }
  const double t = clock.seconds();
  return {wins >= 4 && t < 600.0,
          std::to_string(wins) + "/5 seeds improve;" + detail + ", " + fmt(t) + "s"};
}

// --- 6: tuned beats default under cross-validation -------------------------

// Two informative uniforms combined by XOR, four noise uniforms, 10% label
// noise.
Dataset xor_dataset(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> columns(6, std::vector<double>(n));
  std::vector<double> target(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& c : columns) c[i] = rng.uniform01();
    int y = (columns[0][i] > 0.5) != (columns[1][i] > 0.5) ? 1 : 0;
    if (rng.uniform01() < 0.1) y = 1 - y;
    target[i] = y;
  }
  Dataset d = fixtures::numeric_dataset(columns, target, Task::kClassification);
  d.name = "xor";
  return d;
}

// Three Gaussian classes separated along four informative columns, plus six
// noise columns.
Dataset three_class_dataset(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> columns(10, std::vector<double>(n));
  std::vector<double> target(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t y = i % 3;
    target[i] = static_cast<double>(y);
    for (std::size_t j = 0; j < columns.size(); ++j) {
      const double shift = j < 4 && (j % 3) == y ? 1.0 : 0.0;
      columns[j][i] = rng.normal() + shift;
    }
  }
  Dataset d = fixtures::numeric_dataset(columns, target, Task::kClassification, 3);
  d.name = "three-class";
  return d;
}

std::vector<Dataset> fixture_datasets() {
  std::vector<Dataset> out;
  out.push_back(synth_monks2());
  out.back().name = "monks2";
  out.push_back(synth_sparse_signal(250, 10, 90, 11));
  out.back().name = "sparse-100";
  out.push_back(synth_sparse_signal(300, 5, 20, 12, 0.8));
  out.back().name = "sparse-25";
  out.push_back(xor_dataset(300, 13));
  out.push_back(three_class_dataset(300, 14));
  return out;
}

Outcome criterion_tuned_beats_default() {
  Stopwatch clock;
  TuneConfig config;
  config.measure = Measure::kBrierMulticlass;
  config.num_trees = 100;
  config.warmup = 10;
  config.iters = 15;
  BenchConfig bench;
  bench.folds = 5;
  bench.repetitions = 1;
  bench.measures = {Measure::kBrierMulticlass, Measure::kMmce};
  bench.seed = 2024;
  const BenchResult result = impute_failures(run_benchmark(
      fixture_datasets(), {default_method(config.num_trees), tuned_method(config)}, bench));
  double brier_default = 0.0;
  double brier_tuned = 0.0;
  double mmce_default = 0.0;
  double mmce_tuned = 0.0;
  const double count = static_cast<double>(result.datasets.size());
  for (std::size_t d = 0; d < result.datasets.size(); ++d) {
    brier_default += result.cells[d][0][0] / count;
    brier_tuned += result.cells[d][1][0] / count;
    mmce_default += result.cells[d][0][1] / count;
    mmce_tuned += result.cells[d][1][1] / count;
  }
  const double t = clock.seconds();
  return {brier_tuned <= brier_default && mmce_default - mmce_tuned >= 0.0 && t < 1800.0,
          "mean test brier tuned " + fmt(brier_tuned) + " vs default " + fmt(brier_default) +
              ", mean mmce improvement " + fmt(mmce_default - mmce_tuned) + ", " + fmt(t) +
              "s"};
}

// --- 7: SMBO on an analytic objective --------------------------------------

Outcome criterion_smbo_quadratic() {
  Stopwatch clock;
  ParamSpace space;
  space.specs.push_back({"x", TunedParam::kSampleFraction, ParamSpec::Kind::kContinuous, 0.0, 1.0});
  space.specs.push_back({"y", TunedParam::kMtry, ParamSpec::Kind::kContinuous, 0.0, 1.0});
  const Objective objective = [](const EncodedPoint& p, const ParamValues&, int) {
    return std::optional<double>(std::pow(p.coords[0] - 0.7, 2) + std::pow(p.coords[1] - 0.3, 2));
  };
  int hits = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SmboConfig config;
    config.warmup = 10;
    config.iters = 40;
    config.seed = seed;
    const SmboHistory history = run_smbo(objective, space, config);
    const auto& best = history.points[history.best_index()].point.coords;
    const double dist = std::max(std::abs(best[0] - 0.7), std::abs(best[1] - 0.3));
    hits += dist <= 0.05 ? 1 : 0;
    detail += " " + fmt(dist, 3);
  }
  const double t = clock.seconds();
  return {hits >= 9 && t < 10.0,
          std::to_string(hits) + "/10 seeds within 0.05; distances" + detail + ", " + fmt(t) +
              "s"};
}

// --- 8: expected improvement -----------------------------------------------

Outcome criterion_expected_improvement() {
  bool limits = expected_improvement(0.3, 0.0, 0.5) == 0.5 - 0.3 &&
                expected_improvement(0.7, 0.0, 0.5) == 0.0 &&
                expected_improvement(0.5, 0.0, 0.5) == 0.0;
  const double standard = expected_improvement(0.0, 1.0, 0.0);
  const bool standard_ok = std::abs(standard - 0.39894) <= 1e-5;
  Rng rng(8);
  int negative = 0;
  double worst_numeric = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double mean = (rng.uniform01() - 0.5) * 20.0;
    const double sd = rng.uniform01() < 0.1 ? 0.0 : rng.uniform01() * 5.0;
    const double best = (rng.uniform01() - 0.5) * 20.0;
    const double ei = expected_improvement(mean, sd, best);
    if (!(ei >= 0.0)) ++negative;
    if (i % 1000 == 0) {
      worst_numeric = std::max(worst_numeric, std::abs(ei - oracle::numeric_ei(mean, sd, best)));
    }
  }
  return {limits && standard_ok && negative == 0 && worst_numeric <= 1e-6,
          std::string("sd=0 limits ") + (limits ? "exact" : "wrong") + ", EI(0,1,0)=" +
              fmt(standard, 8) + ", negative " + std::to_string(negative) +
              "/100000, max diff to numeric integral " + fmt(worst_numeric)};
}

// --- 9: more trees do not hurt OOB Brier -----------------------------------

Outcome criterion_oob_convergence() {
  Stopwatch clock;
  int ok = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Dataset d = synth_sparse_signal(1000, 20, 480, seed);
    HyperParams params = HyperParams::defaults(d.task, d.p());
    params.num_trees = 1000;
    // The first 50 trees of the forest form an independent 50-tree forest.
    const OobCurve curve = oob_curve(train(d, params, seed), d, {Measure::kBrierMulticlass},
                                     {50, 1000});
    const double at50 = curve.values[0][0];
    const double at1000 = curve.values[0][1];
    ok += at1000 <= at50 ? 1 : 0;
    detail += " " + fmt(at50, 3) + "->" + fmt(at1000, 3);
  }
  const double t = clock.seconds();
  return {ok >= 9 && t < 300.0,
          std::to_string(ok) + "/10 seeds; brier 50->1000 trees" + detail + ", " + fmt(t) + "s"};
}

// --- 10: permutation importance --------------------------------------------

Outcome criterion_permutation_importance() {
  Stopwatch clock;
  Dataset with_constant = synth_sparse_signal(300, 3, 3, 5);
  with_constant.columns.push_back(
      {"constant", ColumnType::numeric(), std::vector<double>(with_constant.n(), 1.0)});
  HyperParams small = HyperParams::defaults(with_constant.task, with_constant.p());
  small.num_trees = 100;
  const ImportanceReport constant_report = permutation_importance(
      train(with_constant, small, 5), with_constant, Measure::kMmce, 2, 6);
  const double constant_importance = constant_report.entries.back().importance;

  int separated = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Dataset d = synth_sparse_signal(1000, 5, 50, seed);
    const HyperParams params = HyperParams::defaults(d.task, d.p());
    const ImportanceReport report = permutation_importance(
        train(d, params, seed), d, default_importance_measure(d.task), 1, derive_seed(seed, 1));
    double min_informative = std::numeric_limits<double>::infinity();
    double max_noise = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < report.entries.size(); ++j) {
      const double v = report.entries[j].importance;
      if (j < 5) {
        min_informative = std::min(min_informative, v);
      } else {
        max_noise = std::max(max_noise, v);
      }
    }
    separated += min_informative > max_noise ? 1 : 0;
    detail += " " + fmt(min_informative, 3) + ">" + fmt(max_noise, 3);
  }
  const double t = clock.seconds();
  return {constant_importance == 0.0 && separated >= 9 && t < 300.0,
          "constant feature importance " + fmt(constant_importance) + "; " +
              std::to_string(separated) + "/10 seeds separate (min informative > max noise)" +
              detail + ", " + fmt(t) + "s"};
}

// --- 11: recommendation rule -----------------------------------------------

Outcome criterion_recommendation() {
  // Five best points at scattered positions; the rest are clearly worse and
  // carry extreme values that would move any average they entered.
  SmboHistory h;
  h.space = default_space(Task::kClassification, 500, 10);
  const std::map<int, std::pair<double, ParamValues>> best{
      {17, {0.0, {4, 0.3, 2, std::nullopt}}},
      {3, {1.0, {6, 0.4, 3, std::nullopt}}},
      {88, {2.0, {6, 0.5, 3, std::nullopt}}},
      {41, {3.0, {5, 0.6, 4, std::nullopt}}},
      {60, {4.0, {7, 0.7, 5, std::nullopt}}},
  };
  double next = 5.0;
  for (int i = 0; i < 100; ++i) {
    DesignPoint p;
    p.iteration = i;
    if (auto it = best.find(i); it != best.end()) {
      p.objective = it->second.first;
      p.decoded = it->second.second;
    } else {
      p.objective = next;
      next += 1.0;
      p.decoded = {1, 0.9, 100, std::nullopt};
    }
    h.points.push_back(p);
  }
  const HyperParams base = HyperParams::defaults(Task::kClassification, 10);
  const HyperParams r = recommend(h, base);
  // Hand computation: mtry (4+6+6+5+7)/5 = 5.6 -> 6; fraction 2.5/5 = 0.5;
  // node size (2+3+3+4+5)/5 = 3.4 -> 3.
  const bool ok = r.mtry == 6 && std::abs(r.sample_fraction - 0.5) <= 1e-12 &&
                  r.min_node_size == 3 && recommendation_count(100) == 5;
  return {ok, "mtry " + std::to_string(r.mtry) + " (expected 6), sample fraction " +
                  fmt(r.sample_fraction, 12) + " (expected 0.5), node size " +
                  std::to_string(r.min_node_size) + " (expected 3)"};
}

// --- 12: imputation threshold and rank sums --------------------------------

BenchResult single_dataset_result(const std::vector<std::vector<double>>& folds) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  BenchResult r;
  r.datasets = {"d"};
  r.measures = {Measure::kMmce};
  r.folds = 5;
  r.repetitions = 2;
  r.fold_values.resize(1);
  r.cells.resize(1);
  r.failures.resize(1);
  r.runtimes.resize(1);
  r.first_errors.resize(1);
  for (std::size_t m = 0; m < folds.size(); ++m) {
    r.methods.push_back("m" + std::to_string(m));
    std::vector<std::optional<double>> values;
    double sum = 0.0;
    int ok = 0;
    for (double v : folds[m]) {
      if (std::isnan(v)) {
        values.emplace_back();
      } else {
        values.emplace_back(v);
        sum += v;
        ++ok;
      }
    }
    r.fold_values[0].push_back({values});
    r.cells[0].push_back({ok == 0 ? nan : sum / ok});
    r.failures[0].push_back(1.0 - ok / 10.0);
    r.runtimes[0].push_back(1.0);
    r.first_errors[0].push_back(ok == 10 ? "" : "failed");
  }
  return r;
}

Outcome criterion_imputation_and_ranks() {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const std::vector<double> competitor(10, 0.2);
  const std::vector<double> worst(10, 0.4);
  std::vector<double> at_threshold(10, 0.05);  // 2 of 10 failed: exactly 20%
  at_threshold[0] = at_threshold[1] = nan;
  std::vector<double> above(10, 0.05);  // 3 of 10 failed
  above[0] = above[1] = above[2] = nan;
  const double kept =
      impute_failures(single_dataset_result({competitor, at_threshold, worst})).cells[0][1][0];
  const BenchResult raw = single_dataset_result({competitor, above, worst});
  const double replaced = impute_failures(raw).cells[0][1][0];
  const bool threshold_ok = std::abs(kept - 0.05) <= 1e-15 && replaced == raw.cells[0][2][0];

  // Rank sums over random tables with ties.
  Rng rng(12);
  int bad_sums = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t methods = 2 + rng.uniform_index(7);
    std::vector<std::vector<double>> folds;
    for (std::size_t m = 0; m < methods; ++m) {
      folds.emplace_back(10, static_cast<double>(rng.uniform_index(4)) / 4.0);
    }
    const RankTable ranks = aggregate_ranks(single_dataset_result(folds));
    double sum = 0.0;
    for (std::size_t m = 0; m < methods; ++m) sum += ranks.per_dataset[0][m][0];
    const double expected = static_cast<double>(methods * (methods + 1)) / 2.0;
    if (sum != expected) ++bad_sums;
  }
  return {threshold_ok && bad_sums == 0,
          "20% failures keep own mean " + fmt(kept) + ", 30% failures take worst competitor " +
              fmt(replaced) + "; rank-sum violations " + std::to_string(bad_sums) + "/200"};
}

// --- 13: time estimate -----------------------------------------------------

Outcome criterion_time_formula() {
  int bad = 0;
  for (double t : {0.0, 0.25, 0.5, 1.0, 3.75, 12.0}) {
    for (int n : {1, 10, 100, 1000}) {
      if (estimate_time_formula(t, n) != t * n + 50.0) ++bad;
    }
  }
  const std::string formatted = format_duration(estimate_time_formula(0.23, 100));
  return {bad == 0 && formatted == "1M 13S",
          "mismatches " + std::to_string(bad) + "/24; t=0.23s, N=100 formats as " + formatted};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{
      criterion_split_oracle,        criterion_metric_oracles,
      criterion_parallel_determinism, criterion_monks_mtry,
      criterion_sparse_mtry,         criterion_tuned_beats_default,
      criterion_smbo_quadratic,      criterion_expected_improvement,
      criterion_oob_convergence,     criterion_permutation_importance,
      criterion_recommendation,      criterion_imputation_and_ranks,
      criterion_time_formula};

  std::vector<int> selected;
  if (argc == 1) {
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) selected.push_back(i);
  } else if (argc == 3 && std::string(argv[1]) == "--criterion") {
    const int n = std::atoi(argv[2]);
    if (n < 1 || n > static_cast<int>(criteria.size())) {
      std::cerr << "error: criterion must be between 1 and " << criteria.size() << '\n';
      return 2;
    }
    selected.push_back(n);
  } else {
    std::cerr << "usage: acceptance [--criterion N]\n";
    return 2;
  }

  bool all_pass = true;
  for (int n : selected) {
    Outcome outcome;
    try {
      outcome = criteria[static_cast<std::size_t>(n - 1)]();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << n << ": " << (outcome.pass ? "PASS" : "FAIL") << " - "
              << outcome.detail << std::endl;
    all_pass = all_pass && outcome.pass;
  }
  return all_pass ? 0 : 1;
}
