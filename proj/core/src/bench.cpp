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

#include "foresttune/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>

#include "json.hpp"

#include "foresttune/error.hpp"
#include "parallel.hpp"
#include "text_util.hpp"

#ifndef FORESTTUNE_VERSION
#define FORESTTUNE_VERSION "unknown"
#endif

namespace foresttune {

namespace {

[[noreturn]] void fail(const std::string& message) {
  throw Error("bench", message);
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct FoldOutcome {
  std::vector<std::optional<double>> values;  // per measure
  std::optional<double> seconds;
  std::string error;
};

FoldOutcome run_fold(const Dataset& train_part, const Dataset& test_part,
                     const BenchMethod& method, const std::vector<Measure>& measures,
                     std::uint64_t seed) {
  FoldOutcome outcome;
  outcome.values.assign(measures.size(), std::nullopt);
  try {
    const auto start = std::chrono::steady_clock::now();
    const Forest forest = method.fit(train_part, seed);
    outcome.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const FeatureBlock rows = forest.encode(test_part);
    Predictions predictions;
    if (forest.task() == Task::kClassification) {
      predictions.width = forest.num_classes();
      predictions.values = forest.predict_proba(rows);
    } else {
      predictions.width = 1;
      predictions.values = forest.predict(rows);
    }
    std::vector<std::optional<double>> values(measures.size());
    for (std::size_t k = 0; k < measures.size(); ++k) {
      values[k] = evaluate(measures[k], test_part.task, test_part.target, predictions).value;
      if (!std::isfinite(*values[k])) fail("non-finite " + measure_name(measures[k]));
    }
    outcome.values = std::move(values);
  } catch (const std::exception& e) {
    outcome.error = e.what();
  }
  return outcome;
}

// Worst in the measure's own direction.
bool worse(Measure measure, double a, double b) {
  return oriented(measure, a) > oriented(measure, b);
}

double mean_of(const std::vector<std::optional<double>>& values) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++count;
    }
  }
  return count == 0 ? kNan : sum / static_cast<double>(count);
}

}  // namespace

BenchResult run_benchmark(const std::vector<Dataset>& datasets,
                          const std::vector<BenchMethod>& methods, const BenchConfig& config) {
  if (datasets.empty()) fail("no datasets");
  if (methods.empty()) fail("no methods");
  if (config.measures.empty()) fail("no measures");
  for (const auto& method : methods) {
    if (!method.fit) fail("method '" + method.name + "' has no fit function");
  }
  for (const auto& dataset : datasets) {
    dataset.validate();
    for (Measure m : config.measures) {
      try {
        check_compatible(m, dataset.task, dataset.num_classes());
      } catch (const Error& e) {
        fail("dataset '" + dataset.name + "': " + e.message());
      }
    }
  }

  BenchResult result;
  for (const auto& d : datasets) result.datasets.push_back(d.name);
  for (const auto& m : methods) result.methods.push_back(m.name);
  result.measures = config.measures;
  result.folds = config.folds;
  result.repetitions = config.repetitions;
  result.seed = config.seed;

  const std::size_t num_methods = methods.size();
  const std::size_t num_measures = config.measures.size();
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    const Dataset& dataset = datasets[d];
    const CvPlan plan = make_cv_plan(dataset, config.folds, config.repetitions,
                                     derive_seed(config.seed, 2 * d));
    const std::uint64_t fit_base = derive_seed(config.seed, 2 * d + 1);
    const std::size_t iterations = result.iterations();

    // One slot per (iteration, method) keeps the outcome independent of the
    // worker count.
    std::vector<FoldOutcome> slots(iterations * num_methods);
    internal::parallel_for(iterations, config.workers, [&](std::size_t it) {
      const int rep = static_cast<int>(it) / config.folds;
      const int fold = static_cast<int>(it) % config.folds;
      const auto [train_rows, test_rows] = plan.split(rep, fold);
      const Dataset train_part = dataset.take_rows(train_rows);
      const Dataset test_part = dataset.take_rows(test_rows);
      const std::uint64_t seed = derive_seed(fit_base, it);
      for (std::size_t m = 0; m < num_methods; ++m) {
        slots[it * num_methods + m] =
            run_fold(train_part, test_part, methods[m], config.measures, seed);
      }
    });

    auto& values = result.fold_values.emplace_back(num_methods);
    auto& cells = result.cells.emplace_back(num_methods);
    auto& failures = result.failures.emplace_back(num_methods, 0.0);
    auto& runtimes = result.runtimes.emplace_back(num_methods, kNan);
    auto& errors = result.first_errors.emplace_back(num_methods);
    for (std::size_t m = 0; m < num_methods; ++m) {
      values[m].assign(num_measures, std::vector<std::optional<double>>(iterations));
      std::size_t failed = 0;
      std::vector<std::optional<double>> seconds(iterations);
      for (std::size_t it = 0; it < iterations; ++it) {
        const FoldOutcome& outcome = slots[it * num_methods + m];
        seconds[it] = outcome.seconds;
        if (!outcome.error.empty()) {
          ++failed;
          if (errors[m].empty()) errors[m] = outcome.error;
        }
        for (std::size_t k = 0; k < num_measures; ++k) values[m][k][it] = outcome.values[k];
      }
      failures[m] = static_cast<double>(failed) / static_cast<double>(iterations);
      runtimes[m] = mean_of(seconds);
      cells[m].resize(num_measures);
      for (std::size_t k = 0; k < num_measures; ++k) cells[m][k] = mean_of(values[m][k]);
    }
  }
  return result;
}

BenchResult impute_failures(const BenchResult& result) {
  BenchResult out = result;
  const std::size_t num_methods = result.methods.size();
  for (std::size_t d = 0; d < result.datasets.size(); ++d) {
    bool any_success = false;
    for (std::size_t m = 0; m < num_methods; ++m) {
      any_success = any_success || result.failures[d][m] < 1.0;
    }
    if (!any_success) fail("all methods failed on dataset '" + result.datasets[d] + "'");

    for (std::size_t m = 0; m < num_methods; ++m) {
      if (result.failures[d][m] <= kImputeFailureThreshold) continue;
      for (std::size_t k = 0; k < result.measures.size(); ++k) {
        const Measure measure = result.measures[k];
        std::optional<double> worst;
        for (std::size_t other = 0; other < num_methods; ++other) {
          const double v = result.cells[d][other][k];
          if (other == m || std::isnan(v)) continue;
          if (!worst || worse(measure, v, *worst)) worst = v;
        }
        // With no competitor to borrow from, the method's own successes are
        // the only evidence left.
        if (worst) out.cells[d][m][k] = *worst;
      }
    }
    for (std::size_t m = 0; m < num_methods; ++m) {
      for (std::size_t k = 0; k < result.measures.size(); ++k) {
        if (std::isnan(out.cells[d][m][k])) {
          fail("no value to impute for method '" + result.methods[m] + "' on dataset '" +
               result.datasets[d] + "'");
        }
      }
    }
  }
  out.imputed = true;
  return out;
}

RankTable aggregate_ranks(const BenchResult& result) {
  const std::size_t num_methods = result.methods.size();
  const std::size_t num_measures = result.measures.size();
  RankTable table;
  table.methods = result.methods;
  table.measures = result.measures;
  table.mean.assign(num_methods, std::vector<double>(num_measures, 0.0));
  for (std::size_t d = 0; d < result.datasets.size(); ++d) {
    auto& ranks = table.per_dataset.emplace_back(num_methods, std::vector<double>(num_measures));
    for (std::size_t k = 0; k < num_measures; ++k) {
      std::vector<double> score(num_methods);
      for (std::size_t m = 0; m < num_methods; ++m) {
        const double v = result.cells[d][m][k];
        if (!std::isfinite(v)) {
          fail("cell for method '" + result.methods[m] + "' on dataset '" + result.datasets[d] +
               "' is not finite; impute failures first");
        }
        score[m] = oriented(result.measures[k], v);
      }
      std::vector<std::size_t> order(num_methods);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });
      for (std::size_t i = 0; i < num_methods;) {
        std::size_t j = i;
        while (j + 1 < num_methods && score[order[j + 1]] == score[order[i]]) ++j;
        const double average = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]][k] = average;
        i = j + 1;
      }
      for (std::size_t m = 0; m < num_methods; ++m) table.mean[m][k] += ranks[m][k];
    }
  }
  const auto num_datasets = static_cast<double>(result.datasets.size());
  for (auto& row : table.mean) {
    for (double& v : row) v /= num_datasets;
  }
  return table;
}

void write_means_csv(std::ostream& out, const BenchResult& result) {
  out << "method";
  for (Measure m : result.measures) out << ',' << measure_name(m);
  out << ",training_runtime\n";
  const auto num_datasets = static_cast<double>(result.datasets.size());
  for (std::size_t m = 0; m < result.methods.size(); ++m) {
    out << internal::quote_if_needed(result.methods[m]);
    for (std::size_t k = 0; k < result.measures.size(); ++k) {
      double sum = 0.0;
      for (std::size_t d = 0; d < result.datasets.size(); ++d) sum += result.cells[d][m][k];
      out << ',' << internal::format_number(sum / num_datasets);
    }
    double runtime = 0.0;
    for (std::size_t d = 0; d < result.datasets.size(); ++d) runtime += result.runtimes[d][m];
    runtime /= num_datasets;
    out << ',' << (std::isnan(runtime) ? "NA" : internal::format_number(runtime)) << '\n';
  }
}

void write_ranks_csv(std::ostream& out, const RankTable& ranks) {
  out << "method";
  for (Measure m : ranks.measures) out << ',' << measure_name(m);
  out << '\n';
  for (std::size_t m = 0; m < ranks.methods.size(); ++m) {
    out << internal::quote_if_needed(ranks.methods[m]);
    for (double v : ranks.mean[m]) out << ',' << internal::format_number(v);
    out << '\n';
  }
}

void write_cells_csv(std::ostream& out, const BenchResult& result) {
  out << "dataset,method,measure,value,failure_fraction,runtime\n";
  for (std::size_t d = 0; d < result.datasets.size(); ++d) {
    for (std::size_t m = 0; m < result.methods.size(); ++m) {
      for (std::size_t k = 0; k < result.measures.size(); ++k) {
        const double v = result.cells[d][m][k];
        const double t = result.runtimes[d][m];
        out << internal::quote_if_needed(result.datasets[d]) << ','
            << internal::quote_if_needed(result.methods[m]) << ','
            << measure_name(result.measures[k]) << ','
            << (std::isnan(v) ? "NA" : internal::format_number(v)) << ','
            << internal::format_number(result.failures[d][m]) << ','
            << (std::isnan(t) ? "NA" : internal::format_number(t)) << '\n';
      }
    }
  }
}

void write_manifest_json(std::ostream& out, const BenchResult& result) {
  nlohmann::ordered_json doc;
  doc["foresttune_version"] = FORESTTUNE_VERSION;
  doc["seed"] = result.seed;
  doc["rng"] = "splitmix64-xoshiro256starstar";
  doc["folds"] = result.folds;
  doc["repetitions"] = result.repetitions;
  doc["imputed"] = result.imputed;
  doc["impute_threshold"] = kImputeFailureThreshold;
  doc["datasets"] = result.datasets;
  doc["methods"] = result.methods;
  std::vector<std::string> measures;
  for (Measure m : result.measures) measures.push_back(measure_name(m));
  doc["measures"] = measures;
  auto& failures = doc["failures"];
  failures = nlohmann::ordered_json::array();
  for (std::size_t d = 0; d < result.datasets.size(); ++d) {
    for (std::size_t m = 0; m < result.methods.size(); ++m) {
      if (result.failures[d][m] == 0.0) continue;
      failures.push_back({{"dataset", result.datasets[d]},
                          {"method", result.methods[m]},
                          {"fraction", result.failures[d][m]},
                          {"first_error", result.first_errors[d][m]}});
    }
  }
  out << doc.dump(2) << '\n';
}

BenchMethod default_method(int num_trees, int workers) {
  return {"default", [=](const Dataset& train_part, std::uint64_t seed) {
            HyperParams params = HyperParams::defaults(train_part.task, train_part.p());
            params.num_trees = num_trees;
            return train(train_part, params, seed, workers);
          }};
}

BenchMethod tuned_method(const TuneConfig& config) {
  return {"tuned-smbo", [=](const Dataset& train_part, std::uint64_t seed) {
            TuneConfig c = config;
            c.seed = seed;
            return tune(train_part, c).model;
          }};
}

BenchMethod mtry_walk_method(int num_trees, int workers) {
  return {"mtry-walk", [=](const Dataset& train_part, std::uint64_t seed) {
            const HyperParams params =
                tune_mtry_walk(train_part, 2.0, 0.05, num_trees, seed, workers);
            return train(train_part, params, derive_seed(seed, 1), workers);
          }};
}

BenchMethod caret_method(int num_trees, int bootstrap_iters, int workers) {
  return {"caret-grid", [=](const Dataset& train_part, std::uint64_t seed) {
            const HyperParams params =
                tune_grid_caret(train_part, bootstrap_iters, num_trees, seed, workers);
            return train(train_part, params, derive_seed(seed, 1), workers);
          }};
}

BenchMethod random_search_method(int num_trees, int points, int workers) {
  return {"random-search", [=](const Dataset& train_part, std::uint64_t seed) {
            const HyperParams params = tune_random(train_part, points,
                                                   default_measure(train_part.task), num_trees,
                                                   seed, workers);
            return train(train_part, params, derive_seed(seed, 1), workers);
          }};
}

}  // namespace foresttune
