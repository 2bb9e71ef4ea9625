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

#include "foresttune/oob.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "foresttune/error.hpp"
#include "parallel.hpp"
#include "text_util.hpp"

namespace foresttune {

namespace {

[[noreturn]] void fail(const std::string& message) {
  throw Error("oob", message);
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

Predictions to_predictions(const OobPrediction& oob) {
  Predictions out;
  out.width = oob.width;
  out.values = oob.values;
  out.covered.resize(oob.tree_counts.size());
  for (std::size_t i = 0; i < oob.tree_counts.size(); ++i) out.covered[i] = oob.tree_counts[i] > 0;
  return out;
}

Evaluation oob_evaluate(const Forest& forest, const Dataset& dataset, Measure measure,
                        int workers) {
  check_compatible(measure, forest.task(), forest.num_classes());
  const OobPrediction oob = oob_predict(forest, dataset, std::nullopt, workers);
  if (oob.num_covered() == 0) {
    fail("no OOB observations: every row is in-bag for every tree");
  }
  return evaluate(measure, forest.task(), dataset.target, to_predictions(oob));
}

double oob_measure(const Forest& forest, const Dataset& dataset, Measure measure,
                   int workers) {
  return oob_evaluate(forest, dataset, measure, workers).value;
}

OobCurve oob_curve(const Forest& forest, const Dataset& dataset,
                   const std::vector<Measure>& measures, const std::vector<int>& grid) {
  if (grid.empty()) fail("tree-count grid is empty");
  if (measures.empty()) fail("no measures requested");
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (grid[g] < 1 || static_cast<std::size_t>(grid[g]) > forest.num_trees()) {
      fail("tree count " + std::to_string(grid[g]) + " outside [1, " +
           std::to_string(forest.num_trees()) + "]");
    }
    if (g > 0 && grid[g] <= grid[g - 1]) fail("tree-count grid must be strictly increasing");
  }
  for (Measure m : measures) check_compatible(m, forest.task(), forest.num_classes());
  if (dataset.n() != forest.training_rows()) fail("dataset does not match the forest's training rows");

  const std::size_t n = dataset.n();
  const FeatureBlock rows = forest.encode(dataset);
  const std::size_t width = forest.task() == Task::kClassification ? forest.num_classes() : 1;
  std::vector<double> sums(n * width, 0.0);
  std::vector<std::uint32_t> counts(n, 0);

  OobCurve curve;
  curve.tree_counts = grid;
  curve.measures = measures;
  curve.values.assign(measures.size(), std::vector<double>(grid.size(), kNaN));

  std::size_t next = 0;
  std::vector<std::uint8_t> inbag(n);
  for (std::size_t t = 0; t < forest.num_trees() && next < grid.size(); ++t) {
    std::fill(inbag.begin(), inbag.end(), 0);
    for (std::uint32_t i : forest.bag(t)) inbag[i] = 1;
    for (std::size_t r = 0; r < n; ++r) {
      if (inbag[r]) continue;
      const auto leaf = forest.tree_output(t, rows, r);
      for (std::size_t c = 0; c < width; ++c) sums[r * width + c] += leaf[c];
      ++counts[r];
    }
    if (static_cast<int>(t + 1) != grid[next]) continue;

    Predictions prefix;
    prefix.width = width;
    prefix.values.assign(n * width, 0.0);
    prefix.covered.assign(n, false);
    for (std::size_t r = 0; r < n; ++r) {
      if (counts[r] == 0) continue;
      prefix.covered[r] = true;
      for (std::size_t c = 0; c < width; ++c) {
        prefix.values[r * width + c] = sums[r * width + c] / static_cast<double>(counts[r]);
      }
    }
    for (std::size_t m = 0; m < measures.size(); ++m) {
      try {
        curve.values[m][next] = evaluate(measures[m], forest.task(), dataset.target, prefix).value;
      } catch (const Error&) {
        // Undefined at this prefix (no coverage, or one class only for AUC).
      }
    }
    ++next;
  }
  return curve;
}

void write_curve_csv(std::ostream& out, const OobCurve& curve) {
  out << "ntree,measure,value\n";
  for (std::size_t g = 0; g < curve.tree_counts.size(); ++g) {
    for (std::size_t m = 0; m < curve.measures.size(); ++m) {
      const double v = curve.values[m][g];
      out << curve.tree_counts[g] << ',' << measure_name(curve.measures[m]) << ','
          << (std::isnan(v) ? std::string("NA") : internal::format_number(v)) << '\n';
    }
  }
}

Measure default_importance_measure(Task task) {
  return task == Task::kClassification ? Measure::kMmce : Measure::kMse;
}

ImportanceReport permutation_importance(const Forest& forest, const Dataset& dataset,
                                        Measure measure, int repetitions,
                                        std::uint64_t seed, int workers) {
  if (repetitions < 1) fail("repetitions must be at least 1");
  check_compatible(measure, forest.task(), forest.num_classes());
  if (dataset.n() != forest.training_rows()) fail("dataset does not match the forest's training rows");

  const std::size_t n = dataset.n();
  const std::size_t p = forest.schema().p();
  const std::size_t trees = forest.num_trees();
  const auto reps = static_cast<std::size_t>(repetitions);
  const std::size_t width = forest.task() == Task::kClassification ? forest.num_classes() : 1;
  const FeatureBlock rows = forest.encode(dataset);

  // contributions[t][j * reps + r]; NaN marks a skipped tree.
  std::vector<std::vector<double>> contributions(trees);
  internal::parallel_for(trees, workers, [&](std::size_t t) {
    std::vector<std::uint8_t> inbag(n, 0);
    for (std::uint32_t i : forest.bag(t)) inbag[i] = 1;
    std::vector<std::size_t> oob_rows;
    for (std::size_t r = 0; r < n; ++r) {
      if (!inbag[r]) oob_rows.push_back(r);
    }
    auto& out = contributions[t];
    out.assign(p * reps, kNaN);
    if (oob_rows.empty()) return;

    const Tree& tree = forest.trees()[t];
    std::vector<double> truth(oob_rows.size());
    for (std::size_t k = 0; k < oob_rows.size(); ++k) truth[k] = dataset.target[oob_rows[k]];
    Predictions pred;
    pred.width = width;
    pred.values.resize(oob_rows.size() * width);

    auto score = [&](std::size_t permuted_feature, const std::vector<double>* permuted) {
      for (std::size_t k = 0; k < oob_rows.size(); ++k) {
        const std::size_t r = oob_rows[k];
        const std::size_t leaf = tree.leaf_of([&](std::size_t f) {
          return (permuted != nullptr && f == permuted_feature) ? (*permuted)[k]
                                                                : rows.columns[f][r];
        });
        const auto value = tree.leaf_value(leaf);
        std::copy(value.begin(), value.end(), pred.values.begin() + static_cast<std::ptrdiff_t>(k * width));
      }
      return oriented(measure, evaluate(measure, forest.task(), truth, pred).value);
    };

    double baseline = 0.0;
    try {
      baseline = score(0, nullptr);
    } catch (const Error&) {
      return;
    }
    Rng tree_rng(derive_seed(seed, t));
    const std::uint64_t tree_seed = tree_rng.next();
    std::vector<double> permuted(oob_rows.size());
    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t r = 0; r < reps; ++r) {
        Rng rng(derive_seed(tree_seed, j * reps + r));
        for (std::size_t k = 0; k < oob_rows.size(); ++k) permuted[k] = rows.columns[j][oob_rows[k]];
        rng.shuffle(std::span<double>(permuted));
        out[j * reps + r] = score(j, &permuted) - baseline;
      }
    }
  });

  ImportanceReport report;
  report.measure = measure;
  report.repetitions = repetitions;
  for (std::size_t j = 0; j < p; ++j) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t t = 0; t < trees; ++t) {
      for (std::size_t r = 0; r < reps; ++r) {
        const double c = contributions[t][j * reps + r];
        if (std::isnan(c)) continue;
        sum += c;
        ++count;
      }
    }
    ImportanceEntry entry{forest.schema().feature_names[j], 0.0, 0.0};
    if (count > 0) {
      entry.importance = sum / static_cast<double>(count);
      double ss = 0.0;
      for (std::size_t t = 0; t < trees; ++t) {
        for (std::size_t r = 0; r < reps; ++r) {
          const double c = contributions[t][j * reps + r];
          if (!std::isnan(c)) ss += (c - entry.importance) * (c - entry.importance);
        }
      }
      if (count > 1) {
        entry.std_error = std::sqrt(ss / static_cast<double>(count - 1)) /
                          std::sqrt(static_cast<double>(count));
      }
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

void write_importance_csv(std::ostream& out, const ImportanceReport& report) {
  out << "feature,importance,se\n";
  for (const auto& e : report.entries) {
    out << internal::quote_if_needed(e.feature) << ',' << internal::format_number(e.importance)
        << ',' << internal::format_number(e.std_error) << '\n';
  }
}

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) fail("spearman needs two equal-length inputs of size >= 2");
  if (std::equal(a.begin(), a.end(), b.begin())) return 1.0;
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double mean = (static_cast<double>(a.size()) + 1.0) / 2.0;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (ra[i] - mean) * (rb[i] - mean);
    saa += (ra[i] - mean) * (ra[i] - mean);
    sbb += (rb[i] - mean) * (rb[i] - mean);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

double StabilityReport::mean_off_diagonal() const {
  const std::size_t m = correlation.size();
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      sum += correlation[i][j];
      ++count;
    }
  }
  return count == 0 ? kNaN : sum / static_cast<double>(count);
}

StabilityReport importance_stability(const Dataset& dataset, const HyperParams& params,
                                     int forests, std::uint64_t seed,
                                     std::uint64_t seed_stride, int workers) {
  if (forests < 2) fail("stability needs at least 2 forests");
  if (dataset.p() < 2) fail("stability needs at least 2 features");
  const Measure measure = default_importance_measure(dataset.task);
  StabilityReport out;
  std::vector<std::vector<double>> importances;
  for (int i = 0; i < forests; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i) * seed_stride;
    const Forest forest = train(dataset, params, s, workers);
    out.seeds.push_back(s);
    out.reports.push_back(permutation_importance(forest, dataset, measure, 1, s, workers));
    std::vector<double> values;
    for (const auto& e : out.reports.back().entries) values.push_back(e.importance);
    importances.push_back(std::move(values));
  }
  const auto m = static_cast<std::size_t>(forests);
  out.correlation.assign(m, std::vector<double>(m, 1.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double rho = spearman(importances[i], importances[j]);
      out.correlation[i][j] = rho;
      out.correlation[j][i] = rho;
    }
  }
  return out;
}

}  // namespace foresttune
