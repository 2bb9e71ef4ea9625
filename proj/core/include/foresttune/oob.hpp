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

#ifndef FORESTTUNE_OOB_HPP_
#define FORESTTUNE_OOB_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "foresttune/data.hpp"
#include "foresttune/forest.hpp"
#include "foresttune/metrics.hpp"

namespace foresttune {

Predictions to_predictions(const OobPrediction& oob);

// Measure on the out-of-bag aggregation of all trees. Uncovered rows are
// left out; `excluded` reports how many. Throws when no row is covered.
Evaluation oob_evaluate(const Forest& forest, const Dataset& dataset,
                        Measure measure, int workers = 1);
double oob_measure(const Forest& forest, const Dataset& dataset, Measure measure,
                   int workers = 1);

// OOB measures over growing prefixes of the forest. values[m][g] is measure
// m using the first tree_counts[g] trees; NaN when no row is covered at that
// prefix or the measure is undefined on the covered rows.
struct OobCurve {
  std::vector<int> tree_counts;
  std::vector<Measure> measures;
  std::vector<std::vector<double>> values;
};

OobCurve oob_curve(const Forest& forest, const Dataset& dataset,
                   const std::vector<Measure>& measures,
                   const std::vector<int>& grid);

// CSV columns: ntree,measure,value
void write_curve_csv(std::ostream& out, const OobCurve& curve);

struct ImportanceEntry {
  std::string feature;
  double importance = 0.0;
  double std_error = 0.0;
};

struct ImportanceReport {
  Measure measure = Measure::kMmce;
  int repetitions = 1;
  std::vector<ImportanceEntry> entries;  // one per predictor, schema order
};

// Breiman-style permutation importance. For every tree and repetition the
// feature is permuted among that tree's OOB rows; the contribution is the
// oriented measure after permutation minus before, so positive values mean
// the feature matters for every measure direction. Importance is the mean
// contribution over all (tree, repetition) pairs, std_error its standard
// deviation over those pairs divided by sqrt(count). Trees whose OOB set is
// empty or on which the measure is undefined are skipped.
ImportanceReport permutation_importance(const Forest& forest, const Dataset& dataset,
                                        Measure measure, int repetitions,
                                        std::uint64_t seed, int workers = 1);

// Default importance measure: MMCE for classification, MSE for regression.
Measure default_importance_measure(Task task);

// CSV columns: feature,importance,se
void write_importance_csv(std::ostream& out, const ImportanceReport& report);

// Spearman correlation with average ranks for ties. Identical inputs give 1;
// otherwise a constant input gives 0.
double spearman(std::span<const double> a, std::span<const double> b);

struct StabilityReport {
  std::vector<std::uint64_t> seeds;
  std::vector<ImportanceReport> reports;
  std::vector<std::vector<double>> correlation;  // symmetric, unit diagonal

  double mean_off_diagonal() const;
};

// Trains `forests` forests with seeds seed + i * seed_stride and correlates
// their importance rankings pairwise. seed_stride = 0 forces identical seeds.
StabilityReport importance_stability(const Dataset& dataset, const HyperParams& params,
                                     int forests, std::uint64_t seed,
                                     std::uint64_t seed_stride = 1, int workers = 1);

}  // namespace foresttune

#endif  // FORESTTUNE_OOB_HPP_
