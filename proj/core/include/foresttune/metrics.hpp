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

#ifndef FORESTTUNE_METRICS_HPP_
#define FORESTTUNE_METRICS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "foresttune/data.hpp"

namespace foresttune {

enum class Measure { kMmce, kAuc, kBrierBinary, kBrierMulticlass, kLogLoss, kMse };

enum class Direction { kMinimize, kMaximize };

struct MeasureInfo {
  const char* name;
  Direction direction;
  bool needs_probabilities;
  bool classification;  // false: regression only
  bool binary_only;
};

MeasureInfo measure_info(Measure measure);
inline std::string measure_name(Measure measure) { return measure_info(measure).name; }

// CLI names: mmce | auc | brier | logloss | mse. "brier" is the multiclass
// (sum over classes) convention; "binary-brier" selects the [0,1] variant.
std::optional<Measure> parse_measure(const std::string& name);

// Smaller-is-better view: maximize-measures are negated.
double oriented(Measure measure, double value);

// Default tuning measure per task: multiclass Brier or MSE.
Measure default_measure(Task task);

// Fraction of mismatching labels.
double mmce(std::span<const double> truth, std::span<const double> predicted);

// Mann-Whitney form of the area under the ROC curve; truth holds 0/1 labels,
// scores rank the positive class, tied scores count one half.
double auc(std::span<const double> truth, std::span<const double> scores);

enum class BrierConvention { kBinary, kMulticlass };

// `proba` is a flattened rows x num_classes matrix; rows must sum to 1
// within 1e-6. Binary: mean (p_1 - y)^2 in [0,1]. Multiclass: mean of
// sum_k (p_k - [y == k])^2 in [0,2].
double brier(std::span<const double> truth, std::span<const double> proba,
             std::size_t num_classes, BrierConvention convention);

inline constexpr double kLogLossEpsilon = 1e-15;

// Mean of -log(max(p_true, eps)).
double logloss(std::span<const double> truth, std::span<const double> proba,
               std::size_t num_classes, double eps = kLogLossEpsilon);

double mse(std::span<const double> truth, std::span<const double> predicted);

// Class-probability matrix (width = num_classes) or regression predictions
// (width = 1). An empty `covered` mask means every row is covered.
struct Predictions {
  std::size_t width = 1;
  std::vector<double> values;
  std::vector<bool> covered;

  std::size_t rows() const { return width == 0 ? 0 : values.size() / width; }
};

struct Evaluation {
  double value = 0.0;
  std::size_t excluded = 0;  // uncovered rows left out of the measure
};

// Checks measure/task compatibility, drops uncovered rows and dispatches.
// Classification truth holds class codes; labels come from argmax with ties
// to the earlier class.
Evaluation evaluate(Measure measure, Task task, std::span<const double> truth,
                    const Predictions& predictions);

// Throws Error("metrics", ...) if the measure cannot score this task.
void check_compatible(Measure measure, Task task, std::size_t num_classes);

}  // namespace foresttune

#endif  // FORESTTUNE_METRICS_HPP_
