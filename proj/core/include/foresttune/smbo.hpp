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

#ifndef FORESTTUNE_SMBO_HPP_
#define FORESTTUNE_SMBO_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "foresttune/forest.hpp"
#include "foresttune/space.hpp"

namespace foresttune {

// One evaluated configuration. `objective` is oriented: smaller is better.
struct DesignPoint {
  EncodedPoint point;
  ParamValues decoded;
  double objective = 0.0;
  int iteration = 0;
  double wall_seconds = 0.0;
  bool failed = false;  // objective was imputed
};

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

// Mean and sample standard deviation (n - 1 denominator; 0 for one value).
MeanSd summarize_predictions(std::span<const double> values);

// Regression forest over unit-cube coordinates -> objective. Fixed settings:
// 100 trees, mtry = dimension, node size 3, bootstrap of all points.
class SurrogateModel {
 public:
  explicit SurrogateModel(Forest forest) : forest_(std::move(forest)) {}

  std::size_t dimension() const { return forest_.schema().p(); }
  std::vector<double> tree_predictions(const EncodedPoint& point) const;
  MeanSd mean_sd(const EncodedPoint& point) const;
  const Forest& forest() const { return forest_; }

 private:
  Forest forest_;
};

inline constexpr int kSurrogateTrees = 100;
inline constexpr int kSurrogateNodeSize = 3;

SurrogateModel fit_surrogate(const std::vector<DesignPoint>& design, std::uint64_t seed);

// (best - mean) Phi(z) + sd phi(z) with z = (best - mean) / sd; for sd = 0
// the limit max(best - mean, 0).
double expected_improvement(double mean, double sd, double best);

struct Proposal {
  EncodedPoint point;
  double ei = 0.0;
  double mean = 0.0;
  double sd = 0.0;
};

// Draws `candidates` uniform points and returns the EI maximizer; ties go to
// the lower surrogate mean, then to the earlier draw.
Proposal propose(const SurrogateModel& model, double best_so_far, std::size_t candidates,
                 Rng& rng);

struct SmboConfig {
  int warmup = 30;
  int iters = 70;
  std::size_t candidates = 1000;
  std::uint64_t seed = 0;
};

struct SmboHistory {
  std::vector<DesignPoint> points;
  ParamSpace space;
  SmboConfig config;
  int failures = 0;

  // Index of the first point attaining the minimum objective.
  std::size_t best_index() const;
  // Running minimum of the objective after each evaluation.
  std::vector<double> cumulative_best() const;
};

// Returns the oriented objective, or nullopt on failure. Throwing a
// foresttune::Error also counts as a failure.
using Objective =
    std::function<std::optional<double>(const EncodedPoint&, const ParamValues&, int iteration)>;
using SmboLogSink = std::function<void(const DesignPoint&, double best_so_far)>;

// warmup uniform evaluations, then `iters` rounds of fit -> propose ->
// evaluate. Failed evaluations get the worst objective observed so far
// (failed warmup points are filled once the warmup finishes).
SmboHistory run_smbo(const Objective& objective, const ParamSpace& space,
                     const SmboConfig& config, const SmboLogSink& log = {});

// CSV columns: iteration,<param names>,objective,best,failed. Timing is left
// out so the file is reproducible for a fixed seed.
void write_history_csv(std::ostream& out, const SmboHistory& history);

}  // namespace foresttune

#endif  // FORESTTUNE_SMBO_HPP_
