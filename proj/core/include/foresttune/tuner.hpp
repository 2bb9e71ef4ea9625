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

#ifndef FORESTTUNE_TUNER_HPP_
#define FORESTTUNE_TUNER_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "foresttune/data.hpp"
#include "foresttune/forest.hpp"
#include "foresttune/metrics.hpp"
#include "foresttune/smbo.hpp"
#include "foresttune/space.hpp"

namespace foresttune {

struct TuneConfig {
  std::optional<Measure> measure;  // default: multiclass Brier / MSE
  int num_trees = 2000;
  int warmup = 30;
  int iters = 70;
  std::set<TunedParam> tuned = kDefaultTunedParams;
  std::optional<SplitRule> split_rule;  // fixed for the whole run
  std::size_t candidates = 1000;
  int workers = 1;
  std::uint64_t seed = 0;
};

struct TuneResult {
  HyperParams recommended;
  SmboHistory history;
  Forest model;
  Measure measure = Measure::kBrierMulticlass;
  double objective = 0.0;  // OOB measure of `model`, natural direction
  double wall_seconds = 0.0;
};

using TuneLogSink = std::function<void(const std::string& line)>;

// Parameters every objective evaluation starts from: task defaults with
// config.num_trees and the configured split rule. When the sample fraction
// is tuned, sampling is without replacement. Without a tuned sample fraction
// the default bootstrap is kept, and a decoded replace=false falls back to a
// 0.632 fraction so OOB rows exist.
HyperParams tuning_base_params(const Dataset& dataset, const TuneConfig& config);

// Base params with the decoded values applied (and the replace fallback).
HyperParams params_for(const HyperParams& base, const ParamValues& values,
                       const TuneConfig& config);

// SMBO over the default space. Each evaluation trains a forest with seed
// derive_seed(config.seed, iteration) and scores its OOB measure; the final
// model uses the recommended params and config.seed.
TuneResult tune(const Dataset& dataset, const TuneConfig& config, const TuneLogSink& log = {});

// Averages the decoded parameters of the best ceil(5% of |history|) points
// (ties by evaluation order). mtry and node size are rounded half-up,
// replace is decided by majority, everything is clamped to the space
// bounds. Untuned parameters come from `base`.
HyperParams recommend(const SmboHistory& history, const HyperParams& base);

// Number of points the recommendation averages: ceil(0.05 * history size).
std::size_t recommendation_count(std::size_t history_size);

// t * evaluations + 50.
double estimate_time_formula(double training_seconds, int evaluations);
// "1M 13S", or "2H 5M 0S" past an hour.
std::string format_duration(double seconds);

struct TimeEstimate {
  double training_seconds = 0.0;
  double total_seconds = 0.0;
  std::string formatted;
};

// Times one default-params forest with config.num_trees and config.workers.
TimeEstimate estimate_time(const Dataset& dataset, const TuneConfig& config);

struct MtryWalk {
  int best_mtry = 1;
  std::vector<std::pair<int, double>> evaluated;  // in evaluation order
};

// Walks down from `start` dividing by step_factor (floor, min 1) while the
// relative error improvement is >= improve, then up from `start` multiplying
// by step_factor (ceil, max p) under the same rule. Returns the mtry with
// the lowest error; ties go to the earliest evaluation.
MtryWalk walk_mtry(int start, int p, double step_factor, double improve,
                   const std::function<double(int)>& error);

// OOB error (MMCE or MSE) driven walk from the task-default mtry.
HyperParams tune_mtry_walk(const Dataset& dataset, double step_factor = 2.0,
                           double improve = 0.05, int num_trees = 500,
                           std::uint64_t seed = 0, int workers = 1);

// {1, round_half_up((1 + p) / 2), p} without duplicates.
std::vector<int> caret_candidates(std::size_t p);

// Scores each candidate mtry by mean holdout error over bootstrap resamples
// (train on the resample, test on the rows it missed); error rate for
// classification, MSE for regression. Ties go to the smaller mtry.
HyperParams tune_grid_caret(const Dataset& dataset, int bootstrap_iters = 25,
                            int num_trees = 500, std::uint64_t seed = 0, int workers = 1);

// Uniform sample of the default space, each point scored like tune().
HyperParams tune_random(const Dataset& dataset, int points, Measure measure,
                        int num_trees = 500, std::uint64_t seed = 0, int workers = 1);

// Human-readable recommendation block for logs and the CLI. Wall time is
// left out so the block is reproducible for a fixed seed.
std::string format_recommendation(const TuneResult& result);

}  // namespace foresttune

#endif  // FORESTTUNE_TUNER_HPP_
