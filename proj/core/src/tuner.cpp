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

#include "foresttune/tuner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "foresttune/error.hpp"
#include "foresttune/oob.hpp"
#include "text_util.hpp"

namespace foresttune {

namespace {

[[noreturn]] void fail(const std::string& message) {
  throw Error("tuner", message);
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr double kNoReplaceFallbackFraction = 0.632;

std::string describe(const ParamSpace& space, const ParamValues& values) {
  std::ostringstream out;
  bool first = true;
  for (const auto& spec : space.specs) {
    if (!first) out << ' ';
    first = false;
    out << spec.name << '=';
    switch (spec.target) {
      case TunedParam::kMtry:
        out << *values.mtry;
        break;
      case TunedParam::kSampleFraction:
        out << internal::format_number(*values.sample_fraction);
        break;
      case TunedParam::kMinNodeSize:
        out << *values.min_node_size;
        break;
      case TunedParam::kReplace:
        out << (*values.replace ? "TRUE" : "FALSE");
        break;
    }
  }
  return out.str();
}

double holdout_error(const Forest& forest, const Dataset& holdout) {
  const FeatureBlock rows = forest.encode(holdout);
  const auto predicted = forest.predict(rows);
  return holdout.task == Task::kClassification ? mmce(holdout.target, predicted)
                                               : mse(holdout.target, predicted);
}

}  // namespace

HyperParams tuning_base_params(const Dataset& dataset, const TuneConfig& config) {
  HyperParams base = HyperParams::defaults(dataset.task, dataset.p());
  base.num_trees = config.num_trees;
  if (config.split_rule) base.split_rule = *config.split_rule;
  if (config.tuned.contains(TunedParam::kSampleFraction)) base.replace = false;
  return base;
}

HyperParams params_for(const HyperParams& base, const ParamValues& values,
                       const TuneConfig& config) {
  HyperParams params = base;
  values.apply_to(params);
  if (!config.tuned.contains(TunedParam::kSampleFraction) && !params.replace) {
    params.sample_fraction = kNoReplaceFallbackFraction;
  }
  return params;
}

TuneResult tune(const Dataset& dataset, const TuneConfig& config, const TuneLogSink& log) {
  const auto start = Clock::now();
  dataset.validate();
  if (config.warmup < 2) fail("warmup must be at least 2");
  if (config.iters < 0) fail("iters must be non-negative");
  if (config.num_trees < 1) fail("num_trees must be at least 1");
  if (config.tuned.empty()) fail("no parameters selected for tuning");
  const Measure measure = config.measure.value_or(default_measure(dataset.task));
  check_compatible(measure, dataset.task, dataset.num_classes());

  const ParamSpace space = default_space(dataset.task, dataset.n(), dataset.p(), config.tuned);
  const HyperParams base = tuning_base_params(dataset, config);
  base.validate(dataset.task, dataset.p());
  if (space.dimension() == 0) fail("tuned parameter space is empty for this dataset");

  if (log) {
    std::ostringstream table;
    write_space_table(table, space);
    std::istringstream lines(table.str());
    for (std::string line; std::getline(lines, line);) log("space " + line);
  }

  // Evaluation forests draw from their own stream so they never share a seed
  // with the surrogate fitted at the same iteration.
  const std::uint64_t evaluation_seed = splitmix64(config.seed);
  Objective objective = [&](const EncodedPoint&, const ParamValues& values,
                            int iteration) -> std::optional<double> {
    const HyperParams params = params_for(base, values, config);
    const Forest forest =
        train(dataset, params, derive_seed(evaluation_seed, static_cast<std::uint64_t>(iteration)),
              config.workers);
    return oriented(measure, oob_measure(forest, dataset, measure, config.workers));
  };
  SmboLogSink smbo_log;
  if (log) {
    smbo_log = [&](const DesignPoint& p, double best) {
      std::ostringstream line;
      line << "iter=" << p.iteration << ' ' << describe(space, p.decoded)
           << " objective=" << internal::format_number(oriented(measure, p.objective))
           << " best=" << internal::format_number(oriented(measure, best))
           << (p.failed ? " failed" : "");
      log(line.str());
    };
  }

  SmboConfig smbo;
  smbo.warmup = config.warmup;
  smbo.iters = config.iters;
  smbo.candidates = config.candidates;
  smbo.seed = config.seed;

  TuneResult result;
  try {
    result.history = run_smbo(objective, space, smbo, smbo_log);
  } catch (const Error& e) {
    if (e.module() == "smbo") fail("all OOB evaluations failed: " + e.message());
    throw;
  }
  if (result.history.failures == static_cast<int>(result.history.points.size())) {
    fail("all OOB evaluations failed");
  }
  result.measure = measure;
  result.recommended = params_for(base, {}, config);
  result.recommended = recommend(result.history, result.recommended);
  if (!config.tuned.contains(TunedParam::kSampleFraction) && !result.recommended.replace) {
    result.recommended.sample_fraction = kNoReplaceFallbackFraction;
  }
  result.model = train(dataset, result.recommended, config.seed, config.workers);
  result.objective = oob_measure(result.model, dataset, measure, config.workers);
  result.wall_seconds = seconds_since(start);
  return result;
}

std::size_t recommendation_count(std::size_t history_size) {
  return std::max<std::size_t>(1, (history_size * 5 + 99) / 100);
}

HyperParams recommend(const SmboHistory& history, const HyperParams& base) {
  if (history.points.empty()) fail("cannot recommend from an empty history");
  std::vector<std::size_t> order(history.points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return history.points[a].objective < history.points[b].objective;
  });
  const std::size_t k = recommendation_count(history.points.size());

  HyperParams out = base;
  for (const ParamSpec& spec : history.space.specs) {
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const ParamValues& v = history.points[order[i]].decoded;
      switch (spec.target) {
        case TunedParam::kMtry:
          sum += *v.mtry;
          break;
        case TunedParam::kSampleFraction:
          sum += *v.sample_fraction;
          break;
        case TunedParam::kMinNodeSize:
          sum += *v.min_node_size;
          break;
        case TunedParam::kReplace:
          sum += *v.replace ? 1.0 : 0.0;
          break;
      }
    }
    const double mean = sum / static_cast<double>(k);
    switch (spec.target) {
      case TunedParam::kMtry:
        out.mtry = static_cast<int>(std::clamp(static_cast<double>(round_half_up(mean)), spec.lo, spec.hi));
        break;
      case TunedParam::kSampleFraction:
        out.sample_fraction = std::clamp(mean, spec.lo, spec.hi);
        break;
      case TunedParam::kMinNodeSize:
        out.min_node_size =
            static_cast<int>(std::clamp(static_cast<double>(round_half_up(mean)), spec.lo, spec.hi));
        break;
      case TunedParam::kReplace:
        out.replace = mean >= 0.5;
        break;
    }
  }
  return out;
}

double estimate_time_formula(double training_seconds, int evaluations) {
  return training_seconds * static_cast<double>(evaluations) + 50.0;
}

std::string format_duration(double seconds) {
  const long total = std::max(0L, round_half_up(seconds));
  const long hours = total / 3600;
  const long minutes = (total % 3600) / 60;
  const long secs = total % 60;
  std::ostringstream out;
  if (hours > 0) out << hours << "H ";
  out << minutes << "M " << secs << 'S';
  return out.str();
}

TimeEstimate estimate_time(const Dataset& dataset, const TuneConfig& config) {
  HyperParams params = HyperParams::defaults(dataset.task, dataset.p());
  params.num_trees = config.num_trees;
  if (config.split_rule) params.split_rule = *config.split_rule;
  const auto start = Clock::now();
  train(dataset, params, config.seed, config.workers);
  TimeEstimate out;
  out.training_seconds = seconds_since(start);
  out.total_seconds = estimate_time_formula(out.training_seconds, config.warmup + config.iters);
  out.formatted = format_duration(out.total_seconds);
  return out;
}

MtryWalk walk_mtry(int start, int p, double step_factor, double improve,
                   const std::function<double(int)>& error) {
  if (p < 1) fail("mtry walk needs p >= 1");
  if (!(step_factor > 1.0)) fail("step factor must exceed 1");
  start = std::clamp(start, 1, p);
  MtryWalk walk;
  const double start_error = error(start);
  walk.evaluated.emplace_back(start, start_error);

  auto step = [&](bool downward) {
    int current = start;
    double current_error = start_error;
    for (;;) {
      const int next = downward
                           ? std::max(1, static_cast<int>(std::floor(current / step_factor)))
                           : std::min(p, static_cast<int>(std::ceil(current * step_factor)));
      if (next == current) return;
      const double next_error = error(next);
      walk.evaluated.emplace_back(next, next_error);
      const double gain =
          current_error > 0.0 ? 1.0 - next_error / current_error : 0.0;
      if (!(current_error > 0.0) || gain < improve) return;
      current = next;
      current_error = next_error;
    }
  };
  step(true);
  step(false);

  std::size_t best = 0;
  for (std::size_t i = 1; i < walk.evaluated.size(); ++i) {
    if (walk.evaluated[i].second < walk.evaluated[best].second) best = i;
  }
  walk.best_mtry = walk.evaluated[best].first;
  return walk;
}

HyperParams tune_mtry_walk(const Dataset& dataset, double step_factor, double improve,
                           int num_trees, std::uint64_t seed, int workers) {
  dataset.validate();
  HyperParams params = HyperParams::defaults(dataset.task, dataset.p());
  params.num_trees = num_trees;
  const Measure measure = default_importance_measure(dataset.task);
  const auto p = static_cast<int>(dataset.p());
  const MtryWalk walk = walk_mtry(params.mtry, p, step_factor, improve, [&](int mtry) {
    HyperParams candidate = params;
    candidate.mtry = mtry;
    return oob_measure(train(dataset, candidate, seed, workers), dataset, measure, workers);
  });
  params.mtry = walk.best_mtry;
  return params;
}

std::vector<int> caret_candidates(std::size_t p) {
  const int hi = static_cast<int>(p);
  std::vector<int> out{1, static_cast<int>(round_half_up((1.0 + hi) / 2.0)), hi};
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

HyperParams tune_grid_caret(const Dataset& dataset, int bootstrap_iters, int num_trees,
                            std::uint64_t seed, int workers) {
  dataset.validate();
  if (dataset.p() < 2) fail("caret grid needs at least 2 predictors");
  if (bootstrap_iters < 1) fail("bootstrap_iters must be at least 1");
  HyperParams params = HyperParams::defaults(dataset.task, dataset.p());
  params.num_trees = num_trees;
  const std::vector<int> candidates = caret_candidates(dataset.p());
  const std::size_t n = dataset.n();

  std::vector<double> total(candidates.size(), 0.0);
  int used = 0;
  Rng rng(seed);
  for (int b = 0; b < bootstrap_iters; ++b) {
    std::vector<std::size_t> sample(n);
    std::vector<std::uint8_t> drawn(n, 0);
    for (auto& s : sample) {
      s = static_cast<std::size_t>(rng.uniform_index(n));
      drawn[s] = 1;
    }
    std::vector<std::size_t> holdout;
    for (std::size_t i = 0; i < n; ++i) {
      if (!drawn[i]) holdout.push_back(i);
    }
    if (holdout.empty()) continue;
    const Dataset train_part = dataset.take_rows(sample);
    const Dataset test_part = dataset.take_rows(holdout);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      HyperParams candidate = params;
      candidate.mtry = candidates[c];
      const Forest forest =
          train(train_part, candidate, derive_seed(seed, static_cast<std::uint64_t>(b)), workers);
      total[c] += holdout_error(forest, test_part);
    }
    ++used;
  }
  if (used == 0) fail("every bootstrap resample covered all rows; no holdout to score");
  std::size_t best = 0;
  for (std::size_t c = 1; c < candidates.size(); ++c) {
    if (total[c] < total[best]) best = c;
  }
  params.mtry = candidates[best];
  return params;
}

HyperParams tune_random(const Dataset& dataset, int points, Measure measure, int num_trees,
                        std::uint64_t seed, int workers) {
  dataset.validate();
  if (points < 1) fail("points must be at least 1");
  check_compatible(measure, dataset.task, dataset.num_classes());
  TuneConfig config;
  config.num_trees = num_trees;
  config.seed = seed;
  config.workers = workers;
  const ParamSpace space = default_space(dataset.task, dataset.n(), dataset.p());
  const HyperParams base = tuning_base_params(dataset, config);
  Rng rng(seed);
  const auto sample = sample_uniform(space, static_cast<std::size_t>(points), rng);
  std::optional<HyperParams> best;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const HyperParams params = params_for(base, decode(space, sample[i]), config);
    double value = std::numeric_limits<double>::infinity();
    try {
      const Forest forest = train(dataset, params, derive_seed(seed, i), workers);
      value = oriented(measure, oob_measure(forest, dataset, measure, workers));
    } catch (const Error&) {
      continue;
    }
    if (!best || value < best_value) {
      best = params;
      best_value = value;
    }
  }
  if (!best) fail("every random configuration failed");
  return *best;
}

std::string format_recommendation(const TuneResult& result) {
  std::ostringstream out;
  const HyperParams& r = result.recommended;
  out << "Recommended parameter settings:\n";
  out << "  mtry min.node.size sample.fraction replace\n";
  out << "  " << r.mtry << ' ' << r.min_node_size << ' '
      << internal::format_number(r.sample_fraction) << ' ' << (r.replace ? "TRUE" : "FALSE")
      << '\n';
  out << "Results:\n";
  out << "  " << measure_name(result.measure) << '\n';
  out << "  " << internal::format_number(result.objective) << '\n';
  return out.str();
}

}  // namespace foresttune
