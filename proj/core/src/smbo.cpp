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

#include "foresttune/smbo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "foresttune/error.hpp"
#include "text_util.hpp"

namespace foresttune {

namespace {

[[noreturn]] void fail(const std::string& message) {
  throw Error("smbo", message);
}

FeatureBlock point_block(const EncodedPoint& point) {
  FeatureBlock block;
  block.rows = 1;
  for (double c : point.coords) block.columns.push_back({c});
  return block;
}

std::optional<double> safe_call(const Objective& objective, const EncodedPoint& point,
                                const ParamValues& values, int iteration) {
  try {
    auto result = objective(point, values, iteration);
    if (result && std::isfinite(*result)) return result;
  } catch (const Error&) {
  }
  return std::nullopt;
}

std::string param_value(const ParamSpec& spec, const ParamValues& values) {
  switch (spec.target) {
    case TunedParam::kMtry:
      return values.mtry ? std::to_string(*values.mtry) : "";
    case TunedParam::kSampleFraction:
      return values.sample_fraction ? internal::format_number(*values.sample_fraction) : "";
    case TunedParam::kMinNodeSize:
      return values.min_node_size ? std::to_string(*values.min_node_size) : "";
    case TunedParam::kReplace:
      return values.replace ? (*values.replace ? "true" : "false") : "";
  }
  return "";
}

}  // namespace

MeanSd summarize_predictions(std::span<const double> values) {
  if (values.empty()) fail("no predictions to summarize");
  MeanSd out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

std::vector<double> SurrogateModel::tree_predictions(const EncodedPoint& point) const {
  if (point.coords.size() != dimension()) fail("point dimension does not match the surrogate");
  const FeatureBlock block = point_block(point);
  std::vector<double> out(forest_.num_trees());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = forest_.tree_output(t, block, 0)[0];
  return out;
}

MeanSd SurrogateModel::mean_sd(const EncodedPoint& point) const {
  return summarize_predictions(tree_predictions(point));
}

SurrogateModel fit_surrogate(const std::vector<DesignPoint>& design, std::uint64_t seed) {
  if (design.size() < 2) fail("surrogate needs at least 2 design points");
  const std::size_t d = design.front().point.coords.size();
  if (d == 0) fail("surrogate needs at least one dimension");
  Dataset data;
  data.name = "design";
  data.task = Task::kRegression;
  data.target_name = "objective";
  for (std::size_t j = 0; j < d; ++j) {
    data.columns.push_back({"x" + std::to_string(j), ColumnType::numeric(), {}});
  }
  for (const auto& p : design) {
    if (p.point.coords.size() != d) fail("design points differ in dimension");
    if (!std::isfinite(p.objective)) fail("non-finite objective in design");
    for (std::size_t j = 0; j < d; ++j) data.columns[j].values.push_back(p.point.coords[j]);
    data.target.push_back(p.objective);
  }
  HyperParams params;
  params.mtry = static_cast<int>(d);
  params.sample_fraction = 1.0;
  params.replace = true;
  params.min_node_size = kSurrogateNodeSize;
  params.num_trees = kSurrogateTrees;
  params.split_rule = SplitRule::variance();
  return SurrogateModel(train(data, params, seed, 1));
}

double expected_improvement(double mean, double sd, double best) {
  if (!(sd >= 0.0)) fail("standard deviation must be non-negative");
  const double diff = best - mean;
  if (sd == 0.0) return std::max(diff, 0.0);
  const double z = diff / sd;
  const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  return std::max(diff * cdf + sd * pdf, 0.0);
}

Proposal propose(const SurrogateModel& model, double best_so_far, std::size_t candidates,
                 Rng& rng) {
  if (candidates < 1) fail("candidate count must be at least 1");
  Proposal best;
  bool have = false;
  for (std::size_t c = 0; c < candidates; ++c) {
    EncodedPoint point;
    point.coords.resize(model.dimension());
    for (double& x : point.coords) x = rng.uniform01();
    const MeanSd stats = model.mean_sd(point);
    const double ei = expected_improvement(stats.mean, stats.sd, best_so_far);
    if (!have || ei > best.ei || (ei == best.ei && stats.mean < best.mean)) {
      best = Proposal{std::move(point), ei, stats.mean, stats.sd};
      have = true;
    }
  }
  return best;
}

std::size_t SmboHistory::best_index() const {
  if (points.empty()) fail("empty history");
  std::size_t best = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].objective < points[best].objective) best = i;
  }
  return best;
}

std::vector<double> SmboHistory::cumulative_best() const {
  std::vector<double> out;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    best = std::min(best, p.objective);
    out.push_back(best);
  }
  return out;
}

SmboHistory run_smbo(const Objective& objective, const ParamSpace& space,
                     const SmboConfig& config, const SmboLogSink& log) {
  if (config.warmup < 2) fail("warmup must be at least 2");
  if (config.iters < 0) fail("iters must be non-negative");
  if (space.dimension() == 0) fail("parameter space has no dimensions");
  space.validate();

  SmboHistory history;
  history.space = space;
  history.config = config;
  Rng rng(config.seed);
  using Clock = std::chrono::steady_clock;

  auto evaluate = [&](EncodedPoint point, int iteration) {
    DesignPoint dp;
    dp.decoded = decode(space, point);
    dp.point = std::move(point);
    dp.iteration = iteration;
    const auto start = Clock::now();
    const auto value = safe_call(objective, dp.point, dp.decoded, iteration);
    dp.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (value) {
      dp.objective = *value;
    } else {
      dp.failed = true;
      ++history.failures;
    }
    return dp;
  };
  auto worst = [&] {
    double w = -std::numeric_limits<double>::infinity();
    for (const auto& p : history.points) w = std::max(w, p.objective);
    return w;
  };

  for (auto& point : sample_uniform(space, static_cast<std::size_t>(config.warmup), rng)) {
    history.points.push_back(evaluate(std::move(point), static_cast<int>(history.points.size())));
  }
  {
    double w = -std::numeric_limits<double>::infinity();
    for (const auto& p : history.points) {
      if (!p.failed) w = std::max(w, p.objective);
    }
    if (!std::isfinite(w)) fail("objective failed on every initial design point");
    for (auto& p : history.points) {
      if (p.failed) p.objective = w;
    }
  }
  if (log) {
    const auto best = history.cumulative_best();
    for (std::size_t i = 0; i < history.points.size(); ++i) log(history.points[i], best[i]);
  }

  for (int it = 0; it < config.iters; ++it) {
    const int iteration = static_cast<int>(history.points.size());
    const SurrogateModel model =
        fit_surrogate(history.points, derive_seed(config.seed, static_cast<std::uint64_t>(iteration)));
    const double best = history.points[history.best_index()].objective;
    Proposal proposal = propose(model, best, config.candidates, rng);
    DesignPoint dp = evaluate(std::move(proposal.point), iteration);
    if (dp.failed) dp.objective = worst();
    history.points.push_back(std::move(dp));
    if (log) log(history.points.back(), std::min(best, history.points.back().objective));
  }
  return history;
}

void write_history_csv(std::ostream& out, const SmboHistory& history) {
  out << "iteration";
  for (const auto& spec : history.space.specs) out << ',' << spec.name;
  out << ",objective,best,failed\n";
  const auto best = history.cumulative_best();
  for (std::size_t i = 0; i < history.points.size(); ++i) {
    const DesignPoint& p = history.points[i];
    out << p.iteration;
    for (const auto& spec : history.space.specs) out << ',' << param_value(spec, p.decoded);
    out << ',' << internal::format_number(p.objective) << ','
        << internal::format_number(best[i]) << ',' << (p.failed ? 1 : 0) << '\n';
  }
}

}  // namespace foresttune
