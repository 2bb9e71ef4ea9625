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

#include "foresttune/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "foresttune/error.hpp"

namespace foresttune {

namespace {

[[noreturn]] void fail(const std::string& message) {
  throw Error("forest", message);
}

// Cut strictly between two consecutive distinct values, so that
// `lo < cut <= hi` holds even when the midpoint rounds onto an endpoint.
double midpoint(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2.0;
  return (mid > lo && mid <= hi) ? mid : hi;
}

bool all_equal(std::span<const double> target,
               std::span<const std::uint32_t> samples) {
  const double first = target[samples.front()];
  return std::all_of(samples.begin(), samples.end(),
                     [&](std::uint32_t s) { return target[s] == first; });
}

// Tracks the running best under the tolerance rule shared by all split
// searches: first acceptance needs gain > tol, a later candidate must beat
// the incumbent by more than tol.
class BestTracker {
 public:
  explicit BestTracker(double tol) : tol_(tol) {}

  void offer(int feature, double threshold, double gain) {
    if (!best_) {
      if (gain > tol_) best_ = Split{feature, threshold, gain};
    } else if (gain > best_->gain + tol_) {
      best_ = Split{feature, threshold, gain};
    }
  }
  std::optional<Split> result() const { return best_; }

 private:
  double tol_;
  std::optional<Split> best_;
};

void scan_classification(const TrainingFrame& frame,
                         std::span<const std::uint32_t> samples, int feature,
                         double parent_gini, std::vector<std::uint64_t>& keys,
                         std::vector<double>& left_counts,
                         std::span<const double> parent_counts,
                         BestTracker& tracker) {
  const auto ranks = frame.value_ranks(static_cast<std::size_t>(feature));
  const auto uniques = frame.uniques(static_cast<std::size_t>(feature));
  const auto target = frame.target();
  const std::size_t n = samples.size();
  keys.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t s = samples[i];
    keys[i] = (static_cast<std::uint64_t>(ranks[s]) << 32) |
              static_cast<std::uint64_t>(target[s]);
  }
  std::sort(keys.begin(), keys.end());
  if ((keys.front() >> 32) == (keys.back() >> 32)) return;

  std::fill(left_counts.begin(), left_counts.end(), 0.0);
  double left_sq = 0.0;
  double right_sq = 0.0;
  for (double c : parent_counts) right_sq += c * c;
  const double total = static_cast<double>(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto cls = static_cast<std::size_t>(keys[i] & 0xFFFFFFFFULL);
    const double l = left_counts[cls];
    const double r = parent_counts[cls] - l;
    left_sq += 2.0 * l + 1.0;
    right_sq -= 2.0 * r - 1.0;
    left_counts[cls] = l + 1.0;
    const std::uint64_t rank = keys[i] >> 32;
    const std::uint64_t next_rank = keys[i + 1] >> 32;
    if (rank == next_rank) continue;
    const double nl = static_cast<double>(i + 1);
    const double nr = total - nl;
    const double gini_left = 1.0 - left_sq / (nl * nl);
    const double gini_right = 1.0 - right_sq / (nr * nr);
    const double gain =
        parent_gini - (nl / total) * gini_left - (nr / total) * gini_right;
    tracker.offer(feature, midpoint(uniques[rank], uniques[next_rank]), gain);
  }
}

void scan_regression(const TrainingFrame& frame,
                     std::span<const std::uint32_t> samples, int feature,
                     std::span<const double> centered,
                     std::vector<std::uint64_t>& keys, BestTracker& tracker) {
  const auto ranks = frame.value_ranks(static_cast<std::size_t>(feature));
  const auto uniques = frame.uniques(static_cast<std::size_t>(feature));
  const std::size_t n = samples.size();
  keys.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    keys[i] = (static_cast<std::uint64_t>(ranks[samples[i]]) << 32) |
              static_cast<std::uint64_t>(i);
  }
  std::sort(keys.begin(), keys.end());
  if ((keys.front() >> 32) == (keys.back() >> 32)) return;

  double sum = 0.0;
  for (double d : centered) sum += d;
  const double total = static_cast<double>(n);
  const double parent_term = sum * sum / total;
  double left_sum = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    left_sum += centered[keys[i] & 0xFFFFFFFFULL];
    const std::uint64_t rank = keys[i] >> 32;
    const std::uint64_t next_rank = keys[i + 1] >> 32;
    if (rank == next_rank) continue;
    const double nl = static_cast<double>(i + 1);
    const double nr = total - nl;
    const double right_sum = sum - left_sum;
    const double gain =
        left_sum * left_sum / nl + right_sum * right_sum / nr - parent_term;
    tracker.offer(feature, midpoint(uniques[rank], uniques[next_rank]), gain);
  }
}

}  // namespace

bool SplitRule::valid_for(Task task) const {
  switch (kind) {
    case Kind::kGini:
      return task == Task::kClassification;
    case Kind::kVariance:
      return task == Task::kRegression;
    case Kind::kExtraRandom:
      return num_random_cuts >= 1;
  }
  return false;
}

std::string SplitRule::name() const {
  switch (kind) {
    case Kind::kGini:
      return "gini";
    case Kind::kVariance:
      return "variance";
    case Kind::kExtraRandom:
      return "extratrees";
  }
  return "unknown";
}

std::optional<SplitRule::Kind> parse_split_rule(const std::string& name) {
  if (name == "gini") return SplitRule::Kind::kGini;
  if (name == "variance") return SplitRule::Kind::kVariance;
  if (name == "extratrees") return SplitRule::Kind::kExtraRandom;
  return std::nullopt;
}

double gini_impurity(std::span<const double> class_counts) {
  double total = 0.0;
  for (double c : class_counts) {
    if (c < 0.0) fail("negative class count");
    total += c;
  }
  if (total <= 0.0) fail("gini impurity of an empty node");
  double sum_sq = 0.0;
  for (double c : class_counts) {
    const double share = c / total;
    sum_sq += share * share;
  }
  return 1.0 - sum_sq;
}

std::vector<LevelRanks> compute_level_ranks(const Dataset& dataset) {
  std::vector<LevelRanks> out(dataset.p());
  const std::size_t n = dataset.n();
  for (std::size_t j = 0; j < dataset.p(); ++j) {
    const Column& column = dataset.columns[j];
    if (!column.type.is_categorical()) continue;
    const std::size_t levels = column.type.levels.size();
    std::vector<double> score_sum(levels, 0.0);
    std::vector<double> count(levels, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto level = static_cast<std::size_t>(column.values[i]);
      double contribution = dataset.target[i];
      if (dataset.task == Task::kClassification) {
        const double focus = dataset.num_classes() == 2 ? 1.0 : 0.0;
        contribution = dataset.target[i] == focus ? 1.0 : 0.0;
      }
      score_sum[level] += contribution;
      count[level] += 1.0;
    }
    std::vector<std::size_t> order(levels);
    std::iota(order.begin(), order.end(), 0);
    auto score = [&](std::size_t level) {
      return count[level] > 0.0 ? score_sum[level] / count[level]
                                : -std::numeric_limits<double>::infinity();
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return score(a) < score(b);
    });
    LevelRanks ranks(levels);
    for (std::size_t r = 0; r < levels; ++r) ranks[order[r]] = static_cast<int>(r);
    out[j] = std::move(ranks);
  }
  return out;
}

TrainingFrame::TrainingFrame(const Dataset& dataset,
                             const std::vector<LevelRanks>& ranks)
    : n_(dataset.n()),
      task_(dataset.task),
      num_classes_(dataset.num_classes()),
      target_(dataset.target) {
  if (ranks.size() != dataset.p()) fail("level rank table does not match dataset");
  if (n_ >= (std::size_t{1} << 32)) fail("too many observations");
  values_.resize(dataset.p());
  value_ranks_.resize(dataset.p());
  uniques_.resize(dataset.p());
  std::vector<std::uint32_t> order(n_);
  for (std::size_t j = 0; j < dataset.p(); ++j) {
    const Column& column = dataset.columns[j];
    auto& values = values_[j];
    values.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      values[i] = column.type.is_categorical()
                      ? static_cast<double>(
                            ranks[j].at(static_cast<std::size_t>(column.values[i])))
                      : column.values[i];
    }
    std::iota(order.begin(), order.end(), 0U);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return values[a] < values[b];
    });
    auto& value_ranks = value_ranks_[j];
    auto& uniques = uniques_[j];
    value_ranks.resize(n_);
    for (std::uint32_t idx : order) {
      if (uniques.empty() || uniques.back() != values[idx]) uniques.push_back(values[idx]);
      value_ranks[idx] = static_cast<std::uint32_t>(uniques.size() - 1);
    }
  }
}

double node_impurity(const TrainingFrame& frame,
                     std::span<const std::uint32_t> samples) {
  if (samples.empty()) fail("impurity of an empty node");
  const auto target = frame.target();
  if (frame.task() == Task::kClassification) {
    std::vector<double> counts(frame.num_classes(), 0.0);
    for (std::uint32_t s : samples) counts[static_cast<std::size_t>(target[s])] += 1.0;
    return gini_impurity(counts);
  }
  if (all_equal(target, samples)) return 0.0;
  double mean = 0.0;
  for (std::uint32_t s : samples) mean += target[s];
  mean /= static_cast<double>(samples.size());
  double ss = 0.0;
  for (std::uint32_t s : samples) ss += (target[s] - mean) * (target[s] - mean);
  return ss;
}

std::optional<double> split_gain(const TrainingFrame& frame,
                                 std::span<const std::uint32_t> samples,
                                 int feature, double threshold) {
  const auto values = frame.values(static_cast<std::size_t>(feature));
  std::vector<std::uint32_t> left;
  std::vector<std::uint32_t> right;
  for (std::uint32_t s : samples) (values[s] < threshold ? left : right).push_back(s);
  if (left.empty() || right.empty()) return std::nullopt;
  const double parent = node_impurity(frame, samples);
  const double l = node_impurity(frame, left);
  const double r = node_impurity(frame, right);
  if (frame.task() == Task::kClassification) {
    const double total = static_cast<double>(samples.size());
    return parent - (static_cast<double>(left.size()) / total) * l -
           (static_cast<double>(right.size()) / total) * r;
  }
  return parent - l - r;
}

std::optional<Split> best_split(const TrainingFrame& frame,
                                std::span<const std::uint32_t> samples,
                                std::span<const int> candidates,
                                const SplitRule& rule, Rng& rng) {
  if (samples.size() < 2 || candidates.empty()) return std::nullopt;
  if (!rule.valid_for(frame.task())) {
    fail("split rule '" + rule.name() + "' is not valid for " +
         task_name(frame.task()));
  }
  const double parent = node_impurity(frame, samples);
  if (parent <= 0.0) return std::nullopt;

  std::vector<int> features(candidates.begin(), candidates.end());
  std::sort(features.begin(), features.end());
  BestTracker tracker(kGainTolerance * parent);

  if (rule.kind == SplitRule::Kind::kExtraRandom) {
    for (int feature : features) {
      const auto values = frame.values(static_cast<std::size_t>(feature));
      double lo = values[samples.front()];
      double hi = lo;
      for (std::uint32_t s : samples) {
        lo = std::min(lo, values[s]);
        hi = std::max(hi, values[s]);
      }
      if (!(lo < hi)) continue;
      for (int k = 0; k < rule.num_random_cuts; ++k) {
        const double cut = lo + rng.uniform_open01() * (hi - lo);
        if (!(cut > lo && cut <= hi)) continue;
        if (auto gain = split_gain(frame, samples, feature, cut)) {
          tracker.offer(feature, cut, *gain);
        }
      }
    }
    return tracker.result();
  }

  std::vector<std::uint64_t> keys;
  if (frame.task() == Task::kClassification) {
    std::vector<double> parent_counts(frame.num_classes(), 0.0);
    const auto target = frame.target();
    for (std::uint32_t s : samples) parent_counts[static_cast<std::size_t>(target[s])] += 1.0;
    std::vector<double> left_counts(frame.num_classes(), 0.0);
    for (int feature : features) {
      scan_classification(frame, samples, feature, parent, keys, left_counts,
                          parent_counts, tracker);
    }
  } else {
    const auto target = frame.target();
    double mean = 0.0;
    for (std::uint32_t s : samples) mean += target[s];
    mean /= static_cast<double>(samples.size());
    std::vector<double> centered(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) centered[i] = target[samples[i]] - mean;
    for (int feature : features) {
      scan_regression(frame, samples, feature, centered, keys, tracker);
    }
  }
  return tracker.result();
}

Tree grow_tree(const TrainingFrame& frame, std::vector<std::uint32_t> samples,
               const GrowOptions& options, Rng& rng) {
  if (samples.empty()) fail("cannot grow a tree on an empty bag");
  const bool classification = frame.task() == Task::kClassification;
  const std::size_t p = frame.p();
  const auto mtry = static_cast<std::size_t>(options.mtry);
  if (mtry < 1 || mtry > p) fail("mtry must lie in [1, p]");

  Tree tree;
  tree.value_width = classification ? frame.num_classes() : 1;
  tree.nodes.push_back(TreeNode{});
  tree.nodes[0].count = static_cast<std::uint32_t>(samples.size());

  std::vector<int> pool(p);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> candidates(mtry);
  const auto target = frame.target();

  struct Work {
    std::size_t node;
    std::size_t begin;
    std::size_t end;
  };
  std::vector<Work> stack{{0, 0, samples.size()}};

  while (!stack.empty()) {
    const Work work = stack.back();
    stack.pop_back();
    std::span<std::uint32_t> node_samples(samples.data() + work.begin,
                                          work.end - work.begin);
    const std::uint32_t depth = tree.nodes[work.node].depth;

    std::optional<Split> split;
    const bool splittable =
        node_samples.size() > static_cast<std::size_t>(options.min_node_size) &&
        (!options.max_depth || static_cast<int>(depth) < *options.max_depth) &&
        node_impurity(frame, node_samples) > 0.0;
    if (splittable) {
      for (std::size_t i = 0; i < mtry; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(p - i));
        std::swap(pool[i], pool[j]);
        candidates[i] = pool[i];
      }
      split = best_split(frame, node_samples, candidates, options.rule, rng);
    }

    if (!split) {
      TreeNode& node = tree.nodes[work.node];
      node.leaf = static_cast<std::int32_t>(tree.num_leaves());
      if (classification) {
        std::vector<double> freq(frame.num_classes(), 0.0);
        for (std::uint32_t s : node_samples) freq[static_cast<std::size_t>(target[s])] += 1.0;
        for (double& f : freq) f /= static_cast<double>(node_samples.size());
        tree.leaf_values.insert(tree.leaf_values.end(), freq.begin(), freq.end());
      } else {
        double mean = 0.0;
        for (std::uint32_t s : node_samples) mean += target[s];
        tree.leaf_values.push_back(mean / static_cast<double>(node_samples.size()));
      }
      continue;
    }

    const auto values = frame.values(static_cast<std::size_t>(split->feature));
    auto middle = std::stable_partition(
        node_samples.begin(), node_samples.end(),
        [&](std::uint32_t s) { return values[s] < split->threshold; });
    const std::size_t mid = work.begin + static_cast<std::size_t>(middle - node_samples.begin());

    const auto left = static_cast<std::int32_t>(tree.nodes.size());
    TreeNode child;
    child.depth = depth + 1;
    child.count = static_cast<std::uint32_t>(mid - work.begin);
    tree.nodes.push_back(child);
    child.count = static_cast<std::uint32_t>(work.end - mid);
    tree.nodes.push_back(child);

    TreeNode& node = tree.nodes[work.node];
    node.feature = split->feature;
    node.threshold = split->threshold;
    node.left = left;
    node.right = left + 1;

    stack.push_back({static_cast<std::size_t>(left + 1), mid, work.end});
    stack.push_back({static_cast<std::size_t>(left), work.begin, mid});
  }
  return tree;
}

}  // namespace foresttune
