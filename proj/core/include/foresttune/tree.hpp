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

#ifndef FORESTTUNE_TREE_HPP_
#define FORESTTUNE_TREE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "foresttune/data.hpp"
#include "foresttune/rng.hpp"

namespace foresttune {

struct SplitRule {
  enum class Kind { kGini, kVariance, kExtraRandom };

  Kind kind = Kind::kGini;
  int num_random_cuts = 1;  // only used by kExtraRandom

  static SplitRule gini() { return {Kind::kGini, 1}; }
  static SplitRule variance() { return {Kind::kVariance, 1}; }
  static SplitRule extra_random(int cuts = 1) { return {Kind::kExtraRandom, cuts}; }
  static SplitRule default_for(Task task) {
    return task == Task::kClassification ? gini() : variance();
  }

  bool valid_for(Task task) const;
  std::string name() const;
  bool operator==(const SplitRule&) const = default;
};

// Parses "gini" | "variance" | "extratrees".
std::optional<SplitRule::Kind> parse_split_rule(const std::string& name);

// 1 - sum_k (n_k / n)^2. Throws on an all-zero count vector.
double gini_impurity(std::span<const double> class_counts);

// Rank of each level code of a categorical feature once levels are ordered by
// target mean. Empty for numeric features.
using LevelRanks = std::vector<int>;

// Level order per feature: binary classification orders by the frequency of
// the second class, multiclass by the frequency of the first class,
// regression by the target mean. Levels absent from the data rank first.
// Ties keep level-code order.
std::vector<LevelRanks> compute_level_ranks(const Dataset& dataset);

// Column-major training view with categorical codes replaced by their ranks,
// plus a dense integer rank of every value among the column's sorted unique
// values (drives the sort-based split scan).
class TrainingFrame {
 public:
  TrainingFrame(const Dataset& dataset, const std::vector<LevelRanks>& ranks);

  std::size_t n() const { return n_; }
  std::size_t p() const { return values_.size(); }
  Task task() const { return task_; }
  std::size_t num_classes() const { return num_classes_; }

  std::span<const double> values(std::size_t feature) const { return values_[feature]; }
  std::span<const std::uint32_t> value_ranks(std::size_t feature) const {
    return value_ranks_[feature];
  }
  std::span<const double> uniques(std::size_t feature) const { return uniques_[feature]; }
  // Class codes (classification) or responses (regression).
  std::span<const double> target() const { return target_; }

 private:
  std::size_t n_ = 0;
  Task task_ = Task::kRegression;
  std::size_t num_classes_ = 0;
  std::vector<std::vector<double>> values_;
  std::vector<std::vector<std::uint32_t>> value_ranks_;
  std::vector<std::vector<double>> uniques_;
  std::vector<double> target_;
};

struct Split {
  int feature = -1;
  double threshold = 0.0;  // value < threshold goes left
  double gain = 0.0;
};

// Impurity of the node: Gini for classification, sum of squared deviations
// for regression. Samples may repeat.
double node_impurity(const TrainingFrame& frame, std::span<const std::uint32_t> samples);

// Decrease in impurity from splitting `samples` on `feature` at `threshold`:
// Gini minus size-weighted child Gini for classification, parent sum of
// squares minus child sums of squares for regression. nullopt if a child
// would be empty.
std::optional<double> split_gain(const TrainingFrame& frame,
                                 std::span<const std::uint32_t> samples,
                                 int feature, double threshold);

// Best split over `candidates`. Exhaustive rules scan every midpoint between
// consecutive distinct values; kExtraRandom draws num_random_cuts uniform
// cuts per feature inside the node's value range. A split must gain more
// than 1e-12 times the node impurity; ties within that tolerance go to the
// lowest (feature, threshold).
std::optional<Split> best_split(const TrainingFrame& frame,
                                std::span<const std::uint32_t> samples,
                                std::span<const int> candidates,
                                const SplitRule& rule, Rng& rng);

// Relative tolerance used for both the minimum gain and the tie window.
inline constexpr double kGainTolerance = 1e-12;

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::int32_t leaf = -1;     // index into leaf values, leaves only
  std::uint32_t count = 0;    // in-bag training samples reaching the node
  std::uint32_t depth = 0;

  bool is_leaf() const { return feature < 0; }
};

// Flattened binary tree. Node 0 is the root. Leaf payload is the class
// frequency vector (classification) or the mean response (regression).
struct Tree {
  std::vector<TreeNode> nodes;
  std::vector<double> leaf_values;
  std::size_t value_width = 1;

  std::size_t num_leaves() const {
    return value_width == 0 ? 0 : leaf_values.size() / value_width;
  }
  std::span<const double> leaf_value(std::size_t leaf) const {
    return {leaf_values.data() + leaf * value_width, value_width};
  }

  // `value(feature)` returns the transformed feature value of the row.
  template <typename ValueFn>
  std::size_t leaf_of(ValueFn&& value) const {
    std::size_t id = 0;
    while (!nodes[id].is_leaf()) {
      const TreeNode& node = nodes[id];
      id = static_cast<std::size_t>(value(static_cast<std::size_t>(node.feature)) < node.threshold
                                        ? node.left
                                        : node.right);
    }
    return static_cast<std::size_t>(nodes[id].leaf);
  }
};

struct GrowOptions {
  int mtry = 1;
  int min_node_size = 1;
  std::optional<int> max_depth;
  SplitRule rule;
};

// Grows one tree on the in-bag samples. A node is split when it holds more
// than min_node_size samples, is below max_depth, and a positive-gain split
// exists; children may end up smaller than min_node_size.
Tree grow_tree(const TrainingFrame& frame, std::vector<std::uint32_t> samples,
               const GrowOptions& options, Rng& rng);

}  // namespace foresttune

#endif  // FORESTTUNE_TREE_HPP_
