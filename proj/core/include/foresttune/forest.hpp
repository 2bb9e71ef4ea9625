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

#ifndef FORESTTUNE_FOREST_HPP_
#define FORESTTUNE_FOREST_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "foresttune/data.hpp"
#include "foresttune/rng.hpp"
#include "foresttune/tree.hpp"

namespace foresttune {

// Random forest configuration. Defaults follow the usual conventions:
// mtry = floor(sqrt(p)) for classification and max(1, floor(p/3)) for
// regression, bootstrap sampling of all n observations, node size 1
// (classification) or 5 (regression), 500 trees.
struct HyperParams {
  int mtry = 1;
  double sample_fraction = 1.0;
  bool replace = true;
  int min_node_size = 1;
  int num_trees = 500;
  SplitRule split_rule;
  std::optional<int> max_depth;

  static HyperParams defaults(Task task, std::size_t p);

  // Throws Error("forest", ...) naming the offending field.
  void validate(Task task, std::size_t p) const;

  bool operator==(const HyperParams&) const = default;
};

int default_mtry(Task task, std::size_t p);
int default_min_node_size(Task task);

// round_half_up(fraction * n).
std::size_t bag_size(std::size_t n, double sample_fraction);

// In-bag draw for one tree: bag_size(n, fraction) indices, i.i.d. uniform
// when `replace`, otherwise a uniform subset (partial Fisher-Yates).
std::vector<std::uint32_t> draw_bag(std::size_t n, double sample_fraction,
                                    bool replace, Rng& rng);

// Everything needed to interpret raw feature rows and label predictions.
struct Schema {
  std::string target_name;
  Task task = Task::kRegression;
  std::vector<std::string> class_labels;
  std::vector<std::string> feature_names;
  std::vector<ColumnType> feature_types;

  static Schema of(const Dataset& dataset);
  std::size_t p() const { return feature_names.size(); }
  bool operator==(const Schema&) const = default;
};

// Column-major rows already mapped into the forest's split space (numeric
// values as is, categorical levels as ranks, unseen levels as -infinity).
struct FeatureBlock {
  std::size_t rows = 0;
  std::vector<std::vector<double>> columns;
};

class Forest {
 public:
  Forest() = default;
  Forest(Schema schema, HyperParams params, std::uint64_t seed,
         std::size_t training_rows, std::vector<LevelRanks> level_ranks,
         std::vector<Tree> trees, std::vector<std::vector<std::uint32_t>> bags);

  const Schema& schema() const { return schema_; }
  const HyperParams& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }
  Task task() const { return schema_.task; }
  std::size_t num_classes() const { return schema_.class_labels.size(); }
  std::size_t training_rows() const { return training_rows_; }
  std::size_t num_trees() const { return trees_.size(); }
  const std::vector<Tree>& trees() const { return trees_; }
  const std::vector<LevelRanks>& level_ranks() const { return level_ranks_; }
  // In-bag indices of tree t in draw order (a multiset when drawn with
  // replacement).
  const std::vector<std::uint32_t>& bag(std::size_t t) const { return bags_[t]; }

  // Per training row, the number of times it was drawn into tree t.
  std::vector<std::uint32_t> inbag_counts(std::size_t t) const;

  // Maps a dataset with the training schema (same feature names and kinds)
  // into split space. Categorical labels are matched by name.
  FeatureBlock encode(const Dataset& dataset) const;
  // Raw categorical codes refer to schema().feature_types[j].levels; a code
  // outside that list is an unseen level.
  double transform(std::size_t feature, double raw) const;

  // Leaf payload of tree t for row r of an encoded block.
  std::span<const double> tree_output(std::size_t t, const FeatureBlock& rows,
                                      std::size_t r) const;

  // Flattened rows x num_classes matrix of averaged leaf frequencies.
  std::vector<double> predict_proba(const FeatureBlock& rows, int workers = 1) const;
  // Class codes (argmax, ties to the earlier class) or averaged leaf means.
  std::vector<double> predict(const FeatureBlock& rows, int workers = 1) const;

 private:
  Schema schema_;
  HyperParams params_;
  std::uint64_t seed_ = 0;
  std::size_t training_rows_ = 0;
  std::vector<LevelRanks> level_ranks_;
  std::vector<Tree> trees_;
  std::vector<std::vector<std::uint32_t>> bags_;
};

// Deterministic in (dataset, params, seed) for any worker count: tree t
// draws all of its randomness from Rng(derive_seed(seed, t)).
Forest train(const Dataset& dataset, const HyperParams& params,
             std::uint64_t seed, int workers = 1);

// Argmax with ties to the lower index.
std::size_t argmax_first(std::span<const double> values);

// Out-of-bag aggregation. For classification `values` holds num_classes
// averaged frequencies per row; for regression one averaged leaf mean. Rows
// with tree_counts[i] == 0 are uncovered and their values are zero.
struct OobPrediction {
  std::size_t width = 1;
  std::vector<double> values;
  std::vector<std::uint32_t> tree_counts;

  bool covered(std::size_t row) const { return tree_counts[row] > 0; }
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * width, width};
  }
  std::size_t num_covered() const;
};

// Uses only the first `tree_limit` trees when given.
OobPrediction oob_predict(const Forest& forest, const Dataset& dataset,
                          std::optional<std::size_t> tree_limit = std::nullopt,
                          int workers = 1);
// Classification-only view of oob_predict.
OobPrediction oob_proba(const Forest& forest, const Dataset& dataset, int workers = 1);

void save_model(const Forest& forest, const std::filesystem::path& path);
Forest load_model(const std::filesystem::path& path);
// Text form written by save_model; exposed for in-memory comparisons.
std::string serialize_model(const Forest& forest);
Forest parse_model(const std::string& text);

// Reads feature rows for prediction. Columns are matched to the schema by
// header name; extra columns (e.g. the target) are ignored.
FeatureBlock read_rows_csv(const Forest& forest, const std::filesystem::path& path);

}  // namespace foresttune

#endif  // FORESTTUNE_FOREST_HPP_
