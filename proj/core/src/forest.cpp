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

#include "foresttune/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "foresttune/error.hpp"
#include "parallel.hpp"

namespace foresttune {

namespace {

[[noreturn]] void fail(const std::string& message) {
  throw Error("forest", message);
}

constexpr std::size_t kRowChunk = 256;

}  // namespace

int default_mtry(Task task, std::size_t p) {
  if (task == Task::kClassification) {
    auto m = static_cast<int>(std::floor(std::sqrt(static_cast<double>(p))));
    // Guard against sqrt rounding just below an exact square.
    while (static_cast<std::size_t>(m + 1) * static_cast<std::size_t>(m + 1) <= p) ++m;
    return std::max(m, 1);
  }
  return std::max(1, static_cast<int>(p / 3));
}

int default_min_node_size(Task task) {
  return task == Task::kClassification ? 1 : 5;
}

HyperParams HyperParams::defaults(Task task, std::size_t p) {
  HyperParams params;
  params.mtry = default_mtry(task, p);
  params.sample_fraction = 1.0;
  params.replace = true;
  params.min_node_size = default_min_node_size(task);
  params.num_trees = 500;
  params.split_rule = SplitRule::default_for(task);
  return params;
}

void HyperParams::validate(Task task, std::size_t p) const {
  if (mtry < 1 || static_cast<std::size_t>(mtry) > p) {
    fail("mtry must lie in [1, " + std::to_string(p) + "], got " + std::to_string(mtry));
  }
  if (!(sample_fraction > 0.0 && sample_fraction <= 1.0)) {
    fail("sample_fraction must lie in (0, 1]");
  }
  if (min_node_size < 1) fail("min_node_size must be at least 1");
  if (num_trees < 1) fail("num_trees must be at least 1");
  if (split_rule.kind == SplitRule::Kind::kExtraRandom && split_rule.num_random_cuts < 1) {
    fail("num_random_cuts must be at least 1");
  }
  if (!split_rule.valid_for(task)) {
    fail("split rule '" + split_rule.name() + "' is not valid for " + task_name(task));
  }
  if (max_depth && *max_depth < 1) fail("max_depth must be at least 1");
}

std::size_t bag_size(std::size_t n, double sample_fraction) {
  return static_cast<std::size_t>(
      std::floor(sample_fraction * static_cast<double>(n) + 0.5));
}

std::vector<std::uint32_t> draw_bag(std::size_t n, double sample_fraction,
                                    bool replace, Rng& rng) {
  if (!(sample_fraction > 0.0 && sample_fraction <= 1.0)) {
    fail("sample_fraction must lie in (0, 1]");
  }
  const std::size_t size = bag_size(n, sample_fraction);
  if (size == 0) {
    fail("sample_fraction " + std::to_string(sample_fraction) + " of " +
         std::to_string(n) + " observations draws an empty bag");
  }
  std::vector<std::uint32_t> bag(size);
  if (replace) {
    for (auto& b : bag) b = static_cast<std::uint32_t>(rng.uniform_index(n));
    return bag;
  }
  std::vector<std::uint32_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = static_cast<std::uint32_t>(i);
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
    std::swap(pool[i], pool[j]);
    bag[i] = pool[i];
  }
  return bag;
}

Schema Schema::of(const Dataset& dataset) {
  Schema schema;
  schema.target_name = dataset.target_name;
  schema.task = dataset.task;
  schema.class_labels = dataset.class_labels;
  for (const auto& column : dataset.columns) {
    schema.feature_names.push_back(column.name);
    schema.feature_types.push_back(column.type);
  }
  return schema;
}

Forest::Forest(Schema schema, HyperParams params, std::uint64_t seed,
               std::size_t training_rows, std::vector<LevelRanks> level_ranks,
               std::vector<Tree> trees, std::vector<std::vector<std::uint32_t>> bags)
    : schema_(std::move(schema)),
      params_(params),
      seed_(seed),
      training_rows_(training_rows),
      level_ranks_(std::move(level_ranks)),
      trees_(std::move(trees)),
      bags_(std::move(bags)) {
  if (trees_.size() != bags_.size()) fail("tree and bag counts differ");
  if (level_ranks_.size() != schema_.p()) fail("level rank table does not match schema");
}

std::vector<std::uint32_t> Forest::inbag_counts(std::size_t t) const {
  std::vector<std::uint32_t> counts(training_rows_, 0);
  for (std::uint32_t i : bags_.at(t)) ++counts.at(i);
  return counts;
}

double Forest::transform(std::size_t feature, double raw) const {
  const ColumnType& type = schema_.feature_types[feature];
  if (!type.is_categorical()) return raw;
  const auto& ranks = level_ranks_[feature];
  if (raw >= 0.0 && raw < static_cast<double>(ranks.size()) && raw == std::floor(raw)) {
    return static_cast<double>(ranks[static_cast<std::size_t>(raw)]);
  }
  return -std::numeric_limits<double>::infinity();
}

FeatureBlock Forest::encode(const Dataset& dataset) const {
  if (dataset.p() != schema_.p()) {
    fail("schema mismatch: expected " + std::to_string(schema_.p()) +
         " features, got " + std::to_string(dataset.p()));
  }
  FeatureBlock block;
  block.rows = dataset.n();
  block.columns.resize(schema_.p());
  for (std::size_t j = 0; j < schema_.p(); ++j) {
    const Column& column = dataset.columns[j];
    const ColumnType& expected = schema_.feature_types[j];
    if (column.name != schema_.feature_names[j]) {
      fail("schema mismatch: feature " + std::to_string(j) + " is '" + column.name +
           "', expected '" + schema_.feature_names[j] + "'");
    }
    if (column.type.kind != expected.kind) {
      fail("schema mismatch: feature '" + column.name + "' changed kind");
    }
    auto& out = block.columns[j];
    out.resize(block.rows);
    if (!expected.is_categorical()) {
      for (std::size_t i = 0; i < block.rows; ++i) out[i] = column.values[i];
      continue;
    }
    // Remap the dataset's level codes onto the schema's by label.
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t l = 0; l < expected.levels.size(); ++l) index.emplace(expected.levels[l], l);
    std::vector<double> remap(column.type.levels.size(), -1.0);
    for (std::size_t l = 0; l < column.type.levels.size(); ++l) {
      if (auto it = index.find(column.type.levels[l]); it != index.end()) {
        remap[l] = static_cast<double>(it->second);
      }
    }
    for (std::size_t i = 0; i < block.rows; ++i) {
      out[i] = transform(j, remap[static_cast<std::size_t>(column.values[i])]);
    }
  }
  return block;
}

std::span<const double> Forest::tree_output(std::size_t t, const FeatureBlock& rows,
                                            std::size_t r) const {
  const Tree& tree = trees_[t];
  const std::size_t leaf =
      tree.leaf_of([&](std::size_t feature) { return rows.columns[feature][r]; });
  return tree.leaf_value(leaf);
}

std::vector<double> Forest::predict_proba(const FeatureBlock& rows, int workers) const {
  if (task() != Task::kClassification) fail("predict_proba needs a classification forest");
  if (rows.columns.size() != schema_.p()) fail("schema mismatch: wrong feature count");
  const std::size_t k = num_classes();
  std::vector<double> out(rows.rows * k, 0.0);
  const std::size_t chunks = (rows.rows + kRowChunk - 1) / kRowChunk;
  internal::parallel_for(chunks, workers, [&](std::size_t chunk) {
    const std::size_t end = std::min(rows.rows, (chunk + 1) * kRowChunk);
    for (std::size_t r = chunk * kRowChunk; r < end; ++r) {
      double* acc = out.data() + r * k;
      for (std::size_t t = 0; t < trees_.size(); ++t) {
        const auto leaf = tree_output(t, rows, r);
        for (std::size_t c = 0; c < k; ++c) acc[c] += leaf[c];
      }
      for (std::size_t c = 0; c < k; ++c) acc[c] /= static_cast<double>(trees_.size());
    }
  });
  return out;
}

std::vector<double> Forest::predict(const FeatureBlock& rows, int workers) const {
  if (rows.columns.size() != schema_.p()) fail("schema mismatch: wrong feature count");
  std::vector<double> out(rows.rows, 0.0);
  if (task() == Task::kClassification) {
    const auto proba = predict_proba(rows, workers);
    const std::size_t k = num_classes();
    for (std::size_t r = 0; r < rows.rows; ++r) {
      out[r] = static_cast<double>(argmax_first({proba.data() + r * k, k}));
    }
    return out;
  }
  const std::size_t chunks = (rows.rows + kRowChunk - 1) / kRowChunk;
  internal::parallel_for(chunks, workers, [&](std::size_t chunk) {
    const std::size_t end = std::min(rows.rows, (chunk + 1) * kRowChunk);
    for (std::size_t r = chunk * kRowChunk; r < end; ++r) {
      double sum = 0.0;
      for (std::size_t t = 0; t < trees_.size(); ++t) sum += tree_output(t, rows, r)[0];
      out[r] = sum / static_cast<double>(trees_.size());
    }
  });
  return out;
}

std::size_t argmax_first(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

Forest train(const Dataset& dataset, const HyperParams& params,
             std::uint64_t seed, int workers) {
  dataset.validate();
  params.validate(dataset.task, dataset.p());
  if (workers < 1) fail("workers must be at least 1");
  const std::size_t n = dataset.n();
  if (bag_size(n, params.sample_fraction) == 0) {
    fail("sample_fraction draws an empty bag for " + std::to_string(n) + " observations");
  }

  auto level_ranks = compute_level_ranks(dataset);
  const TrainingFrame frame(dataset, level_ranks);
  const GrowOptions options{params.mtry, params.min_node_size, params.max_depth,
                            params.split_rule};

  const auto num_trees = static_cast<std::size_t>(params.num_trees);
  std::vector<Tree> trees(num_trees);
  std::vector<std::vector<std::uint32_t>> bags(num_trees);
  internal::parallel_for(num_trees, workers, [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    bags[t] = draw_bag(n, params.sample_fraction, params.replace, rng);
    trees[t] = grow_tree(frame, bags[t], options, rng);
  });
  return Forest(Schema::of(dataset), params, seed, n, std::move(level_ranks),
                std::move(trees), std::move(bags));
}

std::size_t OobPrediction::num_covered() const {
  return static_cast<std::size_t>(
      std::count_if(tree_counts.begin(), tree_counts.end(), [](auto c) { return c > 0; }));
}

OobPrediction oob_predict(const Forest& forest, const Dataset& dataset,
                          std::optional<std::size_t> tree_limit, int workers) {
  if (dataset.n() != forest.training_rows()) {
    fail("dataset has " + std::to_string(dataset.n()) + " rows but the forest was trained on " +
         std::to_string(forest.training_rows()));
  }
  const std::size_t trees = std::min(tree_limit.value_or(forest.num_trees()), forest.num_trees());
  const std::size_t n = dataset.n();
  const FeatureBlock rows = forest.encode(dataset);

  std::vector<std::vector<std::uint8_t>> inbag(trees, std::vector<std::uint8_t>(n, 0));
  for (std::size_t t = 0; t < trees; ++t) {
    for (std::uint32_t i : forest.bag(t)) inbag[t][i] = 1;
  }

  OobPrediction out;
  out.width = forest.task() == Task::kClassification ? forest.num_classes() : 1;
  out.values.assign(n * out.width, 0.0);
  out.tree_counts.assign(n, 0);
  const std::size_t chunks = (n + kRowChunk - 1) / kRowChunk;
  internal::parallel_for(chunks, workers, [&](std::size_t chunk) {
    const std::size_t end = std::min(n, (chunk + 1) * kRowChunk);
    for (std::size_t r = chunk * kRowChunk; r < end; ++r) {
      double* acc = out.values.data() + r * out.width;
      std::uint32_t count = 0;
      for (std::size_t t = 0; t < trees; ++t) {
        if (inbag[t][r]) continue;
        const auto leaf = forest.tree_output(t, rows, r);
        for (std::size_t c = 0; c < out.width; ++c) acc[c] += leaf[c];
        ++count;
      }
      out.tree_counts[r] = count;
      if (count > 0) {
        for (std::size_t c = 0; c < out.width; ++c) acc[c] /= static_cast<double>(count);
      }
    }
  });
  return out;
}

OobPrediction oob_proba(const Forest& forest, const Dataset& dataset, int workers) {
  if (forest.task() != Task::kClassification) fail("oob_proba needs a classification forest");
  return oob_predict(forest, dataset, std::nullopt, workers);
}

}  // namespace foresttune
