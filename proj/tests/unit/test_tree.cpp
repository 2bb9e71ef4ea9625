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

#include <algorithm>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "foresttune/error.hpp"
#include "foresttune/tree.hpp"
#include "oracles.hpp"

using namespace foresttune;

namespace {

std::vector<std::uint32_t> all_rows(std::size_t n) {
  std::vector<std::uint32_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0U);
  return rows;
}

std::vector<int> all_features(std::size_t p) {
  std::vector<int> f(p);
  std::iota(f.begin(), f.end(), 0);
  return f;
}

struct Framed {
  Dataset data;
  std::vector<LevelRanks> ranks;
  TrainingFrame frame;
  explicit Framed(Dataset d)
      : data(std::move(d)), ranks(compute_level_ranks(data)), frame(data, ranks) {}
};

}  // namespace

TEST_CASE("gini impurity examples") {
  CHECK(gini_impurity(std::vector<double>{10, 0}) == 0.0);
  CHECK(gini_impurity(std::vector<double>{5, 5}) == 0.5);
  CHECK(gini_impurity(std::vector<double>{9, 1}) == doctest::Approx(0.18).epsilon(1e-15));
  CHECK_THROWS_AS(gini_impurity(std::vector<double>{0, 0}), Error);
}

TEST_CASE("split gain examples") {
  Framed f(fixtures::numeric_dataset({{0, 1, 2, 3}}, {0, 0, 1, 1}, Task::kClassification));
  const auto rows = all_rows(4);
  CHECK(*split_gain(f.frame, rows, 0, 1.5) == doctest::Approx(0.5));
  CHECK(*split_gain(f.frame, rows, 0, 2.5) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK_FALSE(split_gain(f.frame, rows, 0, 10.0).has_value());

  Framed g(fixtures::numeric_dataset({{0, 1, 2, 3}}, {2, 2, 2, 2}, Task::kRegression));
  for (double cut : {0.5, 1.5, 2.5}) CHECK(*split_gain(g.frame, rows, 0, cut) == 0.0);
  Rng rng(1);
  CHECK_FALSE(best_split(g.frame, rows, all_features(1), SplitRule::variance(), rng));
}

TEST_CASE("best split picks the larger gain and breaks ties by feature index") {
  Rng rng(1);
  // x1 splits [0,0,1,1] imperfectly, x2 perfectly.
  Framed f(fixtures::numeric_dataset({{0, 1, 1, 0}, {0, 0, 1, 1}}, {0, 0, 1, 1},
                                     Task::kClassification));
  const auto rows = all_rows(4);
  auto s = best_split(f.frame, rows, all_features(2), SplitRule::gini(), rng);
  REQUIRE(s);
  CHECK(s->feature == 1);
  CHECK(s->threshold == 0.5);
  CHECK(s->gain == doctest::Approx(0.5));

  Framed tie(fixtures::numeric_dataset({{0, 0, 1, 1}, {0, 0, 1, 1}}, {0, 0, 1, 1},
                                       Task::kClassification));
  const std::vector<int> reversed{1, 0};
  s = best_split(tie.frame, rows, reversed, SplitRule::gini(), rng);
  REQUIRE(s);
  CHECK(s->feature == 0);
  const auto o = oracle::brute_force_split(
      {tie.data.columns[0].values, tie.data.columns[1].values}, tie.data.target, true);
  REQUIRE(o);
  CHECK(o->feature == 0);
  CHECK(o->gain == doctest::Approx(s->gain));
}

TEST_CASE("constant feature gives no split") {
  Rng rng(1);
  Framed f(fixtures::numeric_dataset({{3, 3, 3, 3}}, {0, 1, 0, 1}, Task::kClassification));
  CHECK_FALSE(best_split(f.frame, all_rows(4), all_features(1), SplitRule::gini(), rng));
}

TEST_CASE("best split equals the brute-force enumerator on random data") {
  Rng data_rng(2024);
  Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const bool classification = trial % 2 == 0;
    const std::size_t n = 2 + data_rng.uniform_index(40);
    const std::size_t p = 1 + data_rng.uniform_index(4);
    Framed f(fixtures::random_dataset(
        data_rng, n, p, classification ? Task::kClassification : Task::kRegression,
        2 + data_rng.uniform_index(3)));
    // A bootstrap-like sample with repeats.
    std::vector<std::uint32_t> rows(n);
    for (auto& r : rows) r = static_cast<std::uint32_t>(data_rng.uniform_index(n));
    std::vector<std::vector<double>> columns(p);
    std::vector<double> ys;
    for (auto r : rows) {
      for (std::size_t j = 0; j < p; ++j) columns[j].push_back(f.data.columns[j].values[r]);
      ys.push_back(f.data.target[r]);
    }
    const auto expected = oracle::brute_force_split(columns, ys, classification);
    const auto actual =
        best_split(f.frame, rows, all_features(p),
                   classification ? SplitRule::gini() : SplitRule::variance(), rng);
    REQUIRE(expected.has_value() == actual.has_value());
    if (!expected) continue;
    CHECK(actual->feature == expected->feature);
    CHECK(actual->threshold == expected->threshold);
    CHECK(std::abs(actual->gain - expected->gain) <= 1e-12);
  }
}

TEST_CASE("extratrees cuts fall strictly inside the node range") {
  Rng data_rng(5);
  Framed f(fixtures::random_dataset(data_rng, 30, 3, Task::kClassification));
  Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    const auto s = best_split(f.frame, all_rows(30), all_features(3),
                              SplitRule::extra_random(2), rng);
    if (!s) continue;
    const auto& v = f.data.columns[static_cast<std::size_t>(s->feature)].values;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    CHECK(s->threshold > *lo);
    CHECK(s->threshold <= *hi);
    const auto gain = split_gain(f.frame, all_rows(30), s->feature, s->threshold);
    REQUIRE(gain);
    CHECK(*gain == doctest::Approx(s->gain));
  }
}

TEST_CASE("split rules validate against the task") {
  CHECK(SplitRule::gini().valid_for(Task::kClassification));
  CHECK_FALSE(SplitRule::gini().valid_for(Task::kRegression));
  CHECK_FALSE(SplitRule::variance().valid_for(Task::kClassification));
  CHECK(SplitRule::extra_random().valid_for(Task::kRegression));
  CHECK(parse_split_rule("extratrees") == SplitRule::Kind::kExtraRandom);
  CHECK_FALSE(parse_split_rule("maxstat"));
  Rng rng(1);
  Framed f(fixtures::numeric_dataset({{0, 1}}, {0, 1}, Task::kClassification));
  CHECK_THROWS_AS(best_split(f.frame, all_rows(2), all_features(1), SplitRule::variance(), rng),
                  Error);
}

TEST_CASE("categorical levels are ordered by target mean") {
  Dataset d = fixtures::numeric_dataset({{0, 0, 1, 1, 2, 2}}, {1, 1, 0, 0, 1, 0},
                                        Task::kClassification);
  d.columns[0].type = ColumnType::categorical({"a", "b", "c", "unused"});
  const auto ranks = compute_level_ranks(d);
  // Share of class code 1: a=1, b=0, c=0.5, unused absent -> first.
  CHECK(ranks[0] == LevelRanks{3, 1, 2, 0});

  Dataset r = fixtures::numeric_dataset({{0, 1, 2, 0}}, {5, -1, 2, 5}, Task::kRegression);
  r.columns[0].type = ColumnType::categorical({"a", "b", "c"});
  CHECK(compute_level_ranks(r)[0] == LevelRanks{2, 0, 1});
}

TEST_CASE("grown trees respect structural invariants") {
  Rng data_rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const bool classification = trial % 2 == 0;
    Framed f(fixtures::random_dataset(data_rng, 60, 3,
                                      classification ? Task::kClassification : Task::kRegression,
                                      3));
    GrowOptions options;
    options.mtry = 2;
    options.min_node_size = 1 + static_cast<int>(trial % 5);
    options.rule = SplitRule::default_for(f.data.task);
    if (trial % 3 == 0) options.max_depth = 2;
    Rng rng(static_cast<std::uint64_t>(trial));
    const Tree tree = grow_tree(f.frame, all_rows(60), options, rng);
    for (const TreeNode& node : tree.nodes) {
      CHECK(node.count >= 1);
      if (options.max_depth) CHECK(node.depth <= static_cast<std::uint32_t>(*options.max_depth));
      if (node.is_leaf()) {
        CHECK(node.leaf >= 0);
        continue;
      }
      CHECK(node.count > static_cast<std::uint32_t>(options.min_node_size));
      const auto& l = tree.nodes[static_cast<std::size_t>(node.left)];
      const auto& r = tree.nodes[static_cast<std::size_t>(node.right)];
      CHECK(l.count + r.count == node.count);
      CHECK(l.depth == node.depth + 1);
    }
    if (classification) {
      for (std::size_t leaf = 0; leaf < tree.num_leaves(); ++leaf) {
        const auto v = tree.leaf_value(leaf);
        CHECK(std::accumulate(v.begin(), v.end(), 0.0) == doctest::Approx(1.0));
      }
    }
  }
}

TEST_CASE("node size equal to n yields a single leaf with class priors") {
  Framed f(fixtures::numeric_dataset({{0, 1, 2, 3}}, {0, 1, 1, 1}, Task::kClassification));
  GrowOptions options;
  options.min_node_size = 4;
  Rng rng(1);
  const Tree tree = grow_tree(f.frame, all_rows(4), options, rng);
  REQUIRE(tree.nodes.size() == 1);
  CHECK(tree.leaf_value(0)[0] == 0.25);
  CHECK(tree.leaf_value(0)[1] == 0.75);
}

TEST_CASE("a pure node is never split") {
  Framed f(fixtures::numeric_dataset({{0, 1, 2, 3}}, {1, 1, 1, 1}, Task::kClassification));
  GrowOptions options;
  Rng rng(1);
  CHECK(grow_tree(f.frame, all_rows(4), options, rng).nodes.size() == 1);
}
