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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "foresttune/error.hpp"
#include "foresttune/metrics.hpp"
#include "foresttune/rng.hpp"
#include "oracles.hpp"

using namespace foresttune;
using V = std::vector<double>;

TEST_CASE("mmce examples") {
  CHECK(mmce(V{0, 1, 1}, V{0, 1, 1}) == 0.0);
  CHECK(mmce(V{0, 1}, V{1, 0}) == 1.0);
  CHECK(mmce(V{0, 1, 1, 0}, V{0, 1, 0, 0}) == 0.25);
}

TEST_CASE("auc examples") {
  CHECK(auc(V{0, 0, 1, 1}, V{0.1, 0.2, 0.3, 0.4}) == 1.0);
  CHECK(auc(V{1, 0}, V{0.4, 0.6}) == 0.0);
  CHECK(auc(V{1, 1, 0, 0}, V{0.9, 0.4, 0.6, 0.2}) == 0.75);
  CHECK(auc(V{1, 0}, V{0.5, 0.5}) == 0.5);
  CHECK_THROWS_AS(auc(V{1, 1}, V{0.1, 0.2}), Error);
}

TEST_CASE("auc equals pair counting on random vectors") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(100);
    V truth(n);
    V scores(n);
    for (std::size_t i = 0; i < n; ++i) {
      truth[i] = static_cast<double>(i % 2);
      scores[i] = static_cast<double>(rng.uniform_index(10)) / 10.0;
    }
    CHECK(auc(truth, scores) == oracle::pairwise_auc(truth, scores));
  }
}

TEST_CASE("brier examples") {
  CHECK(brier(V{1}, V{0, 1}, 2, BrierConvention::kBinary) == 0.0);
  CHECK(brier(V{1, 0}, V{0.5, 0.5, 0.5, 0.5}, 2, BrierConvention::kBinary) == 0.25);
  CHECK(brier(V{1, 0}, V{0.5, 0.5, 0.5, 0.5}, 2, BrierConvention::kMulticlass) == 0.5);
  CHECK_THROWS_AS(brier(V{1}, V{0.2, 0.3, 0.5}, 3, BrierConvention::kBinary), Error);
}

TEST_CASE("logloss examples") {
  CHECK(logloss(V{0, 1}, V{1, 0, 0, 1}, 2) == 0.0);
  CHECK(logloss(V{0}, V{0.5, 0.5}, 2) == doctest::Approx(std::log(2.0)));
  const double clipped = logloss(V{0}, V{0.0, 1.0}, 2);
  CHECK(std::isfinite(clipped));
  CHECK(clipped == doctest::Approx(-std::log(1e-15)));
  CHECK(clipped == doctest::Approx(34.538776).epsilon(1e-6));
}

TEST_CASE("mse examples") {
  CHECK(mse(V{1, 2}, V{1, 2}) == 0.0);
  CHECK(mse(V{0, 0}, V{1, 1}) == 1.0);
  CHECK(mse(V{1, 2, 3}, V{2, 2, 2}) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("brier and logloss match direct formulas") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + rng.uniform_index(3);
    const std::size_t n = 1 + rng.uniform_index(50);
    V truth(n);
    V proba(n * k);
    for (std::size_t i = 0; i < n; ++i) {
      truth[i] = static_cast<double>(rng.uniform_index(k));
      double total = 0.0;
      for (std::size_t c = 0; c < k; ++c) total += proba[i * k + c] = rng.uniform01();
      for (std::size_t c = 0; c < k; ++c) proba[i * k + c] /= total;
    }
    CHECK(std::abs(brier(truth, proba, k, BrierConvention::kMulticlass) -
                   oracle::brier_sum(truth, proba, k)) <= 1e-12);
    CHECK(std::abs(logloss(truth, proba, k) - oracle::logloss(truth, proba, k)) <= 1e-12);
  }
}

TEST_CASE("measure metadata and compatibility") {
  CHECK(parse_measure("brier") == Measure::kBrierMulticlass);
  CHECK(parse_measure("binary-brier") == Measure::kBrierBinary);
  CHECK_FALSE(parse_measure("f1"));
  CHECK(oriented(Measure::kAuc, 0.8) == -0.8);
  CHECK(oriented(Measure::kMmce, 0.2) == 0.2);
  CHECK(default_measure(Task::kClassification) == Measure::kBrierMulticlass);
  CHECK(default_measure(Task::kRegression) == Measure::kMse);
  CHECK_THROWS_WITH_AS(check_compatible(Measure::kMmce, Task::kRegression, 0),
                       doctest::Contains("regression"), Error);
  CHECK_THROWS_WITH_AS(check_compatible(Measure::kAuc, Task::kClassification, 3),
                       doctest::Contains("binary"), Error);
  CHECK_THROWS_AS(check_compatible(Measure::kMse, Task::kClassification, 2), Error);
}

TEST_CASE("evaluate drops uncovered rows") {
  V truth{0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
  Predictions p;
  p.width = 2;
  for (std::size_t i = 0; i < 10; ++i) {
    p.values.push_back(truth[i] == 0 ? 0.9 : 0.1);
    p.values.push_back(truth[i] == 0 ? 0.1 : 0.9);
  }
  p.covered.assign(10, true);
  p.covered[2] = false;
  p.covered[7] = false;
  p.values[4] = 0.0;  // row 2 is misclassified but uncovered
  p.values[5] = 1.0;
  const Evaluation e = evaluate(Measure::kMmce, Task::kClassification, truth, p);
  CHECK(e.excluded == 2);
  CHECK(e.value == 0.0);
  p.covered.assign(10, false);
  CHECK_THROWS_WITH_AS(evaluate(Measure::kMmce, Task::kClassification, truth, p),
                       doctest::Contains("no covered rows"), Error);
}
