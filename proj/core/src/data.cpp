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

#include "foresttune/data.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "foresttune/error.hpp"
#include "foresttune/rng.hpp"

namespace foresttune {

namespace {

[[noreturn]] void fail(const std::string& message) {
  throw Error("data", message);
}

bool is_code(double value, std::size_t count) {
  return value >= 0.0 && value < static_cast<double>(count) &&
         value == std::floor(value);
}

void check_levels(const std::vector<std::string>& levels,
                  const std::string& what) {
  if (levels.empty()) fail(what + " has an empty level list");
  std::set<std::string> seen;
  for (const auto& level : levels) {
    if (!seen.insert(level).second) {
      fail(what + " has duplicate level '" + level + "'");
    }
  }
}

}  // namespace

const char* task_name(Task task) {
  return task == Task::kClassification ? "classification" : "regression";
}

ColumnType ColumnType::categorical(std::vector<std::string> levels) {
  ColumnType type;
  type.kind = Kind::kCategorical;
  type.levels = std::move(levels);
  return type;
}

void Dataset::validate() const {
  const std::size_t rows = target.size();
  if (rows == 0) fail("empty dataset: no observations");
  if (columns.empty()) fail("dataset needs at least one predictor column");
  std::set<std::string> names;
  for (const auto& column : columns) {
    if (!names.insert(column.name).second) {
      fail("duplicate column name '" + column.name + "'");
    }
    if (column.values.size() != rows) {
      fail("column '" + column.name + "' has " +
           std::to_string(column.values.size()) + " values, expected " +
           std::to_string(rows));
    }
    if (column.type.is_categorical()) {
      check_levels(column.type.levels, "column '" + column.name + "'");
      for (double v : column.values) {
        if (!is_code(v, column.type.levels.size())) {
          fail("column '" + column.name + "' holds an invalid level code");
        }
      }
    } else {
      for (double v : column.values) {
        if (!std::isfinite(v)) {
          fail("column '" + column.name + "' holds a non-finite value");
        }
      }
    }
  }
  if (task == Task::kClassification) {
    check_levels(class_labels, "target '" + target_name + "'");
    for (double v : target) {
      if (!is_code(v, class_labels.size())) {
        fail("target value outside the class label list");
      }
    }
  } else {
    if (!class_labels.empty()) fail("regression target carries class labels");
    for (double v : target) {
      if (!std::isfinite(v)) fail("target holds a non-finite value");
    }
  }
}

Dataset Dataset::take_rows(const std::vector<std::size_t>& rows) const {
  Dataset out;
  out.name = name;
  out.target_name = target_name;
  out.task = task;
  out.class_labels = class_labels;
  out.columns.reserve(columns.size());
  for (const auto& column : columns) {
    Column c{column.name, column.type, {}};
    c.values.reserve(rows.size());
    for (std::size_t r : rows) c.values.push_back(column.values.at(r));
    out.columns.push_back(std::move(c));
  }
  out.target.reserve(rows.size());
  for (std::size_t r : rows) out.target.push_back(target.at(r));
  return out;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> CvPlan::split(
    int rep, int fold) const {
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> result;
  const auto& assignment = assignments.at(static_cast<std::size_t>(rep));
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    (assignment[i] == fold ? result.second : result.first).push_back(i);
  }
  return result;
}

CvPlan make_cv_plan(const Dataset& dataset, int folds, int repetitions,
                    std::uint64_t seed) {
  const std::size_t n = dataset.n();
  if (folds < 2) fail("fold count must be at least 2");
  if (static_cast<std::size_t>(folds) > n) {
    fail("fold count " + std::to_string(folds) + " exceeds observation count " +
         std::to_string(n));
  }
  if (repetitions < 1) fail("repetition count must be at least 1");

  // Strata: one per class for classification, a single stratum otherwise.
  std::vector<std::vector<std::size_t>> strata;
  if (dataset.task == Task::kClassification) {
    strata.resize(dataset.num_classes());
    for (std::size_t i = 0; i < n; ++i) {
      strata[static_cast<std::size_t>(dataset.target[i])].push_back(i);
    }
  } else {
    strata.emplace_back(n);
    for (std::size_t i = 0; i < n; ++i) strata[0][i] = i;
  }

  CvPlan plan;
  plan.folds = folds;
  plan.repetitions = repetitions;
  for (int rep = 0; rep < repetitions; ++rep) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(rep)));
    std::vector<int> assignment(n, -1);
    std::size_t dealt = 0;
    for (auto stratum : strata) {
      rng.shuffle(std::span<std::size_t>(stratum));
      for (std::size_t row : stratum) {
        assignment[row] = static_cast<int>(dealt % static_cast<std::size_t>(folds));
        ++dealt;
      }
    }
    plan.assignments.push_back(std::move(assignment));
  }
  return plan;
}

}  // namespace foresttune
