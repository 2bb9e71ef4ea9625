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

#ifndef FORESTTUNE_DATA_HPP_
#define FORESTTUNE_DATA_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace foresttune {

enum class Task { kClassification, kRegression };

const char* task_name(Task task);

// Numeric columns carry real values. Categorical columns carry level codes
// (0-based indices into `levels`, stored as doubles).
struct ColumnType {
  enum class Kind { kNumeric, kCategorical };

  Kind kind = Kind::kNumeric;
  std::vector<std::string> levels;

  static ColumnType numeric() { return {}; }
  static ColumnType categorical(std::vector<std::string> levels);

  bool is_categorical() const { return kind == Kind::kCategorical; }
  bool operator==(const ColumnType&) const = default;
};

struct Column {
  std::string name;
  ColumnType type;
  std::vector<double> values;
};

// Columnar learning table. For classification the target holds class codes
// into `class_labels`; for regression it holds the real response.
struct Dataset {
  std::string name;
  std::vector<Column> columns;
  std::string target_name;
  std::vector<double> target;
  Task task = Task::kRegression;
  std::vector<std::string> class_labels;

  std::size_t n() const { return target.size(); }
  std::size_t p() const { return columns.size(); }
  std::size_t num_classes() const { return class_labels.size(); }

  // Throws Error("data", ...) if any invariant is violated.
  void validate() const;

  // Rows in the given order; duplicates allowed (bootstrap samples).
  Dataset take_rows(const std::vector<std::size_t>& rows) const;
};

// Per-column type hint for load_csv.
enum class TypeHint { kNumeric, kCategorical };

struct CsvOptions {
  std::map<std::string, TypeHint> overrides;
  // When set, the target's kind comes from this hint regardless of content.
  std::optional<TypeHint> target_hint;
};

// Header row required; RFC 4180 quoting. Empty and "NA" cells are rejected
// as missing. A column is numeric when every cell parses as a number unless
// overridden; categorical levels keep first-appearance order.
Dataset load_csv(const std::filesystem::path& path, const std::string& target,
                 const CsvOptions& options = {});

// Writes features in column order followed by the target column.
void write_csv(const Dataset& dataset, const std::filesystem::path& path);

// Cross-validation fold assignments. assignments[r][i] is the fold of row i
// in repetition r.
struct CvPlan {
  int folds = 0;
  int repetitions = 0;
  std::vector<std::vector<int>> assignments;

  // Row indices (train, test) for fold `fold` of repetition `rep`.
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split(
      int rep, int fold) const;
};

// Stratified by class for classification: rows of each class are shuffled and
// dealt round-robin, continuing the deal across classes.
CvPlan make_cv_plan(const Dataset& dataset, int folds, int repetitions,
                    std::uint64_t seed);

// Full factorial over six categorical attributes with level counts
// (3,3,2,3,4,2), levels labelled "1".."k". Label "1" iff exactly two
// attributes take the value "2". Row order is lexicographic with the first
// attribute varying slowest; the seed does not change the output.
Dataset synth_monks2(std::uint64_t seed = 0);

// Binary classification with `informative` columns whose class-conditional
// means differ by `shift` standard deviations and `noise` N(0,1) columns
// independent of the label.
Dataset synth_sparse_signal(std::size_t n, std::size_t informative,
                            std::size_t noise, std::uint64_t seed,
                            double shift = 0.5);

}  // namespace foresttune

#endif  // FORESTTUNE_DATA_HPP_
