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

#ifndef FORESTTUNE_TESTS_FIXTURES_HPP_
#define FORESTTUNE_TESTS_FIXTURES_HPP_

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "foresttune/data.hpp"
#include "foresttune/rng.hpp"

namespace fixtures {

// Numeric features named x1..xp; the target is "y".
inline foresttune::Dataset numeric_dataset(const std::vector<std::vector<double>>& columns,
                                           const std::vector<double>& target,
                                           foresttune::Task task, std::size_t num_classes = 2) {
  foresttune::Dataset d;
  d.name = "fixture";
  for (std::size_t j = 0; j < columns.size(); ++j) {
    d.columns.push_back({"x" + std::to_string(j + 1), foresttune::ColumnType::numeric(),
                         columns[j]});
  }
  d.target_name = "y";
  d.target = target;
  d.task = task;
  if (task == foresttune::Task::kClassification) {
    for (std::size_t k = 0; k < num_classes; ++k) d.class_labels.push_back("c" + std::to_string(k));
  }
  return d;
}

// Small integer-valued features so duplicate values and tied gains occur.
inline foresttune::Dataset random_dataset(foresttune::Rng& rng, std::size_t n, std::size_t p,
                                          foresttune::Task task, std::size_t num_classes = 2,
                                          std::uint64_t value_range = 8) {
  std::vector<std::vector<double>> columns(p, std::vector<double>(n));
  for (auto& column : columns) {
    for (auto& v : column) v = static_cast<double>(rng.uniform_index(value_range));
  }
  std::vector<double> target(n);
  for (auto& y : target) {
    y = task == foresttune::Task::kClassification
            ? static_cast<double>(rng.uniform_index(num_classes))
            : std::round(rng.normal() * 4.0) / 4.0;
  }
  return numeric_dataset(columns, target, task, num_classes);
}

// Scratch file under the system temp directory, removed on destruction.
class TempFile {
 public:
  explicit TempFile(const std::string& name, const std::string& content = {})
      : path_(std::filesystem::temp_directory_path() /
              ("foresttune_test_" + std::to_string(::getpid()) + "_" + name)) {
    if (!content.empty()) {
      std::ofstream out(path_, std::ios::binary);
      out << content;
    }
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace fixtures

#endif  // FORESTTUNE_TESTS_FIXTURES_HPP_
