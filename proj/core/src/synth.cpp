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
#include <array>
#include <cmath>
#include <numeric>

#include "foresttune/data.hpp"
#include "foresttune/error.hpp"
#include "foresttune/rng.hpp"

namespace foresttune {

Dataset synth_monks2(std::uint64_t /*seed*/) {
  constexpr std::array<int, 6> kLevels = {3, 3, 2, 3, 4, 2};
  Dataset data;
  data.name = "monks2";
  data.task = Task::kClassification;
  data.target_name = "y";
  data.class_labels = {"0", "1"};
  for (std::size_t a = 0; a < kLevels.size(); ++a) {
    std::vector<std::string> levels;
    for (int l = 1; l <= kLevels[a]; ++l) levels.push_back(std::to_string(l));
    data.columns.push_back(
        {"a" + std::to_string(a + 1), ColumnType::categorical(levels), {}});
  }

  std::array<int, 6> value{};  // level codes, 0-based
  for (;;) {
    int at_two = 0;
    for (std::size_t a = 0; a < kLevels.size(); ++a) {
      data.columns[a].values.push_back(value[a]);
      if (value[a] == 1) ++at_two;  // code 1 is the level labelled "2"
    }
    data.target.push_back(at_two == 2 ? 1.0 : 0.0);

    // Odometer increment, last attribute fastest.
    int a = static_cast<int>(kLevels.size()) - 1;
    while (a >= 0 && ++value[static_cast<std::size_t>(a)] ==
                         kLevels[static_cast<std::size_t>(a)]) {
      value[static_cast<std::size_t>(a)] = 0;
      --a;
    }
    if (a < 0) break;
  }
  return data;
}

Dataset synth_sparse_signal(std::size_t n, std::size_t informative,
                            std::size_t noise, std::uint64_t seed,
                            double shift) {
  if (n < 2) throw Error("data", "synth_sparse_signal needs n >= 2");
  if (informative < 1) {
    throw Error("data", "synth_sparse_signal needs at least one informative column");
  }
  Rng rng(seed);
  Dataset data;
  data.name = "sparse_signal";
  data.task = Task::kClassification;
  data.target_name = "y";
  data.class_labels = {"0", "1"};

  std::vector<double> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<double>(i % 2);
  rng.shuffle(std::span<double>(labels));
  data.target = labels;

  for (std::size_t j = 0; j < informative + noise; ++j) {
    const bool signal = j < informative;
    Column column{(signal ? "s" : "n") +
                      std::to_string(signal ? j + 1 : j - informative + 1),
                  ColumnType::numeric(),
                  {}};
    column.values.reserve(n);
    // Alternate the shift sign so informative columns are not all
    // positively correlated with the label.
    const double direction = (j % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      double v = rng.normal();
      if (signal) v += direction * shift * labels[i];
      column.values.push_back(v);
    }
    data.columns.push_back(std::move(column));
  }
  return data;
}

}  // namespace foresttune
