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

// Independent reference implementations used by the tests. They favour
// direct formulas over speed and share no code with the library beyond its
// plain data types.

#ifndef FORESTTUNE_TESTS_ORACLES_HPP_
#define FORESTTUNE_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace oracle {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

inline double gini_of(const std::map<int, double>& counts, double n) {
  double g = 1.0;
  for (const auto& [cls, c] : counts) g -= (c / n) * (c / n);
  return g;
}

inline double gini_of(const std::vector<double>& labels) {
  std::map<int, double> counts;
  for (double y : labels) counts[static_cast<int>(y)] += 1.0;
  return gini_of(counts, static_cast<double>(labels.size()));
}

inline double sum_squares(const std::vector<double>& ys) {
  if (ys.empty()) return 0.0;
  double mean = 0.0;
  for (double y : ys) mean += y;
  mean /= static_cast<double>(ys.size());
  double ss = 0.0;
  for (double y : ys) ss += (y - mean) * (y - mean);
  return ss;
}

inline double impurity(const std::vector<double>& ys, bool classification) {
  return classification ? gini_of(ys) : sum_squares(ys);
}

// Gain of a partition, Gini weighted by child share or sums of squares.
inline double partition_gain(const std::vector<double>& left, const std::vector<double>& right,
                             bool classification) {
  std::vector<double> all = left;
  all.insert(all.end(), right.begin(), right.end());
  const double n = static_cast<double>(all.size());
  if (classification) {
    return gini_of(all) - static_cast<double>(left.size()) / n * gini_of(left) -
           static_cast<double>(right.size()) / n * gini_of(right);
  }
  return sum_squares(all) - sum_squares(left) - sum_squares(right);
}

inline double midpoint(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2.0;
  return (mid > lo && mid <= hi) ? mid : hi;
}

// Enumerates every (feature, midpoint) pair, computes each gain from the
// child label lists, and keeps the maximum. Candidates within `rel_tol`
// times the node impurity of the maximum are resolved to the smallest
// (feature, threshold). `columns[j][s]` is the value of sample s.
inline std::optional<Split> brute_force_split(const std::vector<std::vector<double>>& columns,
                                              const std::vector<double>& ys,
                                              bool classification, double rel_tol = 1e-12) {
  const double parent = impurity(ys, classification);
  if (!(parent > 0.0)) return std::nullopt;
  std::vector<Split> all;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    std::set<double> distinct(columns[j].begin(), columns[j].end());
    std::vector<double> u(distinct.begin(), distinct.end());
    for (std::size_t k = 0; k + 1 < u.size(); ++k) {
      const double cut = midpoint(u[k], u[k + 1]);
      std::vector<double> left;
      std::vector<double> right;
      for (std::size_t s = 0; s < ys.size(); ++s) {
        (columns[j][s] < cut ? left : right).push_back(ys[s]);
      }
      all.push_back({static_cast<int>(j), cut, partition_gain(left, right, classification)});
    }
  }
  const double tol = rel_tol * parent;
  double max_gain = -1.0;
  for (const auto& s : all) max_gain = std::max(max_gain, s.gain);
  if (all.empty() || !(max_gain > tol)) return std::nullopt;
  for (const auto& s : all) {
    if (s.gain >= max_gain - tol) return s;  // `all` is in (feature, threshold) order
  }
  return std::nullopt;
}

// Pair counting: P(score_pos > score_neg) + 0.5 P(tie).
inline double pairwise_auc(const std::vector<double>& truth, const std::vector<double>& scores) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] != 1.0) continue;
    for (std::size_t j = 0; j < truth.size(); ++j) {
      if (truth[j] != 0.0) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) {
        wins += 1.0;
      } else if (scores[i] == scores[j]) {
        wins += 0.5;
      }
    }
  }
  return wins / pairs;
}

// Sum over classes of squared distance to the one-hot truth, averaged.
inline double brier_sum(const std::vector<double>& truth, const std::vector<double>& proba,
                        std::size_t k) {
  double total = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    for (std::size_t c = 0; c < k; ++c) {
      const double target = static_cast<std::size_t>(truth[i]) == c ? 1.0 : 0.0;
      total += std::pow(proba[i * k + c] - target, 2);
    }
  }
  return total / static_cast<double>(truth.size());
}

inline double logloss(const std::vector<double>& truth, const std::vector<double>& proba,
                      std::size_t k, double eps = 1e-15) {
  double total = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    total += -std::log(std::max(eps, proba[i * k + static_cast<std::size_t>(truth[i])]));
  }
  return total / static_cast<double>(truth.size());
}

// Expected improvement by composite Simpson integration of
// max(best - y, 0) against the N(mean, sd^2) density.
inline double numeric_ei(double mean, double sd, double best, int intervals = 20000) {
  if (sd == 0.0) return std::max(best - mean, 0.0);
  const double lo = mean - 12.0 * sd;
  const double hi = std::min(best, mean + 12.0 * sd);
  if (!(hi > lo)) return 0.0;
  const double h = (hi - lo) / intervals;
  auto f = [&](double y) {
    const double z = (y - mean) / sd;
    return (best - y) * std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * M_PI));
  };
  double sum = f(lo) + f(hi);
  for (int i = 1; i < intervals; ++i) sum += f(lo + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

// 1 + #strictly better + half the number of other tied entries. Smaller
// scores are better.
inline std::vector<double> average_ranks(const std::vector<double>& scores) {
  std::vector<double> ranks(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    double better = 0.0;
    double tied = 0.0;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (j == i) continue;
      if (scores[j] < scores[i]) better += 1.0;
      if (scores[j] == scores[i]) tied += 1.0;
    }
    ranks[i] = 1.0 + better + tied / 2.0;
  }
  return ranks;
}

// Spearman correlation as the Pearson correlation of average ranks.
inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += ra[i] / n;
    mb += rb[i] / n;
  }
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

// monks-2 label from the rule: exactly two of the six attributes take the
// level labelled "2" (zero-based code 1).
inline int monks2_label(const std::vector<int>& attributes_zero_based) {
  int ones = 0;
  for (int a : attributes_zero_based) ones += a == 1 ? 1 : 0;
  return ones == 2 ? 1 : 0;
}

}  // namespace oracle

#endif  // FORESTTUNE_TESTS_ORACLES_HPP_
