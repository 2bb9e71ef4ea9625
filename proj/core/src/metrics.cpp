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

#include "foresttune/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "foresttune/error.hpp"
#include "foresttune/forest.hpp"

namespace foresttune {

namespace {

[[noreturn]] void fail(const std::string& message) {
  throw Error("metrics", message);
}

void check_lengths(std::size_t a, std::size_t b) {
  if (a == 0 || b == 0) fail("empty input");
  if (a != b) fail("length mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

void check_proba(std::span<const double> truth, std::span<const double> proba,
                 std::size_t k) {
  if (k < 2) fail("probability vectors need at least two classes");
  if (proba.size() % k != 0) fail("malformed probability matrix");
  check_lengths(truth.size(), proba.size() / k);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    double sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      const double p = proba[i * k + c];
      if (!(p >= 0.0 && p <= 1.0 + 1e-12)) fail("malformed probability vector at row " + std::to_string(i));
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      fail("malformed probability vector at row " + std::to_string(i) + ": sums to " +
           std::to_string(sum));
    }
    const double y = truth[i];
    if (!(y >= 0.0 && y < static_cast<double>(k) && y == std::floor(y))) {
      fail("class code out of range at row " + std::to_string(i));
    }
  }
}

}  // namespace

MeasureInfo measure_info(Measure measure) {
  switch (measure) {
    case Measure::kMmce:
      return {"mmce", Direction::kMinimize, false, true, false};
    case Measure::kAuc:
      return {"auc", Direction::kMaximize, true, true, true};
    case Measure::kBrierBinary:
      return {"binary-brier", Direction::kMinimize, true, true, true};
    case Measure::kBrierMulticlass:
      return {"brier", Direction::kMinimize, true, true, false};
    case Measure::kLogLoss:
      return {"logloss", Direction::kMinimize, true, true, false};
    case Measure::kMse:
      return {"mse", Direction::kMinimize, false, false, false};
  }
  fail("unknown measure");
}

std::optional<Measure> parse_measure(const std::string& name) {
  for (Measure m : {Measure::kMmce, Measure::kAuc, Measure::kBrierBinary,
                    Measure::kBrierMulticlass, Measure::kLogLoss, Measure::kMse}) {
    if (name == measure_info(m).name) return m;
  }
  return std::nullopt;
}

double oriented(Measure measure, double value) {
  return measure_info(measure).direction == Direction::kMaximize ? -value : value;
}

Measure default_measure(Task task) {
  return task == Task::kClassification ? Measure::kBrierMulticlass : Measure::kMse;
}

double mmce(std::span<const double> truth, std::span<const double> predicted) {
  check_lengths(truth.size(), predicted.size());
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) wrong += truth[i] != predicted[i] ? 1 : 0;
  return static_cast<double>(wrong) / static_cast<double>(truth.size());
}

double auc(std::span<const double> truth, std::span<const double> scores) {
  check_lengths(truth.size(), scores.size());
  const std::size_t n = truth.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double positives = 0.0;
  double rank_sum = 0.0;  // average ranks of positives, 1-based
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double average_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) {
      const double y = truth[order[k]];
      if (y != 0.0 && y != 1.0) fail("auc needs 0/1 labels");
      if (y == 1.0) {
        positives += 1.0;
        rank_sum += average_rank;
      }
    }
    i = j + 1;
  }
  const double negatives = static_cast<double>(n) - positives;
  if (positives == 0.0 || negatives == 0.0) fail("auc needs both classes present");
  const double u = rank_sum - positives * (positives + 1.0) / 2.0;
  return u / (positives * negatives);
}

double brier(std::span<const double> truth, std::span<const double> proba,
             std::size_t num_classes, BrierConvention convention) {
  check_proba(truth, proba, num_classes);
  const std::size_t n = truth.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto y = static_cast<std::size_t>(truth[i]);
    if (convention == BrierConvention::kBinary) {
      if (num_classes != 2) fail("binary brier needs exactly two classes");
      const double d = proba[i * 2 + 1] - (y == 1 ? 1.0 : 0.0);
      total += d * d;
    } else {
      for (std::size_t c = 0; c < num_classes; ++c) {
        const double d = proba[i * num_classes + c] - (c == y ? 1.0 : 0.0);
        total += d * d;
      }
    }
  }
  return total / static_cast<double>(n);
}

double logloss(std::span<const double> truth, std::span<const double> proba,
               std::size_t num_classes, double eps) {
  check_proba(truth, proba, num_classes);
  double total = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double p = proba[i * num_classes + static_cast<std::size_t>(truth[i])];
    total -= std::log(std::max(p, eps));
  }
  return total / static_cast<double>(truth.size());
}

double mse(std::span<const double> truth, std::span<const double> predicted) {
  check_lengths(truth.size(), predicted.size());
  double total = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = truth[i] - predicted[i];
    total += d * d;
  }
  return total / static_cast<double>(truth.size());
}

void check_compatible(Measure measure, Task task, std::size_t num_classes) {
  const MeasureInfo info = measure_info(measure);
  if (info.classification != (task == Task::kClassification)) {
    fail(std::string("measure '") + info.name + "' is not compatible with a " +
         task_name(task) + " task");
  }
  if (info.binary_only && num_classes != 2) {
    fail(std::string("measure '") + info.name + "' requires a binary task, got " +
         std::to_string(num_classes) + " classes");
  }
}

Evaluation evaluate(Measure measure, Task task, std::span<const double> truth,
                    const Predictions& predictions) {
  const std::size_t width = predictions.width;
  const std::size_t k = task == Task::kClassification ? width : 0;
  check_compatible(measure, task, k);
  if (task == Task::kRegression && width != 1) fail("regression predictions must have width 1");
  if (predictions.rows() != truth.size()) {
    fail("length mismatch: " + std::to_string(truth.size()) + " truths vs " +
         std::to_string(predictions.rows()) + " predictions");
  }
  if (!predictions.covered.empty() && predictions.covered.size() != truth.size()) {
    fail("coverage mask length mismatch");
  }

  Evaluation result;
  std::vector<double> y;
  std::vector<double> values;
  y.reserve(truth.size());
  values.reserve(predictions.values.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (!predictions.covered.empty() && !predictions.covered[i]) {
      ++result.excluded;
      continue;
    }
    y.push_back(truth[i]);
    values.insert(values.end(), predictions.values.begin() + static_cast<std::ptrdiff_t>(i * width),
                  predictions.values.begin() + static_cast<std::ptrdiff_t>((i + 1) * width));
  }
  if (y.empty()) fail("no covered rows to evaluate");

  switch (measure) {
    case Measure::kMmce: {
      std::vector<double> labels(y.size());
      for (std::size_t i = 0; i < y.size(); ++i) {
        labels[i] = static_cast<double>(argmax_first({values.data() + i * width, width}));
      }
      result.value = mmce(y, labels);
      break;
    }
    case Measure::kAuc: {
      std::vector<double> scores(y.size());
      for (std::size_t i = 0; i < y.size(); ++i) scores[i] = values[i * 2 + 1];
      result.value = auc(y, scores);
      break;
    }
    case Measure::kBrierBinary:
      result.value = brier(y, values, width, BrierConvention::kBinary);
      break;
    case Measure::kBrierMulticlass:
      result.value = brier(y, values, width, BrierConvention::kMulticlass);
      break;
    case Measure::kLogLoss:
      result.value = logloss(y, values, width);
      break;
    case Measure::kMse:
      result.value = mse(y, values);
      break;
  }
  return result;
}

}  // namespace foresttune
