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

#ifndef FORESTTUNE_SPACE_HPP_
#define FORESTTUNE_SPACE_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "foresttune/data.hpp"
#include "foresttune/forest.hpp"
#include "foresttune/rng.hpp"

namespace foresttune {

enum class TunedParam { kMtry, kSampleFraction, kMinNodeSize, kReplace };

const char* tuned_param_name(TunedParam param);
std::optional<TunedParam> parse_tuned_param(const std::string& name);

// One tunable dimension. Every kind decodes a unit-interval coordinate x:
//   kInteger             round_half_up(lo + x (hi - lo)), clamped to [lo, hi]
//   kContinuous          lo + x (hi - lo)
//   kBoolean             x >= 0.5
//   kTransformedInteger  round_half_up(base^x), clamped to [lo, hi]
struct ParamSpec {
  enum class Kind { kInteger, kContinuous, kBoolean, kTransformedInteger };

  std::string name;
  TunedParam target = TunedParam::kMtry;
  Kind kind = Kind::kContinuous;
  double lo = 0.0;
  double hi = 1.0;
  double base = 1.0;  // kTransformedInteger only

  double decode(double x) const;
  std::string transform() const;
};

struct ParamSpace {
  std::vector<ParamSpec> specs;

  std::size_t dimension() const { return specs.size(); }
  // Throws Error("space", ...) on duplicate names or empty ranges.
  void validate() const;
};

// Unit-cube coordinates, one per ParamSpec.
struct EncodedPoint {
  std::vector<double> coords;
  bool operator==(const EncodedPoint&) const = default;
};

// Decoded values for the tuned dimensions only.
struct ParamValues {
  std::optional<int> mtry;
  std::optional<double> sample_fraction;
  std::optional<int> min_node_size;
  std::optional<bool> replace;

  void apply_to(HyperParams& params) const;
  bool operator==(const ParamValues&) const = default;
};

long round_half_up(double value);

inline const std::set<TunedParam> kDefaultTunedParams = {
    TunedParam::kMtry, TunedParam::kSampleFraction, TunedParam::kMinNodeSize};

// mtry integer in [1, p]; sample fraction continuous in [0.2, 0.9]; node
// size round((0.2 n)^x) clamped to [1, n]; replace boolean. Only the
// requested parameters are included, in that order. mtry is dropped when
// p == 1 since its range would be empty.
ParamSpace default_space(Task task, std::size_t n, std::size_t p,
                         const std::set<TunedParam>& tuned = kDefaultTunedParams);

ParamValues decode(const ParamSpace& space, const EncodedPoint& point);

std::vector<EncodedPoint> sample_uniform(const ParamSpace& space, std::size_t count, Rng& rng);

// Cartesian product of evenly spaced coordinates (resolution r gives
// i / (r - 1); r = 1 gives 0.5), first dimension varying slowest.
std::vector<EncodedPoint> grid(const ParamSpace& space,
                               const std::vector<std::size_t>& resolutions,
                               std::size_t cap = 100000);

// name,lo,hi,transform table for tuning logs.
void write_space_table(std::ostream& out, const ParamSpace& space);

}  // namespace foresttune

#endif  // FORESTTUNE_SPACE_HPP_
