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

#include "foresttune/space.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "foresttune/error.hpp"
#include "text_util.hpp"

namespace foresttune {

namespace {

[[noreturn]] void fail(const std::string& message) {
  throw Error("space", message);
}

}  // namespace

const char* tuned_param_name(TunedParam param) {
  switch (param) {
    case TunedParam::kMtry:
      return "mtry";
    case TunedParam::kSampleFraction:
      return "sample.fraction";
    case TunedParam::kMinNodeSize:
      return "min.node.size";
    case TunedParam::kReplace:
      return "replace";
  }
  return "unknown";
}

std::optional<TunedParam> parse_tuned_param(const std::string& name) {
  for (TunedParam p : {TunedParam::kMtry, TunedParam::kSampleFraction,
                       TunedParam::kMinNodeSize, TunedParam::kReplace}) {
    if (name == tuned_param_name(p)) return p;
  }
  if (name == "sample_fraction") return TunedParam::kSampleFraction;
  if (name == "min_node_size") return TunedParam::kMinNodeSize;
  return std::nullopt;
}

long round_half_up(double value) { return static_cast<long>(std::floor(value + 0.5)); }

double ParamSpec::decode(double x) const {
  x = std::clamp(x, 0.0, 1.0);
  switch (kind) {
    case Kind::kInteger:
      return std::clamp(static_cast<double>(round_half_up(lo + x * (hi - lo))), lo, hi);
    case Kind::kContinuous:
      return std::clamp(lo + x * (hi - lo), lo, hi);
    case Kind::kBoolean:
      return x >= 0.5 ? 1.0 : 0.0;
    case Kind::kTransformedInteger:
      return std::clamp(static_cast<double>(round_half_up(std::pow(base, x))), lo, hi);
  }
  return x;
}

std::string ParamSpec::transform() const {
  switch (kind) {
    case Kind::kInteger:
      return "integer";
    case Kind::kContinuous:
      return "continuous";
    case Kind::kBoolean:
      return "boolean";
    case Kind::kTransformedInteger:
      return "round(" + internal::format_number(base) + "^x)";
  }
  return "unknown";
}

void ParamSpace::validate() const {
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const ParamSpec& s = specs[i];
    if (s.kind != ParamSpec::Kind::kBoolean && !(s.lo < s.hi)) {
      fail("parameter '" + s.name + "' has an empty range");
    }
    if (s.kind == ParamSpec::Kind::kTransformedInteger && !(s.base >= 1.0)) {
      fail("parameter '" + s.name + "' needs a transform base >= 1");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (specs[j].name == s.name) fail("duplicate parameter '" + s.name + "'");
    }
  }
}

void ParamValues::apply_to(HyperParams& params) const {
  if (mtry) params.mtry = *mtry;
  if (sample_fraction) params.sample_fraction = *sample_fraction;
  if (min_node_size) params.min_node_size = *min_node_size;
  if (replace) params.replace = *replace;
}

ParamSpace default_space(Task /*task*/, std::size_t n, std::size_t p,
                         const std::set<TunedParam>& tuned) {
  if (n < 5) fail("default space needs n >= 5, got " + std::to_string(n));
  if (p < 1) fail("default space needs p >= 1");
  ParamSpace space;
  if (tuned.contains(TunedParam::kMtry) && p > 1) {
    space.specs.push_back({"mtry", TunedParam::kMtry, ParamSpec::Kind::kInteger, 1.0,
                           static_cast<double>(p), 1.0});
  }
  if (tuned.contains(TunedParam::kSampleFraction)) {
    space.specs.push_back({"sample.fraction", TunedParam::kSampleFraction,
                           ParamSpec::Kind::kContinuous, 0.2, 0.9, 1.0});
  }
  if (tuned.contains(TunedParam::kMinNodeSize)) {
    space.specs.push_back({"min.node.size", TunedParam::kMinNodeSize,
                           ParamSpec::Kind::kTransformedInteger, 1.0,
                           static_cast<double>(n), 0.2 * static_cast<double>(n)});
  }
  if (tuned.contains(TunedParam::kReplace)) {
    space.specs.push_back({"replace", TunedParam::kReplace, ParamSpec::Kind::kBoolean, 0.0,
                           1.0, 1.0});
  }
  space.validate();
  return space;
}

ParamValues decode(const ParamSpace& space, const EncodedPoint& point) {
  if (point.coords.size() != space.dimension()) {
    fail("point has " + std::to_string(point.coords.size()) + " coordinates, space has " +
         std::to_string(space.dimension()));
  }
  ParamValues values;
  for (std::size_t d = 0; d < space.dimension(); ++d) {
    const ParamSpec& spec = space.specs[d];
    const double v = spec.decode(point.coords[d]);
    switch (spec.target) {
      case TunedParam::kMtry:
        values.mtry = static_cast<int>(v);
        break;
      case TunedParam::kSampleFraction:
        values.sample_fraction = v;
        break;
      case TunedParam::kMinNodeSize:
        values.min_node_size = static_cast<int>(v);
        break;
      case TunedParam::kReplace:
        values.replace = v != 0.0;
        break;
    }
  }
  return values;
}

std::vector<EncodedPoint> sample_uniform(const ParamSpace& space, std::size_t count, Rng& rng) {
  if (count < 1) fail("sample count must be at least 1");
  std::vector<EncodedPoint> points(count);
  for (auto& point : points) {
    point.coords.resize(space.dimension());
    for (double& c : point.coords) c = rng.uniform01();
  }
  return points;
}

std::vector<EncodedPoint> grid(const ParamSpace& space,
                               const std::vector<std::size_t>& resolutions,
                               std::size_t cap) {
  if (resolutions.size() != space.dimension()) fail("one resolution per dimension required");
  std::size_t total = 1;
  for (std::size_t r : resolutions) {
    if (r < 1) fail("grid resolution must be at least 1");
    if (total > cap / r) fail("grid exceeds the cap of " + std::to_string(cap) + " points");
    total *= r;
  }
  auto coordinate = [](std::size_t i, std::size_t r) {
    return r == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(r - 1);
  };
  std::vector<EncodedPoint> points;
  points.reserve(total);
  std::vector<std::size_t> index(resolutions.size(), 0);
  for (std::size_t k = 0; k < total; ++k) {
    EncodedPoint point;
    for (std::size_t d = 0; d < resolutions.size(); ++d) {
      point.coords.push_back(coordinate(index[d], resolutions[d]));
    }
    points.push_back(std::move(point));
    for (std::size_t d = resolutions.size(); d-- > 0;) {
      if (++index[d] < resolutions[d]) break;
      index[d] = 0;
    }
  }
  return points;
}

void write_space_table(std::ostream& out, const ParamSpace& space) {
  out << "name,lo,hi,transform\n";
  for (const auto& s : space.specs) {
    out << s.name << ',' << internal::format_number(s.lo) << ','
        << internal::format_number(s.hi) << ',' << s.transform() << '\n';
  }
}

}  // namespace foresttune
