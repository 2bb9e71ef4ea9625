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

#ifndef FORESTTUNE_RNG_HPP_
#define FORESTTUNE_RNG_HPP_

#include <cstdint>
#include <span>

namespace foresttune {

// SplitMix64 finalizer. Used both to seed Rng and to derive independent
// stream seeds from (master seed, stream index) pairs.
std::uint64_t splitmix64(std::uint64_t x);

// Seed for stream `index` of `master`: splitmix64(master + 0x9E3779B97F4A7C15
// * (index + 1)). Tree t of a forest uses derive_seed(master_seed, t).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// xoshiro256** generator with platform-independent sampling helpers. The
// standard <random> distributions are implementation-defined, so every draw
// the library makes goes through these members to keep results bit-exact
// across toolchains.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  std::uint64_t operator()() { return next(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

  // Uniform integer in [0, bound). bound must be > 0. Unbiased (Lemire).
  std::uint64_t uniform_index(std::uint64_t bound);
  // Uniform double in [0, 1) with 53 random bits.
  double uniform01();
  // Uniform double in the open interval (0, 1).
  double uniform_open01();
  // Standard normal via Box-Muller (no cached spare, so draws stay aligned).
  double normal();

  // Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_index(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::uint64_t state_[4];
};

}  // namespace foresttune

#endif  // FORESTTUNE_RNG_HPP_
