// Copyright 2026 The wbsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WBSIM_RNG_HPP
#define WBSIM_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace wbsim {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from the scenario seed and a stable
/// label (a node's MAC text, or "medium"). Streams never depend on node order.
inline std::uint64_t derive_seed(std::uint64_t scenario_seed, std::string_view label) {
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return splitmix64(scenario_seed ^ splitmix64(h));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Inclusive range.
  template <typename Int>
  Int uniform_int(Int lo, Int hi) {
    return std::uniform_int_distribution<Int>(lo, hi)(engine_);
  }

  double uniform01() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform01() < p;
  }

  double exponential(double rate) { return std::exponential_distribution<double>(rate)(engine_); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace wbsim

#endif  // WBSIM_RNG_HPP
