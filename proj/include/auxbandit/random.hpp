// Copyright 2026 The auxbandit Authors.
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


#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace auxbandit {

// Counter-based random streams. Every draw is a pure function of a 64-bit key
// and a position counter, so results do not depend on thread scheduling or
// on the standard library's distribution implementations.

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Child key of `parent` labelled by `component`.
constexpr std::uint64_t derive_key(std::uint64_t parent, std::uint64_t component) {
  return mix64(parent ^ mix64(component * kGolden + 0x632be59bd9b4e019ULL));
}

template <typename... Rest>
constexpr std::uint64_t derive_key(std::uint64_t parent, std::uint64_t first,
                                   std::uint64_t second, Rest... rest) {
  return derive_key(derive_key(parent, first), second, static_cast<std::uint64_t>(rest)...);
}

// Purposes for hierarchical stream splitting.
enum class Phase : std::uint64_t {
  kArrivals = 1,
  kAuxNoise = 2,
  kRewardNoise = 3,
  kPolicy = 4,
  kReplication = 5,
  kSharedArrivals = 6,
  kReplaySign = 7,
  kReplayClick = 8,
  kReplayOutcome = 9,
  kCorpus = 10,
};

inline std::uint64_t phase_key(std::uint64_t seed, Phase phase) {
  return derive_key(seed, static_cast<std::uint64_t>(phase));
}

// Seed of replication r under a base seed.
inline std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t r) {
  return derive_key(base_seed, static_cast<std::uint64_t>(Phase::kReplication), r);
}

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key = 0) : state_(key) {}

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform on [0, 1) with 53 bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal by Box-Muller; the sine branch is discarded so that each
  // draw consumes exactly two words.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Uniform integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n) {
    const auto v = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
    return v < n ? v : n - 1;
  }

  // Poisson by sequential inversion; intended for small means.
  std::int64_t poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    const double u = uniform();
    double p = std::exp(-mean);
    double cdf = p;
    std::int64_t k = 0;
    while (u >= cdf && k < 100000) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
      if (p == 0.0 && cdf < u) break;
    }
    return k;
  }

 private:
  std::uint64_t state_;
};

}  // namespace auxbandit
