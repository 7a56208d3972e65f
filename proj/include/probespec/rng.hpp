// Copyright 2026 The probespec authors
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

namespace probespec {

/// Deterministic 64-bit generator (splitmix64). The standard <random>
/// distributions are implementation-defined, so everything seeded goes
/// through this class to keep outputs identical across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; draws two uniforms per call so the
  /// stream position never depends on cached state.
  double gaussian() {
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

 private:
  std::uint64_t state_;
};

/// Derives an independent substream for work item `index` of master stream
/// `seed`. Sweep point k draws from substream(seed, k), so results do not
/// depend on how points are scheduled across threads.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ull * (index + 1)));
  g.next();
  return g.next();
}

/// Number of successes among `trials` Bernoulli(p) draws.
inline std::int64_t sample_binomial(SplitMix64& g, std::int64_t trials,
                                    double p) {
  std::int64_t hits = 0;
  for (std::int64_t t = 0; t < trials; ++t) {
    if (g.uniform() < p) ++hits;
  }
  return hits;
}

}  // namespace probespec
