// Copyright 2026 The posgsolve Authors
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

#ifndef POSGSOLVE_RANDOM_H_
#define POSGSOLVE_RANDOM_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace posg {

// All randomness flows through mt19937_64 plus the hand-rolled samplers
// below. std::uniform_real_distribution and friends are implementation
// defined, which would break bit-for-bit reproducibility across toolchains.
using Rng = std::mt19937_64;

namespace rnd {

// splitmix64 finalizer; used for seed derivation and stream splitting.
inline std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t combine(std::uint64_t a, std::uint64_t b) {
  return mix(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Uniform integer in [0, n). Rejection-free scaling is fine here: n is tiny
// compared to 2^53, so modulo bias is far below any tolerance in use, but we
// reject anyway to keep the draw exact.
inline int uniform_below(Rng& rng, int n) {
  const std::uint64_t bound = ~std::uint64_t{0} - ~std::uint64_t{0} % static_cast<std::uint64_t>(n);
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= bound);
  return static_cast<int>(draw % static_cast<std::uint64_t>(n));
}

// Standard normal via Box-Muller. Stateless by design: both uniforms are
// consumed every call so replaying a seed replays the stream exactly.
inline double normal(Rng& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

// Draws an index proportionally to non-negative weights (need not sum to 1).
inline int sample_weighted(Rng& rng, std::span<const double> weights) {
  double total = 0.0;
  for (const double w : weights) total += w;
  double u = uniform01(rng) * total;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    u -= weights[i];
    if (u < 0.0) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

}  // namespace rnd
}  // namespace posg

#endif  // POSGSOLVE_RANDOM_H_
