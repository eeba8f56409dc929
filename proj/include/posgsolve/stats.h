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

#ifndef POSGSOLVE_STATS_H_
#define POSGSOLVE_STATS_H_

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace posg::stats {

// Pairwise (cascade) summation. Order-independent accumulation error makes
// aggregates reproducible regardless of how worker results were produced.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  if (xs.size() <= 8) {
    double s = 0.0;
    for (const double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

inline double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return pairwise_sum(xs) / static_cast<double>(xs.size());
}

// Standard error of the mean (sample standard deviation / sqrt(n)).
inline double standard_error(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  const double m = mean(xs);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = (xs[i] - m) * (xs[i] - m);
  const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
  return std::sqrt(var / static_cast<double>(n));
}

inline double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace posg::stats

#endif  // POSGSOLVE_STATS_H_
