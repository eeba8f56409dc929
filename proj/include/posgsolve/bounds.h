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

#ifndef POSGSOLVE_BOUNDS_H_
#define POSGSOLVE_BOUNDS_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "posgsolve/types.h"

namespace posg {

// Closed-form calculators for the solver's accuracy guarantees. Reporting
// only; nothing here controls the solver.

struct BoundParams {
  double lambda = 0.1;       // belief-accuracy parameter, reward units
  int particles = 100;       // C
  int horizon = 5;           // D
  double discount = 0.95;
  double d_inf_max = 1.0;    // importance-weight sup bound; 1 = exact proposal
  double failure_prob = 0.05;  // p
  std::array<double, kNumPlayers> reward_range{1, 1};    // max - min per player
  std::array<double, kNumPlayers> max_abs_reward{1, 1};
  std::array<int, kNumPlayers> action_counts{2, 2};
  std::array<int, kNumPlayers> observation_counts{2, 2};
  std::int64_t iterations = 1000;  // T

  void validate() const;  // throws ConfigError on violated ranges
};

// lambda * [2 * (1 - discount^(D+1)) / (1 - discount) - 1]; discount = 1
// takes the limit lambda * (2 * (D + 1) - 1).
double epsilon_omega_pi(double lambda, double discount, int horizon);

// max_abs_reward * (1 - discount^D) / (1 - discount); limit D * input at
// discount = 1.
double v_max(double max_abs_reward, double discount, int horizon);
// Same geometric form applied to the reward range.
double delta_u(double reward_range, double discount, int horizon);

struct KConstants {
  double k_max = 0;
  double k_acute = 0;
  bool vacuous = false;  // k_max <= 0: the concentration bound says nothing
};
// k_max = lambda / (4 * v_max * d_inf_max) - 1 / sqrt(C);
// k_acute = min(k_max, lambda / (4 * sqrt(2) * v_max)).
KConstants k_constants(double lambda, int particles, double v_max_value,
                       double d_inf_max);

// (1 + sqrt(2)/sqrt(p)) * max_i(delta_u_i * (|A_i|^3 C)^((D+1)/2)) / (2 sqrt(T)).
// Throws StipulationViolatedError when any action count is below 2.
double escfr_epsilon(double failure_prob,
                     std::span<const double> delta_u_values,
                     std::span<const int> action_counts, int particles,
                     int horizon, std::int64_t iterations);

// Sum over d = 0..D of (actions * observations)^d: pure-policy-relevant
// history count for one player.
double sigma_size(int actions, int observations, int horizon);
// Sum over d = 0..D of actions^d * C^(d/2).
double regret_mass_sum(int actions, int particles, int horizon);
// Sum over d = 0..D of actions^d.
double action_tree_sum(int actions, int horizon);
// (actions^3 * C)^((D+1)/2), the closed form that dominates
// regret_mass_sum * sqrt(action_tree_sum) for actions >= 2, C >= 2.
double regret_mass_bound(int actions, int particles, int horizon);

struct ClampedProbability {
  double raw = 0;       // may be far below 0 when the bound is vacuous
  double value = 0;     // clamped to [0, 1]
  bool clamped = false;
};

struct TheoremProbabilities {
  ClampedProbability single_tree;   // 1 - 5 (4C)^(D+1) exp(-C k'^2), min k'
  ClampedProbability all_policies;  // 1 - 5 sum_i sigma_i (4C)^(D+1) exp(-C k'_i^2)
  ClampedProbability final_bound;   // 1 - 2 [p + 5 max sigma (4C)^(D+1) exp(-C min k'^2)]
};
TheoremProbabilities theorem_probabilities(
    int particles, int horizon, std::array<double, kNumPlayers> k_acute,
    std::array<double, kNumPlayers> sigma_sizes, double failure_prob);

// Every constant assembled from one parameter set, plus the final
// NashConv <= 4 * (epsilon + epsilon_omega_pi) assembly.
struct BoundReport {
  BoundParams params;
  std::array<double, kNumPlayers> v_max_values{0, 0};
  std::array<double, kNumPlayers> delta_u_values{0, 0};
  std::array<KConstants, kNumPlayers> k{};
  std::array<double, kNumPlayers> sigma_sizes{0, 0};
  std::array<double, kNumPlayers> regret_mass_sums{0, 0};
  std::array<double, kNumPlayers> action_tree_sums{0, 0};
  std::array<double, kNumPlayers> regret_mass_bounds{0, 0};
  double epsilon_omega_pi_value = 0;
  double escfr_epsilon_value = 0;
  TheoremProbabilities probabilities;
  double nashconv_bound = 0;
};
BoundReport compute_bound_report(const BoundParams& params);

// Labelled fixed-order table for CLI and file output.
std::string format_bound_report(const BoundReport& report);

}  // namespace posg

#endif  // POSGSOLVE_BOUNDS_H_
