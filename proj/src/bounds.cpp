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

#include "posgsolve/bounds.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "posgsolve/errors.h"

namespace posg {
namespace {

// (1 - discount^n) / (1 - discount), with the n-term limit at discount = 1.
double geometric_sum(double discount, int terms) {
  if (terms <= 0) return 0;
  if (discount == 1.0) return static_cast<double>(terms);
  return (1.0 - std::pow(discount, terms)) / (1.0 - discount);
}

ClampedProbability clamp_probability(double raw) {
  ClampedProbability out;
  out.raw = raw;
  out.value = std::clamp(raw, 0.0, 1.0);
  out.clamped = out.value != raw;
  return out;
}

}  // namespace

void BoundParams::validate() const {
  if (!(lambda > 0)) throw ConfigError("lambda", "must be > 0");
  if (particles < 1) throw ConfigError("particles", "must be >= 1");
  if (horizon < 0) throw ConfigError("horizon", "must be >= 0");
  if (!(discount >= 0 && discount <= 1)) {
    throw ConfigError("discount", "must be in [0, 1]");
  }
  if (!(d_inf_max >= 1)) throw ConfigError("d_inf_max", "must be >= 1");
  if (!(failure_prob > 0 && failure_prob < 1)) {
    throw ConfigError("failure_prob", "must be in (0, 1)");
  }
  for (int p = 0; p < kNumPlayers; ++p) {
    if (!(reward_range[p] >= 0)) throw ConfigError("reward_range", "must be >= 0");
    if (!(max_abs_reward[p] >= 0)) {
      throw ConfigError("max_abs_reward", "must be >= 0");
    }
    if (action_counts[p] < 1) throw ConfigError("action_counts", "must be >= 1");
    if (observation_counts[p] < 1) {
      throw ConfigError("observation_counts", "must be >= 1");
    }
  }
  if (iterations < 1) throw ConfigError("iterations", "must be >= 1");
}

double epsilon_omega_pi(double lambda, double discount, int horizon) {
  return lambda * (2.0 * geometric_sum(discount, horizon + 1) - 1.0);
}

double v_max(double max_abs_reward, double discount, int horizon) {
  return max_abs_reward * geometric_sum(discount, horizon);
}

double delta_u(double reward_range, double discount, int horizon) {
  return reward_range * geometric_sum(discount, horizon);
}

KConstants k_constants(double lambda, int particles, double v_max_value,
                       double d_inf_max) {
  KConstants out;
  out.k_max = lambda / (4.0 * v_max_value * d_inf_max) -
              1.0 / std::sqrt(static_cast<double>(particles));
  out.k_acute = std::min(out.k_max, lambda / (4.0 * std::sqrt(2.0) * v_max_value));
  out.vacuous = !(out.k_max > 0);
  return out;
}

double escfr_epsilon(double failure_prob, std::span<const double> delta_u_values,
                     std::span<const int> action_counts, int particles,
                     int horizon, std::int64_t iterations) {
  double worst = 0;
  for (std::size_t i = 0; i < action_counts.size(); ++i) {
    if (action_counts[i] < 2) {
      throw StipulationViolatedError(
          "player " + std::to_string(i + 1) + " has " +
          std::to_string(action_counts[i]) +
          " actions; the iteration bound requires at least 2");
    }
    const double base = std::pow(static_cast<double>(action_counts[i]), 3) *
                        static_cast<double>(particles);
    const double grown =
        delta_u_values[i] * std::pow(base, (horizon + 1) / 2.0);
    worst = std::max(worst, grown);
  }
  const double multiplier = 1.0 + std::sqrt(2.0) / std::sqrt(failure_prob);
  return multiplier * worst / (2.0 * std::sqrt(static_cast<double>(iterations)));
}

double sigma_size(int actions, int observations, int horizon) {
  double total = 0;
  double layer = 1;
  const double branching = static_cast<double>(actions) * observations;
  for (int d = 0; d <= horizon; ++d) {
    total += layer;
    layer *= branching;
  }
  return total;
}

double regret_mass_sum(int actions, int particles, int horizon) {
  double total = 0;
  double layer = 1;
  const double growth =
      static_cast<double>(actions) * std::sqrt(static_cast<double>(particles));
  for (int d = 0; d <= horizon; ++d) {
    total += layer;
    layer *= growth;
  }
  return total;
}

double action_tree_sum(int actions, int horizon) {
  double total = 0;
  double layer = 1;
  for (int d = 0; d <= horizon; ++d) {
    total += layer;
    layer *= actions;
  }
  return total;
}

double regret_mass_bound(int actions, int particles, int horizon) {
  const double base = std::pow(static_cast<double>(actions), 3) *
                      static_cast<double>(particles);
  return std::pow(base, (horizon + 1) / 2.0);
}

TheoremProbabilities theorem_probabilities(
    int particles, int horizon, std::array<double, kNumPlayers> k_acute,
    std::array<double, kNumPlayers> sigma_sizes, double failure_prob) {
  const double c = static_cast<double>(particles);
  const double tree_factor = std::pow(4.0 * c, horizon + 1);
  const double k_min = std::min(k_acute[0], k_acute[1]);
  const double sigma_max = std::max(sigma_sizes[0], sigma_sizes[1]);

  TheoremProbabilities out;
  out.single_tree =
      clamp_probability(1.0 - 5.0 * tree_factor * std::exp(-c * k_min * k_min));
  double union_tail = 0;
  for (int p = 0; p < kNumPlayers; ++p) {
    union_tail +=
        sigma_sizes[p] * tree_factor * std::exp(-c * k_acute[p] * k_acute[p]);
  }
  out.all_policies = clamp_probability(1.0 - 5.0 * union_tail);
  out.final_bound = clamp_probability(
      1.0 - 2.0 * (failure_prob +
                   5.0 * sigma_max * tree_factor * std::exp(-c * k_min * k_min)));
  return out;
}

BoundReport compute_bound_report(const BoundParams& params) {
  params.validate();
  BoundReport report;
  report.params = params;
  for (int p = 0; p < kNumPlayers; ++p) {
    report.v_max_values[p] =
        v_max(params.max_abs_reward[p], params.discount, params.horizon);
    report.delta_u_values[p] =
        delta_u(params.reward_range[p], params.discount, params.horizon);
    report.k[p] = k_constants(params.lambda, params.particles,
                              report.v_max_values[p], params.d_inf_max);
    report.sigma_sizes[p] = sigma_size(
        params.action_counts[p], params.observation_counts[p], params.horizon);
    report.regret_mass_sums[p] = regret_mass_sum(params.action_counts[p],
                                                 params.particles, params.horizon);
    report.action_tree_sums[p] =
        action_tree_sum(params.action_counts[p], params.horizon);
    report.regret_mass_bounds[p] = regret_mass_bound(
        params.action_counts[p], params.particles, params.horizon);
  }
  report.epsilon_omega_pi_value =
      epsilon_omega_pi(params.lambda, params.discount, params.horizon);
  report.escfr_epsilon_value =
      escfr_epsilon(params.failure_prob, report.delta_u_values,
                    params.action_counts, params.particles, params.horizon,
                    params.iterations);
  report.probabilities = theorem_probabilities(
      params.particles, params.horizon,
      {report.k[0].k_acute, report.k[1].k_acute}, report.sigma_sizes,
      params.failure_prob);
  report.nashconv_bound =
      4.0 * (report.escfr_epsilon_value + report.epsilon_omega_pi_value);
  return report;
}

std::string format_bound_report(const BoundReport& report) {
  std::ostringstream out;
  char line[256];
  auto row = [&](const char* label, double value) {
    std::snprintf(line, sizeof(line), "%-28s %.12g\n", label, value);
    out << line;
  };
  const BoundParams& p = report.params;
  out << "bound report\n";
  row("lambda", p.lambda);
  row("particles", p.particles);
  row("horizon", p.horizon);
  row("discount", p.discount);
  row("d_inf_max", p.d_inf_max);
  row("failure_prob", p.failure_prob);
  row("iterations", static_cast<double>(p.iterations));
  for (int i = 0; i < kNumPlayers; ++i) {
    std::snprintf(line, sizeof(line), "player %d: |A|=%d |O|=%d dR=%.12g\n", i + 1,
                  p.action_counts[i], p.observation_counts[i], p.reward_range[i]);
    out << line;
    row("  v_max", report.v_max_values[i]);
    row("  delta_u", report.delta_u_values[i]);
    row("  k_max", report.k[i].k_max);
    row("  k_acute", report.k[i].k_acute);
    out << "  k_max_vacuous               " << (report.k[i].vacuous ? "yes" : "no")
        << "\n";
    row("  sigma_size", report.sigma_sizes[i]);
    row("  regret_mass_sum", report.regret_mass_sums[i]);
    row("  action_tree_sum", report.action_tree_sums[i]);
    row("  regret_mass_bound", report.regret_mass_bounds[i]);
  }
  row("epsilon_omega_pi", report.epsilon_omega_pi_value);
  row("escfr_epsilon", report.escfr_epsilon_value);
  row("prob_single_tree_raw", report.probabilities.single_tree.raw);
  row("prob_single_tree", report.probabilities.single_tree.value);
  row("prob_all_policies_raw", report.probabilities.all_policies.raw);
  row("prob_all_policies", report.probabilities.all_policies.value);
  row("prob_final_raw", report.probabilities.final_bound.raw);
  row("prob_final", report.probabilities.final_bound.value);
  row("nashconv_bound", report.nashconv_bound);
  return out.str();
}

}  // namespace posg
