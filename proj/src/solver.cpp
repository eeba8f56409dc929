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

#include "posgsolve/solver.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "posgsolve/errors.h"

namespace posg {

std::vector<double> regret_matching(std::span<const double> regrets) {
  std::vector<double> probs(regrets.size());
  double positive_sum = 0;
  for (std::size_t a = 0; a < regrets.size(); ++a) {
    probs[a] = regrets[a] > 0 ? regrets[a] : 0.0;
    positive_sum += probs[a];
  }
  if (positive_sum > 0) {
    for (double& p : probs) p /= positive_sum;
  } else {
    std::fill(probs.begin(), probs.end(), 1.0 / static_cast<double>(probs.size()));
  }
  return probs;
}

// ---------------------------------------------------------------------------
// Matrix-game regret matching
// ---------------------------------------------------------------------------

MatrixRmResult normal_form_regret_matching(
    const NormalFormGame& game, std::int64_t iterations,
    const std::vector<std::int64_t>& checkpoints) {
  std::array<std::vector<double>, kNumPlayers> cum_regret;
  std::array<std::vector<double>, kNumPlayers> cum_strategy;
  for (int p = 0; p < kNumPlayers; ++p) {
    cum_regret[p].assign(game.num_policies(p), 0.0);
    cum_strategy[p].assign(game.num_policies(p), 0.0);
  }
  MatrixRmResult result;
  auto next_checkpoint = checkpoints.begin();
  auto record_average = [&](std::int64_t iteration) {
    MixedProfile average;
    for (int p = 0; p < kNumPlayers; ++p) {
      average[p] = cum_strategy[p];
      double total = 0;
      for (double w : average[p]) total += w;
      for (double& w : average[p]) w /= total;
    }
    result.nashconv_trace.emplace_back(iteration, nashconv(game, average));
    return average;
  };

  for (std::int64_t t = 1; t <= iterations; ++t) {
    std::array<std::vector<double>, kNumPlayers> strategy;
    for (int p = 0; p < kNumPlayers; ++p) {
      strategy[p] = regret_matching(cum_regret[p]);
      if (t == 1) {
        std::fill(strategy[p].begin(), strategy[p].end(), 0.0);
        strategy[p][0] = 1.0;
      }
      for (int a = 0; a < game.num_policies(p); ++a) {
        cum_strategy[p][a] += strategy[p][a];
      }
    }
    for (int p = 0; p < kNumPlayers; ++p) {
      const Matrix& payoff = game.payoff[p];
      const std::vector<double>& opponent = strategy[1 - p];
      std::vector<double> action_value(game.num_policies(p), 0.0);
      double current_value = 0;
      for (int a = 0; a < game.num_policies(p); ++a) {
        for (int b = 0; b < game.num_policies(1 - p); ++b) {
          action_value[a] += payoff[a][b] * opponent[b];
        }
        current_value += strategy[p][a] * action_value[a];
      }
      for (int a = 0; a < game.num_policies(p); ++a) {
        cum_regret[p][a] += action_value[a] - current_value;
      }
    }
    while (next_checkpoint != checkpoints.end() && *next_checkpoint == t) {
      record_average(t);
      ++next_checkpoint;
    }
  }
  MixedProfile average;
  for (int p = 0; p < kNumPlayers; ++p) {
    average[p] = cum_strategy[p];
    double total = 0;
    for (double w : average[p]) total += w;
    for (double& w : average[p]) w /= total;
  }
  result.average = std::move(average);
  return result;
}

// ---------------------------------------------------------------------------
// External-sampling CFR on the particle tree
// ---------------------------------------------------------------------------

EscfrSolver::EscfrSolver(Cdit* tree) : tree_(tree) {
  discount_pow_.resize(tree_->horizon() + 1);
  double power = 1.0;
  for (int d = 0; d <= tree_->horizon(); ++d) {
    discount_pow_[d] = power;
    power *= tree_->model().spec().discount;
  }
}

std::vector<double>& EscfrSolver::entry(Table& table, const InfoSetKey& key,
                                        int actions) {
  auto [it, inserted] = table.try_emplace(key);
  if (inserted) it->second.assign(actions, 0.0);
  return it->second;
}

void EscfrSolver::iterate(Rng& rng) {
  for (int traverser = 0; traverser < kNumPlayers; ++traverser) {
    traverse(tree_->root(), traverser, 0, rng);
  }
  ++iterations_;
}

double EscfrSolver::traverse(CditNode& node, int traverser, int depth, Rng& rng) {
  ++nodes_touched_;
  if (depth >= tree_->horizon() || node.terminal_weight() > kTerminalLeafWeight) {
    return 0;
  }
  const PosgSpec& spec = tree_->model().spec();
  const int opponent = 1 - traverser;
  const InfoSetKey own_key = node.info_set_key(spec, traverser);
  const InfoSetKey opp_key = node.info_set_key(spec, opponent);
  std::vector<double>& own_regret =
      entry(regrets_[traverser], own_key, spec.action_counts[traverser]);
  const std::vector<double> own_strategy = regret_matching(own_regret);
  const std::vector<double> opp_strategy = regret_matching(
      entry(regrets_[opponent], opp_key, spec.action_counts[opponent]));

  // The opponent's average policy accumulates its current strategy here; the
  // traverser's average accumulates when roles swap.
  std::vector<double>& opp_sum =
      entry(strategy_sums_[opponent], opp_key, spec.action_counts[opponent]);
  for (std::size_t a = 0; a < opp_strategy.size(); ++a) opp_sum[a] += opp_strategy[a];

  // One opponent action and one chance branch per node visit, shared across
  // the traverser's actions.
  const int opp_action = rnd::sample_weighted(rng, opp_strategy);
  const int branch = rnd::uniform_below(rng, tree_->branch_count());

  const int own_actions = spec.action_counts[traverser];
  std::vector<double> q(own_actions, 0.0);
  for (int a = 0; a < own_actions; ++a) {
    JointAction joint;
    joint[traverser] = a;
    joint[opponent] = opp_action;
    const int code = joint_action_code(spec, joint);
    q[a] = node.mean_reward(tree_->model(), code)[traverser];
    if (depth + 1 < tree_->horizon()) {
      auto child = tree_->expand_child(node, code, branch);
      if (!child) child = tree_->sample_child(node, code, rng);
      if (child) {
        q[a] += spec.discount * traverse(*child, traverser, depth + 1, rng);
      }
    }
  }
  double value = 0;
  for (int a = 0; a < own_actions; ++a) value += own_strategy[a] * q[a];
  const double scale = discount_pow_[depth];
  for (int a = 0; a < own_actions; ++a) {
    own_regret[a] += scale * (q[a] - value);
  }
  return value;
}

std::array<BehaviorPolicy, kNumPlayers> EscfrSolver::average_policies() const {
  const PosgSpec& spec = tree_->model().spec();
  std::array<BehaviorPolicy, kNumPlayers> policies;
  for (int p = 0; p < kNumPlayers; ++p) {
    policies[p] = BehaviorPolicy(p, spec.action_counts[p]);
    for (const auto& [key, sums] : strategy_sums_[p]) {
      double total = 0;
      for (double w : sums) total += w;
      if (total <= 0) continue;
      std::vector<double> probs(sums.size());
      for (std::size_t a = 0; a < sums.size(); ++a) probs[a] = sums[a] / total;
      policies[p].set(key, std::move(probs));
    }
  }
  return policies;
}

BehaviorPolicy EscfrSolver::current_policy(int player) const {
  const PosgSpec& spec = tree_->model().spec();
  BehaviorPolicy policy(player, spec.action_counts[player]);
  for (const auto& [key, regrets] : regrets_[player]) {
    policy.set(key, regret_matching(regrets));
  }
  return policy;
}

SolveReport solve_escfr(Cdit& tree, const EscfrOptions& options, Rng& rng) {
  EscfrSolver solver(&tree);
  SolveReport report;
  auto next_snapshot = options.snapshot_iterations.begin();
  for (std::int64_t t = 1; t <= options.iterations; ++t) {
    solver.iterate(rng);
    while (next_snapshot != options.snapshot_iterations.end() &&
           *next_snapshot == t) {
      report.snapshots.push_back({t, solver.average_policies()});
      ++next_snapshot;
    }
  }
  report.iterations = options.iterations;
  report.nodes_touched = solver.nodes_touched();
  report.policies = solver.average_policies();
  return report;
}

// ---------------------------------------------------------------------------
// Full-width CFR on the exact game
// ---------------------------------------------------------------------------

namespace {

struct InfoState {
  std::vector<double> regret;
  std::vector<double> strategy_sum;
  std::vector<double> stamped_strategy;
  std::int64_t stamp = -1;
};

class VanillaCfr {
 public:
  VanillaCfr(const OracleGame& game, std::int64_t history_guard) : game_(game) {
    const PosgSpec& spec = game.spec();
    // Joint histories at stage t number (|A1||A2||O1||O2|)^t.
    const double branching = static_cast<double>(spec.num_joint_actions()) *
                             spec.num_joint_observations();
    double total = 0;
    double layer = 1;
    for (int t = 0; t < spec.horizon; ++t) {
      total += layer;
      layer *= branching;
      if (total > static_cast<double>(history_guard)) break;
    }
    if (total > static_cast<double>(history_guard)) {
      throw EnumerationTooLargeError(
          "joint history count exceeds guard " + std::to_string(history_guard));
    }
    discount_pow_.resize(spec.horizon + 1);
    double power = 1;
    for (int d = 0; d <= spec.horizon; ++d) {
      discount_pow_[d] = power;
      power *= spec.discount;
    }
  }

  void iterate() {
    ++iteration_;
    InfoSetKey key0{0, {}};
    InfoSetKey key1{1, {}};
    walk(game_.initial_belief(), key0, key1, 0, 1.0, 1.0);
  }

  std::array<BehaviorPolicy, kNumPlayers> average_policies() const {
    const PosgSpec& spec = game_.spec();
    std::array<BehaviorPolicy, kNumPlayers> policies;
    for (int p = 0; p < kNumPlayers; ++p) {
      policies[p] = BehaviorPolicy(p, spec.action_counts[p]);
      for (const auto& [key, state] : tables_[p]) {
        double total = 0;
        for (double w : state.strategy_sum) total += w;
        if (total <= 0) continue;
        std::vector<double> probs(state.strategy_sum.size());
        for (std::size_t a = 0; a < probs.size(); ++a) {
          probs[a] = state.strategy_sum[a] / total;
        }
        policies[p].set(key, std::move(probs));
      }
    }
    return policies;
  }

 private:
  InfoState& info_state(int player, const InfoSetKey& key) {
    auto [it, inserted] = tables_[player].try_emplace(key);
    if (inserted) {
      const int actions = game_.spec().action_counts[player];
      it->second.regret.assign(actions, 0.0);
      it->second.strategy_sum.assign(actions, 0.0);
    }
    return it->second;
  }

  const std::vector<double>& stamped_strategy(int player, const InfoSetKey& key) {
    InfoState& state = info_state(player, key);
    if (state.stamp != iteration_) {
      state.stamped_strategy = regret_matching(state.regret);
      state.stamp = iteration_;
    }
    return state.stamped_strategy;
  }

  // Beliefs are unnormalized: the mass of `belief` is the chance probability
  // of the observation path given the action path. Returned values fold that
  // mass in, so regret increments only need the opponent's own reach.
  std::array<double, kNumPlayers> walk(const std::vector<double>& belief,
                                       InfoSetKey& key0, InfoSetKey& key1, int stage,
                                       double reach0, double reach1) {
    const PosgSpec& spec = game_.spec();
    if (stage >= spec.horizon) return {0, 0};
    const std::vector<double> strat0 = stamped_strategy(0, key0);
    const std::vector<double> strat1 = stamped_strategy(1, key1);
    {
      InfoState& s0 = info_state(0, key0);
      InfoState& s1 = info_state(1, key1);
      for (std::size_t a = 0; a < strat0.size(); ++a) {
        s0.strategy_sum[a] += reach0 * strat0[a];
      }
      for (std::size_t a = 0; a < strat1.size(); ++a) {
        s1.strategy_sum[a] += reach1 * strat1[a];
      }
    }
    const int actions0 = spec.action_counts[0];
    const int actions1 = spec.action_counts[1];
    std::vector<double> q0(actions0, 0.0);
    std::vector<double> q1(actions1, 0.0);
    std::array<double, kNumPlayers> value{0, 0};
    std::vector<double> child_belief(game_.num_states());
    for (int a0 = 0; a0 < actions0; ++a0) {
      for (int a1 = 0; a1 < actions1; ++a1) {
        const int code = joint_action_code(spec, {a0, a1});
        std::array<double, kNumPlayers> u{0, 0};
        for (int s = 0; s < game_.num_states(); ++s) {
          if (belief[s] == 0) continue;
          const auto& reward = game_.state_reward(s, code);
          u[0] += belief[s] * reward[0];
          u[1] += belief[s] * reward[1];
        }
        if (stage + 1 < spec.horizon) {
          std::vector<double> pushed(game_.num_states(), 0.0);
          for (int s = 0; s < game_.num_states(); ++s) {
            if (belief[s] == 0) continue;
            for (int next = 0; next < game_.num_states(); ++next) {
              pushed[next] += belief[s] * game_.transition_prob(s, code, next);
            }
          }
          for (int o0 = 0; o0 < spec.observation_counts[0]; ++o0) {
            for (int o1 = 0; o1 < spec.observation_counts[1]; ++o1) {
              double mass = 0;
              for (int next = 0; next < game_.num_states(); ++next) {
                child_belief[next] = pushed[next] *
                                     game_.observation_prob(0, code, next, o0) *
                                     game_.observation_prob(1, code, next, o1);
                mass += child_belief[next];
              }
              if (mass < 1e-15) continue;
              key0.steps.emplace_back(a0, o0);
              key1.steps.emplace_back(a1, o1);
              const auto child =
                  walk(child_belief, key0, key1, stage + 1, reach0 * strat0[a0],
                       reach1 * strat1[a1]);
              key0.steps.pop_back();
              key1.steps.pop_back();
              u[0] += spec.discount * child[0];
              u[1] += spec.discount * child[1];
            }
          }
        }
        q0[a0] += strat1[a1] * u[0];
        q1[a1] += strat0[a0] * u[1];
        const double joint_prob = strat0[a0] * strat1[a1];
        value[0] += joint_prob * u[0];
        value[1] += joint_prob * u[1];
      }
    }
    const double scale = discount_pow_[stage];
    InfoState& s0 = info_state(0, key0);
    for (int a0 = 0; a0 < actions0; ++a0) {
      s0.regret[a0] += scale * reach1 * (q0[a0] - value[0]);
    }
    InfoState& s1 = info_state(1, key1);
    for (int a1 = 0; a1 < actions1; ++a1) {
      s1.regret[a1] += scale * reach0 * (q1[a1] - value[1]);
    }
    return value;
  }

  const OracleGame& game_;
  std::array<std::map<InfoSetKey, InfoState>, kNumPlayers> tables_;
  std::vector<double> discount_pow_;
  std::int64_t iteration_ = 0;
};

}  // namespace

VanillaCfrResult vanilla_cfr_exact(const OracleGame& game, std::int64_t iterations,
                                   std::int64_t history_guard) {
  VanillaCfr solver(game, history_guard);
  for (std::int64_t t = 0; t < iterations; ++t) solver.iterate();
  return {solver.average_policies(), iterations};
}

}  // namespace posg
