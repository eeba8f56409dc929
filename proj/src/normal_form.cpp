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

#include "posgsolve/normal_form.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "posgsolve/errors.h"
#include "posgsolve/stats.h"

namespace posg {
namespace {

// Guard on explicit matrix construction; catalogs can be larger than this
// when only sampled evaluation is needed.
constexpr std::int64_t kMatrixCellGuard = 1 << 24;

void check_matrix_size(std::int64_t rows, std::int64_t cols) {
  if (rows * cols > kMatrixCellGuard) {
    throw EnumerationTooLargeError(
        "payoff matrix would have " + std::to_string(rows * cols) +
        " cells (limit " + std::to_string(kMatrixCellGuard) + ")");
  }
}

double profile_value(const Matrix& payoff, const std::vector<double>& own,
                     const std::vector<double>& opp) {
  double value = 0;
  for (std::size_t j = 0; j < payoff.size(); ++j) {
    if (own[j] == 0) continue;
    double row = 0;
    for (std::size_t k = 0; k < payoff[j].size(); ++k) row += payoff[j][k] * opp[k];
    value += own[j] * row;
  }
  return value;
}

}  // namespace

bool NormalFormGame::is_zero_sum(double tol) const {
  if (payoff[0].empty() || payoff[1].empty()) return false;
  if (payoff[0].size() != payoff[1][0].size() ||
      payoff[1].size() != payoff[0][0].size()) {
    return false;
  }
  for (std::size_t j = 0; j < payoff[0].size(); ++j) {
    for (std::size_t k = 0; k < payoff[0][j].size(); ++k) {
      if (std::abs(payoff[0][j][k] + payoff[1][k][j]) > tol) return false;
    }
  }
  return true;
}

NormalFormGame matrix_game(const Matrix& player0_payoff) {
  NormalFormGame game;
  game.payoff[0] = player0_payoff;
  const std::size_t rows = player0_payoff.size();
  const std::size_t cols = rows == 0 ? 0 : player0_payoff[0].size();
  game.payoff[1].assign(cols, std::vector<double>(rows, 0));
  for (std::size_t j = 0; j < rows; ++j) {
    for (std::size_t k = 0; k < cols; ++k) {
      game.payoff[1][k][j] = -player0_payoff[j][k];
    }
  }
  return game;
}

NormalFormGame matching_pennies_matrix() {
  return matrix_game({{1, -1}, {-1, 1}});
}

NormalFormGame rock_paper_scissors_matrix() {
  return matrix_game({{0, -1, 1}, {1, 0, -1}, {-1, 1, 0}});
}

// ---------------------------------------------------------------------------
// Catalogs
// ---------------------------------------------------------------------------

int PurePolicyCatalog::action(std::int64_t policy, int history_index) const {
  for (int i = 0; i < history_index; ++i) policy /= num_actions;
  return static_cast<int>(policy % num_actions);
}

int PurePolicyCatalog::action_at(std::int64_t policy, const InfoSetKey& key) const {
  auto it = index.find(key);
  if (it == index.end()) return 0;
  return action(policy, it->second);
}

namespace {

PurePolicyCatalog finalize_catalog(int player, int num_actions,
                                   std::vector<InfoSetKey> histories,
                                   std::int64_t guard) {
  PurePolicyCatalog catalog;
  catalog.player = player;
  catalog.num_actions = num_actions;
  std::sort(histories.begin(), histories.end());
  catalog.histories = std::move(histories);
  catalog.count = 1;
  for (std::size_t i = 0; i < catalog.histories.size(); ++i) {
    if (catalog.count > guard / num_actions) {
      throw EnumerationTooLargeError(
          "pure policy count exceeds " + std::to_string(guard) + " for player " +
          std::to_string(player + 1) + " (" +
          std::to_string(catalog.histories.size()) + " histories, " +
          std::to_string(num_actions) + " actions)");
    }
    catalog.count *= num_actions;
  }
  catalog.index.reserve(catalog.histories.size());
  for (std::size_t i = 0; i < catalog.histories.size(); ++i) {
    catalog.index.emplace(catalog.histories[i], static_cast<int>(i));
  }
  return catalog;
}

}  // namespace

PurePolicyCatalog enumerate_pure_policies(const PosgSpec& spec, int player,
                                          int horizon, std::int64_t guard) {
  const int num_actions = spec.action_counts[player];
  const int num_obs = spec.observation_counts[player];
  std::vector<InfoSetKey> histories;
  std::vector<InfoSetKey> frontier{InfoSetKey{player, {}}};
  for (int depth = 0; depth < horizon; ++depth) {
    histories.insert(histories.end(), frontier.begin(), frontier.end());
    if (depth + 1 == horizon) break;
    std::vector<InfoSetKey> next;
    next.reserve(frontier.size() * static_cast<std::size_t>(num_actions * num_obs));
    for (const InfoSetKey& key : frontier) {
      for (int a = 0; a < num_actions; ++a) {
        for (int o = 0; o < num_obs; ++o) {
          InfoSetKey child = key;
          child.steps.emplace_back(a, o);
          next.push_back(std::move(child));
        }
      }
    }
    frontier = std::move(next);
    if (histories.size() + frontier.size() > 1u << 22) {
      throw EnumerationTooLargeError("private history count exceeds 4194304");
    }
  }
  return finalize_catalog(player, num_actions, std::move(histories), guard);
}

PurePolicyCatalog enumerate_pure_policies(const Cdit& tree, int player,
                                          std::int64_t guard) {
  const PosgSpec& spec = tree.model().spec();
  std::vector<InfoSetKey> histories;
  for (const auto& [key, members] : tree.registry()) {
    if (key.player != player || key.depth() >= tree.horizon()) continue;
    histories.push_back(key);
  }
  if (histories.empty()) histories.push_back(InfoSetKey{player, {}});
  return finalize_catalog(player, spec.action_counts[player], std::move(histories),
                          guard);
}

// ---------------------------------------------------------------------------
// Exact utilities
// ---------------------------------------------------------------------------

namespace {

// Shared recursion over (state, both private histories, stage). The walk is
// exponential in the horizon; callers keep these games tiny.
template <typename ActionDist>
std::array<double, kNumPlayers> exact_value_recursive(const OracleGame& game,
                                                      int state, InfoSetKey& key0,
                                                      InfoSetKey& key1, int stage,
                                                      const ActionDist& dist) {
  const PosgSpec& spec = game.spec();
  if (stage >= spec.horizon) return {0, 0};
  const int a_count0 = spec.action_counts[0];
  const int a_count1 = spec.action_counts[1];
  const std::vector<double> probs0 = dist(0, key0);
  const std::vector<double> probs1 = dist(1, key1);
  std::array<double, kNumPlayers> value{0, 0};
  for (int a0 = 0; a0 < a_count0; ++a0) {
    if (probs0[a0] == 0) continue;
    for (int a1 = 0; a1 < a_count1; ++a1) {
      if (probs1[a1] == 0) continue;
      const double p_act = probs0[a0] * probs1[a1];
      const int code = joint_action_code(spec, {a0, a1});
      const auto& reward = game.state_reward(state, code);
      value[0] += p_act * reward[0];
      value[1] += p_act * reward[1];
      if (stage + 1 >= spec.horizon) continue;
      for (int next = 0; next < game.num_states(); ++next) {
        const double p_next = game.transition_prob(state, code, next);
        if (p_next == 0) continue;
        for (int o0 = 0; o0 < spec.observation_counts[0]; ++o0) {
          const double p_o0 = game.observation_prob(0, code, next, o0);
          if (p_o0 == 0) continue;
          for (int o1 = 0; o1 < spec.observation_counts[1]; ++o1) {
            const double p_o1 = game.observation_prob(1, code, next, o1);
            if (p_o1 == 0) continue;
            key0.steps.emplace_back(a0, o0);
            key1.steps.emplace_back(a1, o1);
            const auto child = exact_value_recursive(game, next, key0, key1,
                                                     stage + 1, dist);
            key0.steps.pop_back();
            key1.steps.pop_back();
            const double w = p_act * p_next * p_o0 * p_o1 * spec.discount;
            value[0] += w * child[0];
            value[1] += w * child[1];
          }
        }
      }
    }
  }
  return value;
}

template <typename ActionDist>
std::array<double, kNumPlayers> exact_value(const OracleGame& game,
                                            const ActionDist& dist) {
  InfoSetKey key0{0, {}};
  InfoSetKey key1{1, {}};
  std::array<double, kNumPlayers> value{0, 0};
  const std::vector<double>& b0 = game.initial_belief();
  for (int s = 0; s < game.num_states(); ++s) {
    if (b0[s] == 0) continue;
    const auto v = exact_value_recursive(game, s, key0, key1, 0, dist);
    value[0] += b0[s] * v[0];
    value[1] += b0[s] * v[1];
  }
  return value;
}

}  // namespace

std::array<double, kNumPlayers> exact_pure_utility(const OracleGame& game,
                                                   const PurePolicyCatalog& cat0,
                                                   const PurePolicyCatalog& cat1,
                                                   std::int64_t policy0,
                                                   std::int64_t policy1) {
  auto dist = [&](int player, const InfoSetKey& key) {
    const PurePolicyCatalog& cat = player == 0 ? cat0 : cat1;
    const std::int64_t policy = player == 0 ? policy0 : policy1;
    std::vector<double> probs(cat.num_actions, 0.0);
    probs[cat.action_at(policy, key)] = 1.0;
    return probs;
  };
  return exact_value(game, dist);
}

std::array<double, kNumPlayers> exact_behavior_value(
    const OracleGame& game,
    const std::array<BehaviorPolicy, kNumPlayers>& policies) {
  auto dist = [&](int player, const InfoSetKey& key) {
    return policies[player].probs(key);
  };
  return exact_value(game, dist);
}

NormalFormGame exact_payoff_matrices(const OracleGame& game,
                                     const PurePolicyCatalog& cat0,
                                     const PurePolicyCatalog& cat1) {
  check_matrix_size(cat0.count, cat1.count);
  NormalFormGame result;
  result.payoff[0].assign(cat0.count, std::vector<double>(cat1.count, 0));
  result.payoff[1].assign(cat1.count, std::vector<double>(cat0.count, 0));
  for (std::int64_t j = 0; j < cat0.count; ++j) {
    for (std::int64_t k = 0; k < cat1.count; ++k) {
      const auto u = exact_pure_utility(game, cat0, cat1, j, k);
      result.payoff[0][j][k] = u[0];
      result.payoff[1][k][j] = u[1];
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Tree-based estimated matrices
// ---------------------------------------------------------------------------

namespace {

std::array<double, kNumPlayers> tree_pure_value(Cdit& tree, CditNode& node,
                                                const PurePolicyCatalog& cat0,
                                                const PurePolicyCatalog& cat1,
                                                std::int64_t policy0,
                                                std::int64_t policy1) {
  if (node.depth() >= tree.horizon() ||
      node.terminal_weight() > kTerminalLeafWeight) {
    return {0, 0};
  }
  const PosgSpec& spec = tree.model().spec();
  const int a0 = cat0.action_at(policy0, node.info_set_key(spec, 0));
  const int a1 = cat1.action_at(policy1, node.info_set_key(spec, 1));
  const int code = joint_action_code(spec, {a0, a1});
  std::array<double, kNumPlayers> value = node.mean_reward(tree.model(), code);
  if (node.depth() + 1 >= tree.horizon()) return value;
  std::array<double, kNumPlayers> child_sum{0, 0};
  int live = 0;
  for (int branch = 0; branch < tree.branch_count(); ++branch) {
    auto child = tree.expand_child(node, code, branch);
    if (!child) continue;
    const auto child_value =
        tree_pure_value(tree, *child, cat0, cat1, policy0, policy1);
    child_sum[0] += child_value[0];
    child_sum[1] += child_value[1];
    ++live;
  }
  if (live > 0) {
    value[0] += spec.discount * child_sum[0] / live;
    value[1] += spec.discount * child_sum[1] / live;
  }
  return value;
}

}  // namespace

NormalFormGame estimated_payoff_matrices(Cdit& tree, const PurePolicyCatalog& cat0,
                                         const PurePolicyCatalog& cat1) {
  check_matrix_size(cat0.count, cat1.count);
  NormalFormGame result;
  result.payoff[0].assign(cat0.count, std::vector<double>(cat1.count, 0));
  result.payoff[1].assign(cat1.count, std::vector<double>(cat0.count, 0));
  for (std::int64_t j = 0; j < cat0.count; ++j) {
    for (std::int64_t k = 0; k < cat1.count; ++k) {
      const auto u = tree_pure_value(tree, tree.root(), cat0, cat1, j, k);
      result.payoff[0][j][k] = u[0];
      result.payoff[1][k][j] = u[1];
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Mixtures and gap measures
// ---------------------------------------------------------------------------

std::vector<double> behavior_mixture(const BehaviorPolicy& policy,
                                     const PurePolicyCatalog& catalog) {
  std::vector<std::vector<double>> per_history(catalog.histories.size());
  for (std::size_t h = 0; h < catalog.histories.size(); ++h) {
    per_history[h] = policy.probs(catalog.histories[h]);
  }
  std::vector<double> mixture(catalog.count, 1.0);
  for (std::int64_t j = 0; j < catalog.count; ++j) {
    std::int64_t digits = j;
    for (std::size_t h = 0; h < catalog.histories.size(); ++h) {
      mixture[j] *= per_history[h][digits % catalog.num_actions];
      digits /= catalog.num_actions;
      if (mixture[j] == 0) break;
    }
  }
  return mixture;
}

double best_response_value(const NormalFormGame& game, const MixedProfile& profile,
                           int player) {
  const Matrix& payoff = game.payoff[player];
  const std::vector<double>& opp = profile[1 - player];
  double best = -std::numeric_limits<double>::infinity();
  for (const std::vector<double>& row : payoff) {
    double value = 0;
    for (std::size_t k = 0; k < row.size(); ++k) value += row[k] * opp[k];
    best = std::max(best, value);
  }
  return best;
}

double deviation_incentive(const NormalFormGame& game, const MixedProfile& profile,
                           int player) {
  return best_response_value(game, profile, player) -
         profile_value(game.payoff[player], profile[player], profile[1 - player]);
}

double nashconv(const NormalFormGame& game, const MixedProfile& profile) {
  return deviation_incentive(game, profile, 0) +
         deviation_incentive(game, profile, 1);
}

ErrorBoundReport payoff_error_bound_check(const NormalFormGame& true_game,
                                          const NormalFormGame& estimated_game,
                                          const MixedProfile& profile, double tol) {
  NormalFormGame error_game;
  for (int p = 0; p < kNumPlayers; ++p) {
    const Matrix& a = true_game.payoff[p];
    const Matrix& b = estimated_game.payoff[p];
    error_game.payoff[p].assign(a.size(), {});
    for (std::size_t j = 0; j < a.size(); ++j) {
      error_game.payoff[p][j].resize(a[j].size());
      for (std::size_t k = 0; k < a[j].size(); ++k) {
        error_game.payoff[p][j][k] = a[j][k] - b[j][k];
      }
    }
  }
  ErrorBoundReport report;
  report.chain_holds = true;
  report.corollary_holds = true;
  for (int p = 0; p < kNumPlayers; ++p) {
    report.dev_true[p] = deviation_incentive(true_game, profile, p);
    report.dev_est[p] = deviation_incentive(estimated_game, profile, p);
    report.dev_err[p] = deviation_incentive(error_game, profile, p);
    double inf = 0;
    for (const auto& row : error_game.payoff[p]) {
      for (double cell : row) inf = std::max(inf, std::abs(cell));
    }
    report.err_inf[p] = inf;
    const bool lower = report.dev_true[p] <= report.dev_est[p] + report.dev_err[p] + tol;
    const bool upper =
        report.dev_est[p] + report.dev_err[p] <= report.dev_est[p] + 2 * inf + tol;
    report.chain_holds = report.chain_holds && lower && upper;
    report.nashconv_bound += report.dev_est[p] + 2 * inf;
  }
  report.nashconv_true = report.dev_true[0] + report.dev_true[1];
  report.corollary_holds = report.nashconv_true <= report.nashconv_bound + tol;
  return report;
}

// ---------------------------------------------------------------------------
// ExactEvaluator
// ---------------------------------------------------------------------------

ExactEvaluator::ExactEvaluator(const OracleGame& game, std::int64_t guard)
    : catalogs_{enumerate_pure_policies(game.spec(), 0, game.spec().horizon, guard),
                enumerate_pure_policies(game.spec(), 1, game.spec().horizon, guard)},
      matrices_(exact_payoff_matrices(game, catalogs_[0], catalogs_[1])) {}

MixedProfile ExactEvaluator::mixture(
    const std::array<BehaviorPolicy, kNumPlayers>& policies) const {
  return {behavior_mixture(policies[0], catalogs_[0]),
          behavior_mixture(policies[1], catalogs_[1])};
}

double ExactEvaluator::nashconv(
    const std::array<BehaviorPolicy, kNumPlayers>& policies) const {
  return posg::nashconv(matrices_, mixture(policies));
}

std::array<double, kNumPlayers> ExactEvaluator::deviations(
    const std::array<BehaviorPolicy, kNumPlayers>& policies) const {
  const MixedProfile profile = mixture(policies);
  return {deviation_incentive(matrices_, profile, 0),
          deviation_incentive(matrices_, profile, 1)};
}

}  // namespace posg
