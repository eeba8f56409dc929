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

#ifndef POSGSOLVE_NORMAL_FORM_H_
#define POSGSOLVE_NORMAL_FORM_H_

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "posgsolve/cdit.h"
#include "posgsolve/model.h"
#include "posgsolve/policy.h"

namespace posg {

using Matrix = std::vector<std::vector<double>>;

// Normal-form view of a game. payoff[p][j][k] is player p's utility when p
// plays its pure policy j and the opponent plays its pure policy k.
struct NormalFormGame {
  std::array<Matrix, kNumPlayers> payoff;

  int num_policies(int player) const {
    return static_cast<int>(payoff[player].size());
  }
  // Checks payoff[0][j][k] == -payoff[1][k][j] within tol.
  bool is_zero_sum(double tol = 1e-9) const;
};

// Builds both players' views from player 1's matrix of a zero-sum game.
NormalFormGame matrix_game(const Matrix& player0_payoff);
NormalFormGame matching_pennies_matrix();
NormalFormGame rock_paper_scissors_matrix();

// A mixed profile: one distribution over pure policies per player.
using MixedProfile = std::array<std::vector<double>, kNumPlayers>;

// ---------------------------------------------------------------------------
// Pure-policy catalogs
// ---------------------------------------------------------------------------

// Indexed family of deterministic mappings from private histories to actions.
// Policies are not stored explicitly: policy j's action at history index h is
// digit h of j in base num_actions.
struct PurePolicyCatalog {
  int player = 0;
  int num_actions = 1;
  std::vector<InfoSetKey> histories;  // canonical order: depth, then lex
  std::unordered_map<InfoSetKey, int, InfoSetKeyHash> index;
  std::int64_t count = 1;             // num_actions ^ histories.size()

  int action(std::int64_t policy, int history_index) const;
  // Histories outside the catalog take the default action 0 (surrogate mode).
  int action_at(std::int64_t policy, const InfoSetKey& key) const;
};

inline constexpr std::int64_t kDefaultPolicyGuard = 100000;

// Full catalog over every private history of length < horizon. Throws
// EnumerationTooLargeError when the policy count exceeds the guard.
PurePolicyCatalog enumerate_pure_policies(const PosgSpec& spec, int player,
                                          int horizon,
                                          std::int64_t guard = kDefaultPolicyGuard);
// Surrogate mode: histories restricted to those realized in the tree
// (registry mode required); off-tree histories default to action 0.
PurePolicyCatalog enumerate_pure_policies(const Cdit& tree, int player,
                                          std::int64_t guard = kDefaultPolicyGuard);

// ---------------------------------------------------------------------------
// Utilities and payoff matrices
// ---------------------------------------------------------------------------

// Exact expected discounted utility of a joint pure policy, enumerating all
// states, transitions, and observations.
std::array<double, kNumPlayers> exact_pure_utility(const OracleGame& game,
                                                   const PurePolicyCatalog& cat0,
                                                   const PurePolicyCatalog& cat1,
                                                   std::int64_t policy0,
                                                   std::int64_t policy1);

// Exact expected utility under behavior policies (uniform fallback applies).
std::array<double, kNumPlayers> exact_behavior_value(
    const OracleGame& game, const std::array<BehaviorPolicy, kNumPlayers>& policies);

// Full exact payoff matrices over the catalogs.
NormalFormGame exact_payoff_matrices(const OracleGame& game,
                                     const PurePolicyCatalog& cat0,
                                     const PurePolicyCatalog& cat1);

// Payoff matrices estimated on the fixed particle tree: evaluation walks the
// tree averaging over the live chance branches of each step.
NormalFormGame estimated_payoff_matrices(Cdit& tree, const PurePolicyCatalog& cat0,
                                         const PurePolicyCatalog& cat1);

// Realization-equivalent mixture over the catalog's pure policies: the weight
// of policy j is the product of the behavior probabilities of its choices.
std::vector<double> behavior_mixture(const BehaviorPolicy& policy,
                                     const PurePolicyCatalog& catalog);

// ---------------------------------------------------------------------------
// Equilibrium-gap measures
// ---------------------------------------------------------------------------

// Best achievable payoff against the opponent's mixture minus the profile's
// payoff; the maximum over mixed deviations is attained at a pure row.
double deviation_incentive(const NormalFormGame& game, const MixedProfile& profile,
                           int player);
double best_response_value(const NormalFormGame& game, const MixedProfile& profile,
                           int player);
double nashconv(const NormalFormGame& game, const MixedProfile& profile);

// Sandwich check between the gap in a true game A and an estimate of it:
// with E = A - A_est, dev_A <= dev_est + dev_E <= dev_est + 2 * max|E|.
struct ErrorBoundReport {
  std::array<double, kNumPlayers> dev_true{0, 0};
  std::array<double, kNumPlayers> dev_est{0, 0};
  std::array<double, kNumPlayers> dev_err{0, 0};
  std::array<double, kNumPlayers> err_inf{0, 0};
  double nashconv_true = 0;
  double nashconv_bound = 0;  // sum of dev_est + 2 * err_inf
  bool chain_holds = false;
  bool corollary_holds = false;
};
ErrorBoundReport payoff_error_bound_check(const NormalFormGame& true_game,
                                          const NormalFormGame& estimated_game,
                                          const MixedProfile& profile,
                                          double tol = 1e-12);

// ---------------------------------------------------------------------------
// Prepared exact evaluator for repeated NashConv queries on one tabular game.
// ---------------------------------------------------------------------------

class ExactEvaluator {
 public:
  explicit ExactEvaluator(const OracleGame& game,
                          std::int64_t guard = kDefaultPolicyGuard);

  const NormalFormGame& matrices() const { return matrices_; }
  const PurePolicyCatalog& catalog(int player) const { return catalogs_[player]; }

  MixedProfile mixture(const std::array<BehaviorPolicy, kNumPlayers>& policies) const;
  double nashconv(const std::array<BehaviorPolicy, kNumPlayers>& policies) const;
  std::array<double, kNumPlayers> deviations(
      const std::array<BehaviorPolicy, kNumPlayers>& policies) const;

 private:
  std::array<PurePolicyCatalog, kNumPlayers> catalogs_;
  NormalFormGame matrices_;
};

}  // namespace posg

#endif  // POSGSOLVE_NORMAL_FORM_H_
