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

#ifndef POSGSOLVE_SOLVER_H_
#define POSGSOLVE_SOLVER_H_

#include <array>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "posgsolve/cdit.h"
#include "posgsolve/normal_form.h"
#include "posgsolve/policy.h"
#include "posgsolve/random.h"

namespace posg {

// Positive-part normalization of cumulative regrets; uniform when no regret
// is positive.
std::vector<double> regret_matching(std::span<const double> regrets);

// ---------------------------------------------------------------------------
// Regret-matching self-play on a matrix game.
// ---------------------------------------------------------------------------

// Simultaneous self-play with exact expected payoffs: each iteration both
// players add their current strategy to the average and accumulate the full
// regret vector against the opponent's mixed strategy. The first iteration
// plays the first pure strategy for both players; symmetric games would
// otherwise start at the uniform fixed point and never move.
struct MatrixRmResult {
  MixedProfile average;
  // NashConv of the running average at each requested checkpoint.
  std::vector<std::pair<std::int64_t, double>> nashconv_trace;
};
MatrixRmResult normal_form_regret_matching(
    const NormalFormGame& game, std::int64_t iterations,
    const std::vector<std::int64_t>& checkpoints);

// ---------------------------------------------------------------------------
// External-sampling counterfactual regret minimization on a particle tree.
// ---------------------------------------------------------------------------

class EscfrSolver {
 public:
  explicit EscfrSolver(Cdit* tree);

  // One traversal per player; the traverser explores all of its actions while
  // the opponent's action and the chance branch are sampled once per node.
  void iterate(Rng& rng);

  std::int64_t iteration_count() const { return iterations_; }
  std::int64_t nodes_touched() const { return nodes_touched_; }

  std::array<BehaviorPolicy, kNumPlayers> average_policies() const;
  // Regret-matching policy induced by the current cumulative regrets.
  BehaviorPolicy current_policy(int player) const;

 private:
  using Table = std::unordered_map<InfoSetKey, std::vector<double>, InfoSetKeyHash>;

  std::vector<double>& entry(Table& table, const InfoSetKey& key, int actions);
  double traverse(CditNode& node, int traverser, int depth, Rng& rng);

  Cdit* tree_;
  std::array<Table, kNumPlayers> regrets_;
  std::array<Table, kNumPlayers> strategy_sums_;
  std::vector<double> discount_pow_;
  std::int64_t iterations_ = 0;
  std::int64_t nodes_touched_ = 0;
};

struct EscfrOptions {
  std::int64_t iterations = 1000;
  std::vector<std::int64_t> snapshot_iterations;  // ascending, each <= iterations
};

struct EscfrSnapshot {
  std::int64_t iteration = 0;
  std::array<BehaviorPolicy, kNumPlayers> policies;
};

struct SolveReport {
  std::int64_t iterations = 0;
  std::int64_t nodes_touched = 0;
  std::array<BehaviorPolicy, kNumPlayers> policies;  // final averages
  std::vector<EscfrSnapshot> snapshots;
};

SolveReport solve_escfr(Cdit& tree, const EscfrOptions& options, Rng& rng);

// ---------------------------------------------------------------------------
// Full-width counterfactual regret minimization on the exact game.
// ---------------------------------------------------------------------------

// Reference solver enumerating every joint history with exact transition and
// observation probabilities. Throws EnumerationTooLargeError when the joint
// history tree exceeds the guard.
struct VanillaCfrResult {
  std::array<BehaviorPolicy, kNumPlayers> average_policies;
  std::int64_t iterations = 0;
};
VanillaCfrResult vanilla_cfr_exact(const OracleGame& game, std::int64_t iterations,
                                   std::int64_t history_guard = 1000000);

}  // namespace posg

#endif  // POSGSOLVE_SOLVER_H_
