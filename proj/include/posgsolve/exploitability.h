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

#ifndef POSGSOLVE_EXPLOITABILITY_H_
#define POSGSOLVE_EXPLOITABILITY_H_

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "posgsolve/model.h"
#include "posgsolve/policy.h"
#include "posgsolve/pomcp.h"
#include "posgsolve/solver.h"

namespace posg {

struct ValueEstimate {
  double mean = 0;
  double se = 0;
  std::int64_t episodes = 0;
};

// Monte Carlo self-play value of the joint policy. Episodes use rngs derived
// from one master draw, so the estimate is independent of evaluation order.
std::array<ValueEstimate, kNumPlayers> rollout_value(
    std::shared_ptr<const Model> model,
    const std::array<BehaviorPolicy, kNumPlayers>& policies,
    std::int64_t episodes, Rng& rng);

// Mean discounted return of a per-step replanning best responder against the
// frozen opponent. A sampling-based maximizer approaches the true best
// response from below.
ValueEstimate pomcp_best_response(std::shared_ptr<const Model> model,
                                  const BehaviorPolicy& frozen_opponent,
                                  int responder, const PomcpParams& params,
                                  std::int64_t episodes, Rng& rng);

struct ExploitabilityPoint {
  std::int64_t iteration = 0;
  std::array<double, kNumPlayers> exploitability{0, 0};
  std::array<double, kNumPlayers> se{0, 0};
  double nashconv = 0;
  double nashconv_se = 0;
  std::int64_t episodes = 0;
};

// Zero-sum assembly: e_i = own self-play value + opponent's best-response
// value; NashConv is the sum over players.
ExploitabilityPoint estimate_exploitability(
    std::shared_ptr<const Model> model,
    const std::array<BehaviorPolicy, kNumPlayers>& policies,
    const PomcpParams& params, std::int64_t episodes, Rng& rng,
    std::int64_t iteration_label = 0);

// One point per solver snapshot.
std::vector<ExploitabilityPoint> exploitability_curve(
    std::shared_ptr<const Model> model, const std::vector<EscfrSnapshot>& snapshots,
    const PomcpParams& params, std::int64_t episodes, Rng& rng);

}  // namespace posg

#endif  // POSGSOLVE_EXPLOITABILITY_H_
