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

#ifndef POSGSOLVE_POMCP_H_
#define POSGSOLVE_POMCP_H_

#include <memory>
#include <vector>

#include "posgsolve/model.h"
#include "posgsolve/policy.h"
#include "posgsolve/random.h"

namespace posg {

struct PomcpParams {
  int num_simulations = 1000;  // per decision
  double ucb_constant = 0;     // <= 0: use the model's value scale
  int rollout_depth = 0;       // <= 0: roll out to the horizon
  int root_particles = 1000;   // responder belief size

  void validate() const;  // throws ConfigError
};

// Best-response planner: the frozen opponent's sampled action is folded into
// the generative step, so the responder faces a single-agent partially
// observable problem whose state is (world state, opponent private history).
class PomcpPlanner {
 public:
  PomcpPlanner(std::shared_ptr<const Model> model, BehaviorPolicy frozen_opponent,
               int responder, const PomcpParams& params);
  ~PomcpPlanner();

  // Plays one episode against the real environment, replanning every step.
  // Returns the responder's discounted return.
  double play_episode(Rng& rng);

 private:
  struct SimState {
    State world;
    InfoSetKey opponent_key;
  };
  struct Node;

  struct StepOutcome {
    SimState state;
    int observation = 0;
    double reward = 0;
    bool terminal = false;
  };
  StepOutcome generative_step(const SimState& state, int responder_action,
                              Rng& rng) const;

  int plan(const std::vector<SimState>& belief, int stage, Rng& rng);
  double simulate(const SimState& state, Node* node, int stage, Rng& rng);
  double rollout(SimState state, int stage, Rng& rng);
  std::vector<SimState> filter_belief(const std::vector<SimState>& belief,
                                      int action, int observation, Rng& rng);

  std::shared_ptr<const Model> model_;
  BehaviorPolicy frozen_;
  int responder_;
  int opponent_;
  PomcpParams params_;
  double ucb_constant_;
  std::unique_ptr<Node> root_;  // tree of the most recent plan() call
};

}  // namespace posg

#endif  // POSGSOLVE_POMCP_H_
