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

#ifndef POSGSOLVE_BELIEF_H_
#define POSGSOLVE_BELIEF_H_

#include <vector>

#include "posgsolve/model.h"
#include "posgsolve/random.h"
#include "posgsolve/types.h"

namespace posg {

// Weighted particle approximation of a conditional state distribution.
struct ParticleBelief {
  std::vector<State> particles;
  std::vector<double> weights;  // non-negative, normalized to 1

  int size() const { return static_cast<int>(particles.size()); }
  void validate() const;  // throws ContractViolationError on malformed beliefs

  // Total weight on terminal states.
  double terminal_weight(const Model& model) const;
  // Belief-weighted immediate reward for a joint action.
  std::array<double, kNumPlayers> mean_reward(const Model& model,
                                              const JointAction& a) const;
};

// C independent draws from the initial state distribution, uniform weights.
ParticleBelief sample_initial_belief(const Model& model, int num_particles, Rng& rng);

// Propagates every particle one step under the joint action. The result is
// index-aligned with the input belief. Terminal particles self-loop.
std::vector<State> propagate(const Model& model, const ParticleBelief& belief,
                             const JointAction& a, Rng& rng);

// Multiplies prior weights by the joint observation likelihood at each
// propagated particle and renormalizes. Throws ParticleDepletionError naming
// the (action, observation) pair if every weight vanishes.
ParticleBelief reweight(const Model& model, std::vector<State> propagated,
                        const std::vector<double>& prior_weights, const JointAction& a,
                        const JointObservation& o);

// One sampled observation branch: a particle index is drawn by weight, all
// particles are propagated, and the branch observation is the one emitted at
// the drawn particle's successor.
struct ObservationBranch {
  JointObservation observation{0, 0};
  std::vector<State> propagated;
};
ObservationBranch sample_observation_branch(const Model& model,
                                            const ParticleBelief& belief,
                                            const JointAction& a, Rng& rng);

// ---------------------------------------------------------------------------
// Exact counterparts on tabular games (oracles for the particle machinery).
// ---------------------------------------------------------------------------

// Probability vector over oracle-game states.
using ExactBelief = std::vector<double>;

// Bayes posterior  b'(s') ~ Z(o | a, s') * sum_s T(s' | s, a) b(s).
// Throws ImpossibleObservationError when the observation has zero probability.
ExactBelief exact_bayes_update(const OracleGame& game, const ExactBelief& belief,
                               const JointAction& a, const JointObservation& o);

// Exact observation probability under a particle belief: the weighted sum
// over particles of sum_{s'} Z(o | a, s') T(s' | s_i, a).
double predicted_observation_prob(const OracleGame& game, const ParticleBelief& belief,
                                  const JointAction& a, const JointObservation& o);

// Same finite sum starting from an exact belief.
double exact_observation_prob(const OracleGame& game, const ExactBelief& belief,
                              const JointAction& a, const JointObservation& o);

// Aggregates particle weight per oracle state.
ExactBelief belief_from_particles(const OracleGame& game, const ParticleBelief& belief);

double total_variation(const ExactBelief& a, const ExactBelief& b);

}  // namespace posg

#endif  // POSGSOLVE_BELIEF_H_
