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

#include "posgsolve/belief.h"

#include <cmath>
#include <string>

#include "posgsolve/errors.h"

namespace posg {

namespace {
constexpr double kNormalizationTolerance = 1e-9;

std::string branch_label(const JointAction& a, const JointObservation& o) {
  return "action (" + std::to_string(a[0]) + "," + std::to_string(a[1]) +
         ") observation (" + std::to_string(o[0]) + "," + std::to_string(o[1]) + ")";
}
}  // namespace

void ParticleBelief::validate() const {
  if (particles.size() != weights.size())
    throw ContractViolationError("particle belief: particles and weights differ in size");
  if (particles.empty())
    throw ContractViolationError("particle belief: empty particle set");
  double total = 0.0;
  for (const double w : weights) {
    if (w < 0.0) throw ContractViolationError("particle belief: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance)
    throw ContractViolationError("particle belief: weights sum to " +
                                 std::to_string(total));
}

double ParticleBelief::terminal_weight(const Model& model) const {
  double total = 0.0;
  for (int i = 0; i < size(); ++i)
    if (model.is_terminal(particles[i])) total += weights[i];
  return total;
}

std::array<double, kNumPlayers> ParticleBelief::mean_reward(
    const Model& model, const JointAction& a) const {
  std::array<double, kNumPlayers> out{0.0, 0.0};
  for (int i = 0; i < size(); ++i) {
    if (weights[i] == 0.0) continue;
    if (model.is_terminal(particles[i])) continue;  // absorbed, no further reward
    const auto r = model.rewards(particles[i], a);
    for (int p = 0; p < kNumPlayers; ++p) out[p] += weights[i] * r[p];
  }
  return out;
}

ParticleBelief sample_initial_belief(const Model& model, int num_particles, Rng& rng) {
  if (num_particles <= 0)
    throw ContractViolationError("particle count must be positive");
  ParticleBelief belief;
  belief.particles.reserve(num_particles);
  for (int i = 0; i < num_particles; ++i)
    belief.particles.push_back(model.sample_initial_state(rng));
  belief.weights.assign(num_particles, 1.0 / num_particles);
  return belief;
}

std::vector<State> propagate(const Model& model, const ParticleBelief& belief,
                             const JointAction& a, Rng& rng) {
  std::vector<State> out;
  out.reserve(belief.particles.size());
  for (const State& s : belief.particles)
    out.push_back(model.propagate_state(s, a, rng).next_state);
  return out;
}

ParticleBelief reweight(const Model& model, std::vector<State> propagated,
                        const std::vector<double>& prior_weights, const JointAction& a,
                        const JointObservation& o) {
  if (propagated.size() != prior_weights.size())
    throw ContractViolationError("reweight: particles and weights differ in size");
  ParticleBelief out;
  out.weights.resize(propagated.size());
  double total = 0.0;
  for (std::size_t i = 0; i < propagated.size(); ++i) {
    const double w = prior_weights[i] * model.observation_likelihood(a, propagated[i], o);
    out.weights[i] = w;
    total += w;
  }
  if (total <= 0.0)
    throw ParticleDepletionError("all particle weights vanished on " +
                                 branch_label(a, o));
  for (double& w : out.weights) w /= total;
  out.particles = std::move(propagated);
  return out;
}

ObservationBranch sample_observation_branch(const Model& model,
                                            const ParticleBelief& belief,
                                            const JointAction& a, Rng& rng) {
  // Draw order is fixed for reproducibility: anchor index first, then one
  // transition per particle. The branch observation is the one emitted at the
  // anchor particle's successor, i.e. a draw from Z(. | a, s') there.
  const int anchor = rnd::sample_weighted(rng, belief.weights);
  ObservationBranch branch;
  branch.propagated.reserve(belief.particles.size());
  for (int i = 0; i < belief.size(); ++i) {
    const GenerativeStep step = model.propagate_state(belief.particles[i], a, rng);
    if (i == anchor) branch.observation = step.observation;
    branch.propagated.push_back(step.next_state);
  }
  return branch;
}

// ---------------------------------------------------------------------------
// Exact oracles
// ---------------------------------------------------------------------------

ExactBelief exact_bayes_update(const OracleGame& game, const ExactBelief& belief,
                               const JointAction& a, const JointObservation& o) {
  const int num_states = game.num_states();
  const int code = joint_action_code(game.spec(), a);
  const int obs_code = joint_observation_code(game.spec(), o);
  ExactBelief posterior(num_states, 0.0);
  double total = 0.0;
  for (int next = 0; next < num_states; ++next) {
    double predicted = 0.0;
    for (int s = 0; s < num_states; ++s)
      predicted += game.transition_prob(s, code, next) * belief[s];
    const double mass = game.joint_observation_prob(code, next, obs_code) * predicted;
    posterior[next] = mass;
    total += mass;
  }
  if (total <= 0.0)
    throw ImpossibleObservationError("observation has zero probability on " +
                                     branch_label(a, o));
  for (double& v : posterior) v /= total;
  return posterior;
}

double exact_observation_prob(const OracleGame& game, const ExactBelief& belief,
                              const JointAction& a, const JointObservation& o) {
  const int num_states = game.num_states();
  const int code = joint_action_code(game.spec(), a);
  const int obs_code = joint_observation_code(game.spec(), o);
  double prob = 0.0;
  for (int next = 0; next < num_states; ++next) {
    double predicted = 0.0;
    for (int s = 0; s < num_states; ++s)
      predicted += game.transition_prob(s, code, next) * belief[s];
    prob += game.joint_observation_prob(code, next, obs_code) * predicted;
  }
  return prob;
}

double predicted_observation_prob(const OracleGame& game, const ParticleBelief& belief,
                                  const JointAction& a, const JointObservation& o) {
  const int num_states = game.num_states();
  const int code = joint_action_code(game.spec(), a);
  const int obs_code = joint_observation_code(game.spec(), o);
  double total_weight = 0.0;
  double prob = 0.0;
  for (int i = 0; i < belief.size(); ++i) {
    const int s = std::get<int>(belief.particles[i]);
    double term = 0.0;
    for (int next = 0; next < num_states; ++next) {
      term += game.joint_observation_prob(code, next, obs_code) *
              game.transition_prob(s, code, next);
    }
    prob += belief.weights[i] * term;
    total_weight += belief.weights[i];
  }
  return total_weight > 0.0 ? prob / total_weight : 0.0;
}

ExactBelief belief_from_particles(const OracleGame& game, const ParticleBelief& belief) {
  ExactBelief out(game.num_states(), 0.0);
  for (int i = 0; i < belief.size(); ++i)
    out[std::get<int>(belief.particles[i])] += belief.weights[i];
  return out;
}

double total_variation(const ExactBelief& a, const ExactBelief& b) {
  double tv = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) tv += std::abs(a[i] - b[i]);
  return 0.5 * tv;
}

}  // namespace posg
