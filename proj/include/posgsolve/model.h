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

#ifndef POSGSOLVE_MODEL_H_
#define POSGSOLVE_MODEL_H_

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "posgsolve/random.h"
#include "posgsolve/types.h"

namespace posg {

// Two-player zero-sum partially observable stochastic game exposed through a
// generative interface. Rewards are a deterministic function of (state,
// joint action); all transition and observation randomness lives in step().
class Model {
 public:
  explicit Model(PosgSpec spec, std::string name);
  virtual ~Model() = default;

  const PosgSpec& spec() const { return spec_; }
  const std::string& name() const { return name_; }

  virtual State sample_initial_state(Rng& rng) const = 0;
  virtual bool is_terminal(const State& s) const = 0;
  virtual std::array<double, kNumPlayers> rewards(const State& s,
                                                  const JointAction& a) const = 0;
  // Probability (density) of the joint observation given the joint action and
  // the post-transition state.
  virtual double observation_likelihood(const JointAction& a, const State& next_state,
                                        const JointObservation& o) const = 0;
  virtual std::string state_string(const State& s) const = 0;

  // Samples one transition. Stepping a terminal state is a contract
  // violation and throws.
  GenerativeStep step(const State& s, const JointAction& a, Rng& rng) const;

  // Transition used by belief propagation: terminal states self-loop with
  // zero reward so mixed live/terminal particle sets stay well defined.
  GenerativeStep propagate_state(const State& s, const JointAction& a, Rng& rng) const;

 protected:
  virtual GenerativeStep step_impl(const State& s, const JointAction& a,
                                   Rng& rng) const = 0;

 private:
  PosgSpec spec_;
  std::string name_;
};

// ---------------------------------------------------------------------------
// Continuous planar pursuit ("tag").
// ---------------------------------------------------------------------------

struct TagParams {
  double step_length = 0.125;
  double noise_sigma = 0.02;     // per-coordinate Gaussian move noise
  double capture_radius = 0.1;   // inclusive
  double discount = 0.95;
  int horizon = 5;
};

// Quadrant of a relative position: 0 (x>=0, y>=0), 1 (x<0, y>=0),
// 2 (x<0, y<0), 3 (x>=0, y<0).
int tag_quadrant(double dx, double dy);

// Both agents start uniformly in [-0.25, 0.25]^2 and move simultaneously in
// one of six directions at angles 2*pi*k/6. Each player observes the quadrant
// of the other agent's position relative to its own. When a state within the
// capture radius is stepped, the pursuer is paid +1 (evader -1) exactly once
// and the episode terminates.
class TagGame : public Model {
 public:
  explicit TagGame(TagParams params = {});

  const TagParams& params() const { return params_; }

  State sample_initial_state(Rng& rng) const override;
  bool is_terminal(const State& s) const override;
  std::array<double, kNumPlayers> rewards(const State& s,
                                          const JointAction& a) const override;
  double observation_likelihood(const JointAction& a, const State& next_state,
                                const JointObservation& o) const override;
  std::string state_string(const State& s) const override;

  // Noise-free commanded displacement for an action index.
  std::array<double, 2> action_displacement(int action) const;

 protected:
  GenerativeStep step_impl(const State& s, const JointAction& a,
                           Rng& rng) const override;

 private:
  bool within_capture(const TagState& ts) const;
  JointObservation observe(const TagState& ts) const;

  TagParams params_;
  std::array<std::array<double, 2>, 6> directions_;
};

// ---------------------------------------------------------------------------
// Tabular games with exactly enumerable dynamics, used as ground-truth
// oracles for the sampling-based machinery.
// ---------------------------------------------------------------------------

struct OracleTables {
  std::string name = "oracle";
  int num_states = 0;
  std::array<int, kNumPlayers> action_counts{0, 0};
  std::array<int, kNumPlayers> observation_counts{0, 0};
  int horizon = 0;
  double discount = 1.0;
  std::vector<double> initial_belief;                 // [s]
  std::vector<std::vector<double>> transition;        // [s * |A| + a][s']
  // Per player: [a * |S| + s'][o_i]
  std::array<std::vector<std::vector<double>>, kNumPlayers> observation;
  std::vector<std::array<double, kNumPlayers>> reward;  // [s * |A| + a]

  void validate() const;  // probability rows sum to 1; shapes consistent
};

class OracleGame : public Model {
 public:
  explicit OracleGame(OracleTables tables);

  int num_states() const { return tables_.num_states; }
  const std::vector<double>& initial_belief() const { return tables_.initial_belief; }
  const OracleTables& tables() const { return tables_; }

  double transition_prob(int s, int action_code, int next_s) const;
  double observation_prob(int player, int action_code, int next_s, int obs) const;
  double joint_observation_prob(int action_code, int next_s, int obs_code) const;
  const std::array<double, kNumPlayers>& state_reward(int s, int action_code) const;

  State sample_initial_state(Rng& rng) const override;
  bool is_terminal(const State& s) const override;
  std::array<double, kNumPlayers> rewards(const State& s,
                                          const JointAction& a) const override;
  double observation_likelihood(const JointAction& a, const State& next_state,
                                const JointObservation& o) const override;
  std::string state_string(const State& s) const override;

 protected:
  GenerativeStep step_impl(const State& s, const JointAction& a,
                           Rng& rng) const override;

 private:
  OracleTables tables_;
};

// Plain-text tabular format (see README for the exact layout). The loader
// validates row lengths and probability normalization.
OracleTables load_oracle_tables(const std::string& path);
void save_oracle_tables(const OracleTables& tables, const std::string& path);

// Shipped instances.
//
// signal_duel: |S| = 2, |A^i| = 2, |O^i| = 2, two decision stages. Player 1
// probes the hidden state (hit +1 / miss -1); player 2 relocates it with a
// sticky transition; both receive noisy readings of the new location.
OracleTables make_signal_duel();
// matching pennies lifted to a one-stage, single-state, single-observation
// game. Its pure-policy payoff matrix is [[1, -1], [-1, 1]].
OracleTables make_matching_pennies_game();
// Random dense zero-sum instance (probability rows drawn uniformly, rewards
// in [-1, 1]); used by the oracle suite and sampling tests.
OracleTables make_random_game(int num_states, int num_actions, int num_observations,
                              int horizon, double discount, std::uint64_t seed);

}  // namespace posg

#endif  // POSGSOLVE_MODEL_H_
