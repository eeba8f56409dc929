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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <variant>

#include "doctest.h"
#include "helpers.h"
#include "posgsolve/errors.h"
#include "posgsolve/model.h"

using namespace posg;

TEST_CASE("quadrants partition the plane with the boundary on axes") {
  CHECK(tag_quadrant(1.0, 1.0) == 0);
  CHECK(tag_quadrant(-1.0, 1.0) == 1);
  CHECK(tag_quadrant(-1.0, -1.0) == 2);
  CHECK(tag_quadrant(1.0, -1.0) == 3);
  CHECK(tag_quadrant(0.0, 0.0) == 0);
  CHECK(tag_quadrant(0.0, -1.0) == 3);
  CHECK(tag_quadrant(-1.0, 0.0) == 1);
}

TEST_CASE("joint action and observation codes round trip player-major") {
  PosgSpec spec;
  spec.action_counts = {3, 4};
  spec.observation_counts = {2, 5};
  for (int a0 = 0; a0 < 3; ++a0) {
    for (int a1 = 0; a1 < 4; ++a1) {
      const int code = joint_action_code(spec, {a0, a1});
      CHECK(joint_action_from_code(spec, code) == JointAction{a0, a1});
    }
  }
  CHECK(joint_action_code(spec, {2, 3}) == 11);
  CHECK(joint_observation_code(spec, {1, 4}) == 9);
  CHECK(joint_observation_from_code(spec, 9) == JointObservation{1, 4});
}

TEST_CASE("spec validation rejects malformed fields") {
  PosgSpec good;
  good.action_counts = {2, 2};
  good.observation_counts = {2, 2};
  good.horizon = 3;
  good.discount = 0.9;
  good.reward_bounds = {{{-1.0, 1.0}, {-1.0, 1.0}}};
  good.validate();

  PosgSpec bad = good;
  bad.action_counts[1] = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = good;
  bad.discount = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = good;
  bad.discount = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = good;
  bad.reward_bounds[1] = {0.0, 1.0};  // does not mirror player 1
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK(good.max_abs_reward() == 1.0);
  CHECK(good.reward_range(0) == 2.0);
}

TEST_CASE("tag displacements have commanded length and hexagonal angles") {
  TagGame game;
  const double step = game.params().step_length;
  for (int a = 0; a < 6; ++a) {
    const auto d = game.action_displacement(a);
    CHECK(std::hypot(d[0], d[1]) == doctest::Approx(step).epsilon(1e-12));
  }
  CHECK(game.action_displacement(0)[0] == doctest::Approx(step));
  CHECK(game.action_displacement(0)[1] == doctest::Approx(0.0));
  CHECK(game.action_displacement(3)[0] == doctest::Approx(-step));
  // Opposite actions cancel.
  for (int a = 0; a < 3; ++a) {
    const auto d = game.action_displacement(a);
    const auto e = game.action_displacement(a + 3);
    CHECK(d[0] + e[0] == doctest::Approx(0.0));
    CHECK(d[1] + e[1] == doctest::Approx(0.0));
  }
}

TEST_CASE("tag spawns inside the box and pays capture exactly once") {
  TagGame game;
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const State s = game.sample_initial_state(rng);
    const TagState& ts = std::get<TagState>(s);
    CHECK(!ts.captured);
    for (const double c : {ts.pursuer[0], ts.pursuer[1], ts.evader[0], ts.evader[1]}) {
      CHECK(c >= -0.25);
      CHECK(c <= 0.25);
    }
  }

  TagState close;
  close.pursuer = {0.0, 0.0};
  close.evader = {0.05, 0.0};
  const State s{close};
  CHECK(!game.is_terminal(s));
  CHECK(game.rewards(s, {0, 0}) == std::array<double, 2>{1.0, -1.0});
  GenerativeStep step = game.step(s, {2, 4}, rng);
  CHECK(step.rewards == std::array<double, 2>{1.0, -1.0});
  CHECK(step.terminal);
  const TagState& captured = std::get<TagState>(step.next_state);
  CHECK(captured.captured);
  CHECK(captured.pursuer == close.pursuer);  // positions freeze
  CHECK(game.is_terminal(step.next_state));
  // Terminal states cannot be stepped, but propagation self-loops for free.
  CHECK_THROWS_AS(game.step(step.next_state, {0, 0}, rng), ContractViolationError);
  GenerativeStep loop = game.propagate_state(step.next_state, {1, 1}, rng);
  CHECK(loop.rewards == std::array<double, 2>{0.0, 0.0});
  CHECK(loop.terminal);
  CHECK(std::get<TagState>(loop.next_state) == captured);
}

TEST_CASE("tag observations are the evader quadrant and its mirror") {
  TagGame game;
  TagState ts;
  ts.pursuer = {0.0, 0.0};
  ts.evader = {0.3, 0.2};  // evader up-right of pursuer
  Rng rng(3);
  // Noise sigma 0.02 cannot flip a 0.3 offset sign in one step... but the
  // command displaces both agents; use likelihood, which is noise-free.
  CHECK(game.observation_likelihood({0, 0}, State{ts}, {0, 2}) == 1.0);
  CHECK(game.observation_likelihood({0, 0}, State{ts}, {1, 2}) == 0.0);
  double total = 0.0;
  for (int o0 = 0; o0 < 4; ++o0) {
    for (int o1 = 0; o1 < 4; ++o1) {
      total += game.observation_likelihood({0, 0}, State{ts}, {o0, o1});
    }
  }
  CHECK(total == 1.0);
}

TEST_CASE("tag steps are deterministic given the rng stream") {
  TagGame game;
  Rng rng_a(11);
  Rng rng_b(11);
  State s_a = game.sample_initial_state(rng_a);
  State s_b = game.sample_initial_state(rng_b);
  CHECK(s_a == s_b);
  for (int t = 0; t < 4; ++t) {
    GenerativeStep a = game.step(s_a, {t % 6, (t + 2) % 6}, rng_a);
    GenerativeStep b = game.step(s_b, {t % 6, (t + 2) % 6}, rng_b);
    CHECK(a.next_state == b.next_state);
    CHECK(a.observation == b.observation);
    CHECK(a.rewards == b.rewards);
    if (a.terminal) break;
    s_a = a.next_state;
    s_b = b.next_state;
  }
}

TEST_CASE("tag rewards sum to zero on random states") {
  TagGame game;
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    State s = game.sample_initial_state(rng);
    const auto r = game.rewards(s, {rnd::uniform_below(rng, 6), rnd::uniform_below(rng, 6)});
    CHECK(r[0] + r[1] == 0.0);
  }
}

TEST_CASE("signal duel tables form a sticky-probe game") {
  const OracleTables t = make_signal_duel();
  t.validate();
  OracleGame game(t);
  CHECK(game.spec().horizon == 2);
  CHECK(game.spec().discount == 0.9);
  CHECK(game.num_states() == 2);
  CHECK(game.spec().zero_sum);
  // Evader action 0 keeps the state with probability 0.9.
  CHECK(game.transition_prob(0, joint_action_code(game.spec(), {0, 0}), 0) == 0.9);
  // Evader action 1 flips it.
  CHECK(game.transition_prob(0, joint_action_code(game.spec(), {0, 1}), 1) == 0.9);
  // Probe pays against the pre-transition state.
  CHECK(game.state_reward(0, joint_action_code(game.spec(), {0, 1}))[0] == 1.0);
  CHECK(game.state_reward(1, joint_action_code(game.spec(), {0, 0}))[0] == -1.0);
  // Readings are 80% accurate for both players.
  CHECK(game.observation_prob(0, 0, 1, 1) == 0.8);
  CHECK(game.observation_prob(1, 3, 0, 1) == 0.2);
  CHECK(game.joint_observation_prob(0, 1, joint_observation_code(game.spec(), {1, 1})) ==
        doctest::Approx(0.64));
}

TEST_CASE("oracle generative steps match the tables empirically") {
  OracleGame game(make_signal_duel());
  const JointAction action{0, 1};
  const int code = joint_action_code(game.spec(), action);
  Rng rng(42);
  const int n = 20000;
  int flips = 0;
  std::array<int, 2> obs0_counts{0, 0};
  for (int i = 0; i < n; ++i) {
    GenerativeStep step = game.step(State{0}, action, rng);
    if (std::get<int>(step.next_state) == 1) ++flips;
    ++obs0_counts[step.observation[0]];
  }
  const double flip_rate = static_cast<double>(flips) / n;
  // True flip probability 0.9. Four-sigma band for n = 20000.
  CHECK(flip_rate == doctest::Approx(0.9).epsilon(0.01));
  // P(o1 = 1) = 0.9 * 0.8 + 0.1 * 0.2 = 0.74.
  double p_obs1 = 0.0;
  for (int next = 0; next < 2; ++next) {
    p_obs1 += game.transition_prob(0, code, next) * game.observation_prob(0, code, next, 1);
  }
  CHECK(p_obs1 == doctest::Approx(0.74));
  CHECK(static_cast<double>(obs0_counts[1]) / n == doctest::Approx(p_obs1).epsilon(0.02));
}

TEST_CASE("matching pennies is the classic diagonal game") {
  OracleGame game(make_matching_pennies_game());
  CHECK(game.spec().horizon == 1);
  CHECK(game.state_reward(0, joint_action_code(game.spec(), {0, 0}))[0] == 1.0);
  CHECK(game.state_reward(0, joint_action_code(game.spec(), {0, 1}))[0] == -1.0);
  CHECK(game.state_reward(0, joint_action_code(game.spec(), {1, 0}))[0] == -1.0);
  CHECK(game.state_reward(0, joint_action_code(game.spec(), {1, 1}))[0] == 1.0);
}

TEST_CASE("random games are valid, zero-sum, and seed-deterministic") {
  const OracleTables a = make_random_game(4, 2, 3, 3, 0.95, 17);
  const OracleTables b = make_random_game(4, 2, 3, 3, 0.95, 17);
  const OracleTables c = make_random_game(4, 2, 3, 3, 0.95, 18);
  a.validate();
  CHECK(a.transition == b.transition);
  CHECK(a.initial_belief == b.initial_belief);
  CHECK(a.observation[0] == b.observation[0]);
  CHECK(a.transition != c.transition);
  for (const auto& r : a.reward) CHECK(r[0] + r[1] == doctest::Approx(0.0));
  OracleGame game(a);
  CHECK(game.spec().zero_sum);
}

TEST_CASE("oracle table files round trip exactly") {
  testutil::TempDir dir("model_roundtrip");
  const OracleTables original = make_random_game(3, 2, 2, 4, 0.9, 23);
  const std::string path = dir.file("game.game");
  save_oracle_tables(original, path);
  const OracleTables loaded = load_oracle_tables(path);
  CHECK(loaded.name == original.name);
  CHECK(loaded.num_states == original.num_states);
  CHECK(loaded.action_counts == original.action_counts);
  CHECK(loaded.observation_counts == original.observation_counts);
  CHECK(loaded.horizon == original.horizon);
  CHECK(loaded.discount == original.discount);
  CHECK(loaded.initial_belief == original.initial_belief);
  CHECK(loaded.transition == original.transition);
  CHECK(loaded.observation[0] == original.observation[0]);
  CHECK(loaded.observation[1] == original.observation[1]);
  CHECK(loaded.reward == original.reward);
  CHECK_THROWS_AS(load_oracle_tables(dir.file("missing.game")), ConfigError);
}

TEST_CASE("oracle games reject out-of-range actions") {
  OracleGame game(make_matching_pennies_game());
  Rng rng(1);
  CHECK_THROWS_AS(game.step(State{0}, {2, 0}, rng), ContractViolationError);
  CHECK_THROWS_AS(game.step(State{0}, {0, -1}, rng), ContractViolationError);
}
