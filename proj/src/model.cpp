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

#include "posgsolve/model.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "posgsolve/errors.h"

namespace posg {

namespace {
constexpr double kProbabilityTolerance = 1e-9;
constexpr double kPi = 3.14159265358979323846;
}  // namespace

double PosgSpec::max_abs_reward() const {
  double m = 0.0;
  for (int p = 0; p < kNumPlayers; ++p) {
    m = std::max(m, std::abs(reward_bounds[p][0]));
    m = std::max(m, std::abs(reward_bounds[p][1]));
  }
  return m;
}

void PosgSpec::validate() const {
  for (int p = 0; p < kNumPlayers; ++p) {
    if (action_counts[p] <= 0)
      throw ConfigError("spec.action_counts", "must be positive for every player");
    if (observation_counts[p] <= 0)
      throw ConfigError("spec.observation_counts", "must be positive for every player");
    if (reward_bounds[p][0] > reward_bounds[p][1])
      throw ConfigError("spec.reward_bounds", "min exceeds max");
  }
  if (horizon < 0) throw ConfigError("spec.horizon", "must be non-negative");
  if (!(discount > 0.0) || discount > 1.0)
    throw ConfigError("spec.discount", "must lie in (0, 1]");
  if (zero_sum) {
    // Player 2's bounds must be player 1's, negated and swapped.
    if (std::abs(reward_bounds[1][0] + reward_bounds[0][1]) > kProbabilityTolerance ||
        std::abs(reward_bounds[1][1] + reward_bounds[0][0]) > kProbabilityTolerance)
      throw ConfigError("spec.reward_bounds",
                        "zero-sum bounds of player 2 must mirror player 1");
  }
}

Model::Model(PosgSpec spec, std::string name)
    : spec_(std::move(spec)), name_(std::move(name)) {
  spec_.validate();
}

GenerativeStep Model::step(const State& s, const JointAction& a, Rng& rng) const {
  if (is_terminal(s))
    throw ContractViolationError("step() called on a terminal state of " + name_);
  for (int p = 0; p < kNumPlayers; ++p) {
    if (a[p] < 0 || a[p] >= spec_.action_counts[p])
      throw ContractViolationError("action out of range for " + name_);
  }
  return step_impl(s, a, rng);
}

GenerativeStep Model::propagate_state(const State& s, const JointAction& a,
                                      Rng& rng) const {
  // step_impl treats terminal states as absorbing: zero reward, frozen state,
  // observations emitted as usual. That keeps mixed live/terminal particle
  // sets well defined without a special case here.
  return step_impl(s, a, rng);
}

// ---------------------------------------------------------------------------
// TagGame
// ---------------------------------------------------------------------------

int tag_quadrant(double dx, double dy) {
  if (dx >= 0.0) return dy >= 0.0 ? 0 : 3;
  return dy >= 0.0 ? 1 : 2;
}

namespace {
PosgSpec tag_spec(const TagParams& p) {
  PosgSpec spec;
  spec.action_counts = {6, 6};
  spec.observation_counts = {4, 4};
  spec.horizon = p.horizon;
  spec.discount = p.discount;
  spec.reward_bounds = {{{0.0, 1.0}, {-1.0, 0.0}}};
  spec.zero_sum = true;
  return spec;
}
}  // namespace

TagGame::TagGame(TagParams params) : Model(tag_spec(params), "tag"), params_(params) {
  if (params_.step_length <= 0.0)
    throw ConfigError("model.step_length", "must be positive");
  if (params_.noise_sigma < 0.0)
    throw ConfigError("model.noise_sigma", "must be non-negative");
  if (params_.capture_radius <= 0.0)
    throw ConfigError("model.capture_radius", "must be positive");
  for (int k = 0; k < 6; ++k) {
    const double angle = 2.0 * kPi * k / 6.0;
    directions_[k] = {std::cos(angle), std::sin(angle)};
  }
}

std::array<double, 2> TagGame::action_displacement(int action) const {
  return {params_.step_length * directions_[action][0],
          params_.step_length * directions_[action][1]};
}

bool TagGame::within_capture(const TagState& ts) const {
  const double dx = ts.pursuer[0] - ts.evader[0];
  const double dy = ts.pursuer[1] - ts.evader[1];
  return dx * dx + dy * dy <= params_.capture_radius * params_.capture_radius;
}

JointObservation TagGame::observe(const TagState& ts) const {
  const double dx = ts.evader[0] - ts.pursuer[0];
  const double dy = ts.evader[1] - ts.pursuer[1];
  return {tag_quadrant(dx, dy), tag_quadrant(-dx, -dy)};
}

State TagGame::sample_initial_state(Rng& rng) const {
  TagState ts;
  ts.pursuer = {rnd::uniform(rng, -0.25, 0.25), rnd::uniform(rng, -0.25, 0.25)};
  ts.evader = {rnd::uniform(rng, -0.25, 0.25), rnd::uniform(rng, -0.25, 0.25)};
  ts.captured = false;
  return ts;
}

bool TagGame::is_terminal(const State& s) const {
  return std::get<TagState>(s).captured;
}

std::array<double, kNumPlayers> TagGame::rewards(const State& s,
                                                 const JointAction& /*a*/) const {
  const TagState& ts = std::get<TagState>(s);
  if (!ts.captured && within_capture(ts)) return {1.0, -1.0};
  return {0.0, 0.0};
}

GenerativeStep TagGame::step_impl(const State& s, const JointAction& a,
                                  Rng& rng) const {
  const TagState& ts = std::get<TagState>(s);
  GenerativeStep out;
  out.rewards = rewards(s, a);
  if (within_capture(ts)) {
    // The capture state pays out once and absorbs; positions freeze.
    TagState next = ts;
    next.captured = true;
    out.next_state = next;
    out.observation = observe(next);
    out.terminal = true;
    return out;
  }
  TagState next = ts;
  const auto dp = action_displacement(a[0]);
  const auto de = action_displacement(a[1]);
  next.pursuer[0] += dp[0] + params_.noise_sigma * rnd::normal(rng);
  next.pursuer[1] += dp[1] + params_.noise_sigma * rnd::normal(rng);
  next.evader[0] += de[0] + params_.noise_sigma * rnd::normal(rng);
  next.evader[1] += de[1] + params_.noise_sigma * rnd::normal(rng);
  next.captured = false;
  out.next_state = next;
  out.observation = observe(next);
  out.terminal = false;
  return out;
}

double TagGame::observation_likelihood(const JointAction& /*a*/, const State& next_state,
                                       const JointObservation& o) const {
  // Quadrant readings are deterministic given the post-move state, so the
  // joint likelihood is a product of indicators.
  const JointObservation expected = observe(std::get<TagState>(next_state));
  return (o[0] == expected[0] && o[1] == expected[1]) ? 1.0 : 0.0;
}

std::string TagGame::state_string(const State& s) const {
  const TagState& ts = std::get<TagState>(s);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "p=(%.4f,%.4f) e=(%.4f,%.4f)%s", ts.pursuer[0],
                ts.pursuer[1], ts.evader[0], ts.evader[1],
                ts.captured ? " captured" : "");
  return buf;
}

// ---------------------------------------------------------------------------
// OracleGame
// ---------------------------------------------------------------------------

namespace {

void check_prob_row(const std::vector<double>& row, const std::string& table,
                    int row_idx) {
  double total = 0.0;
  for (const double v : row) {
    if (v < 0.0)
      throw ConfigError(table, "negative entry in row " + std::to_string(row_idx));
    total += v;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance)
    throw ConfigError(table, "row " + std::to_string(row_idx) +
                                 " sums to " + std::to_string(total) + ", expected 1");
}

PosgSpec oracle_spec(const OracleTables& t) {
  PosgSpec spec;
  spec.action_counts = t.action_counts;
  spec.observation_counts = t.observation_counts;
  spec.horizon = t.horizon;
  spec.discount = t.discount;
  std::array<std::array<double, 2>, kNumPlayers> bounds{
      {{t.reward[0][0], t.reward[0][0]}, {t.reward[0][1], t.reward[0][1]}}};
  bool zero_sum = true;
  for (const auto& r : t.reward) {
    for (int p = 0; p < kNumPlayers; ++p) {
      bounds[p][0] = std::min(bounds[p][0], r[p]);
      bounds[p][1] = std::max(bounds[p][1], r[p]);
    }
    if (std::abs(r[0] + r[1]) > kProbabilityTolerance) zero_sum = false;
  }
  if (zero_sum) {
    // Make the mirrored bounds exact so spec validation does not trip over
    // representation noise.
    bounds[1][0] = -bounds[0][1];
    bounds[1][1] = -bounds[0][0];
  }
  spec.reward_bounds = bounds;
  spec.zero_sum = zero_sum;
  return spec;
}

}  // namespace

void OracleTables::validate() const {
  if (num_states <= 0) throw ConfigError("oracle.states", "must be positive");
  if (horizon < 0) throw ConfigError("oracle.horizon", "must be non-negative");
  const int num_joint = action_counts[0] * action_counts[1];
  if (num_joint <= 0) throw ConfigError("oracle.actions", "must be positive");
  if (static_cast<int>(initial_belief.size()) != num_states)
    throw ConfigError("oracle.b0", "expected one entry per state");
  check_prob_row(initial_belief, "oracle.b0", 0);
  if (static_cast<int>(transition.size()) != num_states * num_joint)
    throw ConfigError("oracle.T", "expected one row per (state, joint action)");
  for (int i = 0; i < static_cast<int>(transition.size()); ++i) {
    if (static_cast<int>(transition[i].size()) != num_states)
      throw ConfigError("oracle.T", "row " + std::to_string(i) + " has wrong width");
    check_prob_row(transition[i], "oracle.T", i);
  }
  for (int p = 0; p < kNumPlayers; ++p) {
    const std::string table = "oracle.Z" + std::to_string(p + 1);
    if (static_cast<int>(observation[p].size()) != num_joint * num_states)
      throw ConfigError(table, "expected one row per (joint action, next state)");
    for (int i = 0; i < static_cast<int>(observation[p].size()); ++i) {
      if (static_cast<int>(observation[p][i].size()) != observation_counts[p])
        throw ConfigError(table, "row " + std::to_string(i) + " has wrong width");
      check_prob_row(observation[p][i], table, i);
    }
  }
  if (static_cast<int>(reward.size()) != num_states * num_joint)
    throw ConfigError("oracle.R", "expected one row per (state, joint action)");
}

OracleGame::OracleGame(OracleTables tables)
    : Model((tables.validate(), oracle_spec(tables)), tables.name),
      tables_(std::move(tables)) {}

double OracleGame::transition_prob(int s, int action_code, int next_s) const {
  return tables_.transition[s * spec().num_joint_actions() + action_code][next_s];
}

double OracleGame::observation_prob(int player, int action_code, int next_s,
                                    int obs) const {
  return tables_.observation[player][action_code * tables_.num_states + next_s][obs];
}

double OracleGame::joint_observation_prob(int action_code, int next_s,
                                          int obs_code) const {
  const JointObservation o = joint_observation_from_code(spec(), obs_code);
  return observation_prob(0, action_code, next_s, o[0]) *
         observation_prob(1, action_code, next_s, o[1]);
}

const std::array<double, kNumPlayers>& OracleGame::state_reward(int s,
                                                                int action_code) const {
  return tables_.reward[s * spec().num_joint_actions() + action_code];
}

State OracleGame::sample_initial_state(Rng& rng) const {
  return rnd::sample_weighted(rng, tables_.initial_belief);
}

bool OracleGame::is_terminal(const State& /*s*/) const {
  // Tabular instances run to the fixed horizon; there are no absorbing states.
  return false;
}

std::array<double, kNumPlayers> OracleGame::rewards(const State& s,
                                                    const JointAction& a) const {
  return state_reward(std::get<int>(s), joint_action_code(spec(), a));
}

GenerativeStep OracleGame::step_impl(const State& s, const JointAction& a,
                                     Rng& rng) const {
  const int si = std::get<int>(s);
  const int code = joint_action_code(spec(), a);
  GenerativeStep out;
  out.rewards = state_reward(si, code);
  const int next =
      rnd::sample_weighted(rng, tables_.transition[si * spec().num_joint_actions() + code]);
  out.next_state = next;
  for (int p = 0; p < kNumPlayers; ++p) {
    out.observation[p] = rnd::sample_weighted(
        rng, tables_.observation[p][code * tables_.num_states + next]);
  }
  out.terminal = false;
  return out;
}

double OracleGame::observation_likelihood(const JointAction& a, const State& next_state,
                                          const JointObservation& o) const {
  const int code = joint_action_code(spec(), a);
  const int next = std::get<int>(next_state);
  return observation_prob(0, code, next, o[0]) * observation_prob(1, code, next, o[1]);
}

std::string OracleGame::state_string(const State& s) const {
  return "s" + std::to_string(std::get<int>(s));
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

namespace {

// Reads the next non-empty, non-comment line.
bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '#') continue;
    return true;
  }
  return false;
}

std::vector<double> parse_row(const std::string& line, int expected,
                              const std::string& table) {
  std::istringstream ss(line);
  std::vector<double> row;
  double v;
  while (ss >> v) row.push_back(v);
  if (expected >= 0 && static_cast<int>(row.size()) != expected)
    throw ConfigError(table, "expected " + std::to_string(expected) +
                                 " values per row, got " + std::to_string(row.size()));
  return row;
}

std::vector<std::vector<double>> parse_rows(std::istream& in, int rows, int cols,
                                            const std::string& table) {
  std::vector<std::vector<double>> out;
  out.reserve(rows);
  std::string line;
  for (int i = 0; i < rows; ++i) {
    if (!next_line(in, line))
      throw ConfigError(table, "unexpected end of file at row " + std::to_string(i));
    out.push_back(parse_row(line, cols, table));
  }
  return out;
}

}  // namespace

OracleTables load_oracle_tables(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("model.file", "cannot open '" + path + "'");
  OracleTables t;
  std::string line;
  // Header: keyword lines in fixed order, then labelled table blocks.
  auto expect_keyword = [&](const std::string& kw) -> std::istringstream {
    if (!next_line(in, line))
      throw ConfigError("model.file", "missing '" + kw + "' line");
    std::istringstream ss(line);
    std::string got;
    ss >> got;
    if (got != kw)
      throw ConfigError("model.file", "expected '" + kw + "', got '" + got + "'");
    return ss;
  };
  {
    auto ss = expect_keyword("name");
    if (!(ss >> t.name)) t.name = "oracle";
  }
  expect_keyword("states") >> t.num_states;
  {
    auto ss = expect_keyword("actions");
    ss >> t.action_counts[0] >> t.action_counts[1];
  }
  {
    auto ss = expect_keyword("observations");
    ss >> t.observation_counts[0] >> t.observation_counts[1];
  }
  expect_keyword("horizon") >> t.horizon;
  expect_keyword("discount") >> t.discount;
  const int num_joint = t.action_counts[0] * t.action_counts[1];
  expect_keyword("b0");
  t.initial_belief = parse_rows(in, 1, t.num_states, "oracle.b0")[0];
  expect_keyword("T");
  t.transition = parse_rows(in, t.num_states * num_joint, t.num_states, "oracle.T");
  for (int p = 0; p < kNumPlayers; ++p) {
    auto ss = expect_keyword("Z");
    int idx = 0;
    ss >> idx;
    if (idx != p + 1)
      throw ConfigError("oracle.Z", "observation tables must appear as Z 1 then Z 2");
    t.observation[p] = parse_rows(in, num_joint * t.num_states,
                                  t.observation_counts[p], "oracle.Z" + std::to_string(idx));
  }
  expect_keyword("R");
  const auto reward_rows =
      parse_rows(in, t.num_states * num_joint, kNumPlayers, "oracle.R");
  t.reward.reserve(reward_rows.size());
  for (const auto& r : reward_rows) t.reward.push_back({r[0], r[1]});
  t.validate();
  return t;
}

void save_oracle_tables(const OracleTables& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("model.file", "cannot write '" + path + "'");
  char buf[64];
  auto row = [&](const std::vector<double>& vals) {
    for (std::size_t i = 0; i < vals.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", vals[i]);
      out << (i ? " " : "") << buf;
    }
    out << "\n";
  };
  out << "# tabular game definition\n";
  out << "name " << t.name << "\n";
  out << "states " << t.num_states << "\n";
  out << "actions " << t.action_counts[0] << " " << t.action_counts[1] << "\n";
  out << "observations " << t.observation_counts[0] << " " << t.observation_counts[1]
      << "\n";
  out << "horizon " << t.horizon << "\n";
  std::snprintf(buf, sizeof(buf), "%.17g", t.discount);
  out << "discount " << buf << "\n";
  out << "b0\n";
  row(t.initial_belief);
  out << "T\n";
  for (const auto& r : t.transition) row(r);
  for (int p = 0; p < kNumPlayers; ++p) {
    out << "Z " << p + 1 << "\n";
    for (const auto& r : t.observation[p]) row(r);
  }
  out << "R\n";
  for (const auto& r : t.reward) row({r[0], r[1]});
}

// ---------------------------------------------------------------------------
// Shipped instances
// ---------------------------------------------------------------------------

OracleTables make_signal_duel() {
  OracleTables t;
  t.name = "signal_duel";
  t.num_states = 2;
  t.action_counts = {2, 2};
  t.observation_counts = {2, 2};
  t.horizon = 2;
  t.discount = 0.9;
  t.initial_belief = {0.5, 0.5};
  const int num_joint = 4;
  t.transition.assign(2 * num_joint, std::vector<double>(2, 0.0));
  t.observation[0].assign(num_joint * 2, std::vector<double>(2, 0.0));
  t.observation[1].assign(num_joint * 2, std::vector<double>(2, 0.0));
  t.reward.assign(2 * num_joint, {0.0, 0.0});
  for (int s = 0; s < 2; ++s) {
    for (int a1 = 0; a1 < 2; ++a1) {
      for (int a2 = 0; a2 < 2; ++a2) {
        const int code = a1 * 2 + a2;
        // Player 2 action 0 keeps the state, action 1 flips it; both are
        // sticky with probability 0.9.
        const int target = a2 == 0 ? s : 1 - s;
        t.transition[s * num_joint + code][target] = 0.9;
        t.transition[s * num_joint + code][1 - target] = 0.1;
        // Probe pays off against the pre-transition state.
        const double hit = a1 == s ? 1.0 : -1.0;
        t.reward[s * num_joint + code] = {hit, -hit};
      }
    }
  }
  for (int code = 0; code < num_joint; ++code) {
    for (int next = 0; next < 2; ++next) {
      for (int p = 0; p < kNumPlayers; ++p) {
        t.observation[p][code * 2 + next][next] = 0.8;
        t.observation[p][code * 2 + next][1 - next] = 0.2;
      }
    }
  }
  t.validate();
  return t;
}

OracleTables make_matching_pennies_game() {
  OracleTables t;
  t.name = "matching_pennies";
  t.num_states = 1;
  t.action_counts = {2, 2};
  t.observation_counts = {1, 1};
  t.horizon = 1;
  t.discount = 1.0;
  t.initial_belief = {1.0};
  t.transition.assign(4, {1.0});
  t.observation[0].assign(4, {1.0});
  t.observation[1].assign(4, {1.0});
  t.reward = {{1.0, -1.0}, {-1.0, 1.0}, {-1.0, 1.0}, {1.0, -1.0}};
  t.validate();
  return t;
}

OracleTables make_random_game(int num_states, int num_actions, int num_observations,
                              int horizon, double discount, std::uint64_t seed) {
  Rng rng(rnd::mix(seed));
  OracleTables t;
  t.name = "random";
  t.num_states = num_states;
  t.action_counts = {num_actions, num_actions};
  t.observation_counts = {num_observations, num_observations};
  t.horizon = horizon;
  t.discount = discount;
  auto random_row = [&](int n) {
    std::vector<double> row(n);
    double total = 0.0;
    for (double& v : row) {
      v = 0.05 + rnd::uniform01(rng);  // bounded away from zero
      total += v;
    }
    for (double& v : row) v /= total;
    return row;
  };
  const int num_joint = num_actions * num_actions;
  t.initial_belief = random_row(num_states);
  for (int i = 0; i < num_states * num_joint; ++i)
    t.transition.push_back(random_row(num_states));
  for (int p = 0; p < kNumPlayers; ++p)
    for (int i = 0; i < num_joint * num_states; ++i)
      t.observation[p].push_back(random_row(num_observations));
  for (int i = 0; i < num_states * num_joint; ++i) {
    const double r = rnd::uniform(rng, -1.0, 1.0);
    t.reward.push_back({r, -r});
  }
  t.validate();
  return t;
}

}  // namespace posg
