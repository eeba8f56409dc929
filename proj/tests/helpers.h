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

#ifndef POSGSOLVE_TESTS_HELPERS_H_
#define POSGSOLVE_TESTS_HELPERS_H_

#include <array>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "posgsolve/model.h"
#include "posgsolve/policy.h"
#include "posgsolve/random.h"

namespace testutil {

// Scratch directory under the system temp root; removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() / ("posgsolve_test_" + tag);
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string str() const { return path_.string(); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Two-state, single-joint-action chain whose posteriors are small enough to
// compute by hand:
//   b0 = [0.5, 0.5]
//   T  = [[0.7, 0.3], [0.2, 0.8]]          -> predicted [0.45, 0.55]
//   Z1 = s'=0: [0.9, 0.1]; s'=1: [0.4, 0.6]
//   Z2 = [1, 0] for both successors (observation 1 is impossible)
// Joint observation (0,0): mass 0.45*0.9 + 0.55*0.4 = 0.625,
//   posterior [0.405, 0.22] / 0.625 = [0.648, 0.352].
// Joint observation (1,0): mass 0.045 + 0.33 = 0.375, posterior [0.12, 0.88].
inline posg::OracleTables make_hand_chain() {
  posg::OracleTables t;
  t.name = "hand_chain";
  t.num_states = 2;
  t.action_counts = {1, 1};
  t.observation_counts = {2, 2};
  t.horizon = 2;
  t.discount = 1.0;
  t.initial_belief = {0.5, 0.5};
  t.transition = {{0.7, 0.3}, {0.2, 0.8}};
  t.observation[0] = {{0.9, 0.1}, {0.4, 0.6}};
  t.observation[1] = {{1.0, 0.0}, {1.0, 0.0}};
  t.reward = {{1.0, -1.0}, {-1.0, 1.0}};
  t.validate();
  return t;
}

// Full-support random distribution of the given size.
inline std::vector<double> random_distribution(int n, posg::Rng& rng) {
  std::vector<double> row(static_cast<std::size_t>(n));
  double total = 0.0;
  for (double& v : row) {
    v = 0.05 + posg::rnd::uniform01(rng);
    total += v;
  }
  for (double& v : row) v /= total;
  return row;
}

// Behavior policy with an independent random distribution at every private
// history of length < horizon.
inline posg::BehaviorPolicy random_behavior_policy(const posg::PosgSpec& spec,
                                                   int player, int horizon,
                                                   posg::Rng& rng) {
  posg::BehaviorPolicy policy(player, spec.action_counts[player]);
  std::vector<posg::InfoSetKey> frontier{posg::InfoSetKey{player, {}}};
  for (int depth = 0; depth < horizon; ++depth) {
    std::vector<posg::InfoSetKey> next;
    for (const posg::InfoSetKey& key : frontier) {
      policy.set(key, random_distribution(spec.action_counts[player], rng));
      if (depth + 1 >= horizon) continue;
      for (int a = 0; a < spec.action_counts[player]; ++a) {
        for (int o = 0; o < spec.observation_counts[player]; ++o) {
          posg::InfoSetKey child = key;
          child.steps.emplace_back(a, o);
          next.push_back(std::move(child));
        }
      }
    }
    frontier = std::move(next);
  }
  return policy;
}

inline std::array<posg::BehaviorPolicy, posg::kNumPlayers> random_behavior_policies(
    const posg::PosgSpec& spec, int horizon, posg::Rng& rng) {
  return {random_behavior_policy(spec, 0, horizon, rng),
          random_behavior_policy(spec, 1, horizon, rng)};
}

// Deterministic policy playing `action` at the root (and everywhere else via
// the explicit root entry plus uniform fallback elsewhere).
inline posg::BehaviorPolicy pure_root_policy(int player, int num_actions, int action) {
  posg::BehaviorPolicy policy(player, num_actions);
  std::vector<double> probs(static_cast<std::size_t>(num_actions), 0.0);
  probs[static_cast<std::size_t>(action)] = 1.0;
  policy.set(posg::InfoSetKey{player, {}}, probs);
  return policy;
}

}  // namespace testutil

#endif  // POSGSOLVE_TESTS_HELPERS_H_
