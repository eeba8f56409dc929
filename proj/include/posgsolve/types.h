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

#ifndef POSGSOLVE_TYPES_H_
#define POSGSOLVE_TYPES_H_

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace posg {

inline constexpr int kNumPlayers = 2;

// One action (or observation) index per player.
using JointAction = std::array<int, kNumPlayers>;
using JointObservation = std::array<int, kNumPlayers>;

// State of the continuous pursuit game: two planar positions plus a flag
// recording that the capture reward has already been paid (absorbing).
struct TagState {
  std::array<double, 2> pursuer{0.0, 0.0};
  std::array<double, 2> evader{0.0, 0.0};
  bool captured = false;

  bool operator==(const TagState&) const = default;
};

// Discrete states are plain indexes into a model's state table.
using State = std::variant<int, TagState>;

// Static description of a game instance.
struct PosgSpec {
  std::array<int, kNumPlayers> action_counts{0, 0};
  std::array<int, kNumPlayers> observation_counts{0, 0};
  int horizon = 0;     // number of decision stages; rewards at t = 0..horizon-1
  double discount = 1.0;
  // Per-player [min, max] one-step reward.
  std::array<std::array<double, 2>, kNumPlayers> reward_bounds{{{0.0, 0.0}, {0.0, 0.0}}};
  bool zero_sum = true;

  int num_joint_actions() const { return action_counts[0] * action_counts[1]; }
  int num_joint_observations() const {
    return observation_counts[0] * observation_counts[1];
  }
  double reward_range(int player) const {
    return reward_bounds[player][1] - reward_bounds[player][0];
  }
  double max_abs_reward() const;
  void validate() const;  // throws ConfigError naming the offending field
};

// Result of one generative transition.
struct GenerativeStep {
  State next_state;
  JointObservation observation{0, 0};
  std::array<double, kNumPlayers> rewards{0.0, 0.0};
  bool terminal = false;
};

// Player-major packing of joint indexes into a single code.
inline int joint_action_code(const PosgSpec& spec, const JointAction& a) {
  return a[0] * spec.action_counts[1] + a[1];
}
inline JointAction joint_action_from_code(const PosgSpec& spec, int code) {
  return {code / spec.action_counts[1], code % spec.action_counts[1]};
}
inline int joint_observation_code(const PosgSpec& spec, const JointObservation& o) {
  return o[0] * spec.observation_counts[1] + o[1];
}
inline JointObservation joint_observation_from_code(const PosgSpec& spec, int code) {
  return {code / spec.observation_counts[1], code % spec.observation_counts[1]};
}

}  // namespace posg

#endif  // POSGSOLVE_TYPES_H_
