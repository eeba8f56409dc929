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

#ifndef POSGSOLVE_POLICY_H_
#define POSGSOLVE_POLICY_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "posgsolve/random.h"
#include "posgsolve/types.h"

namespace posg {

// A player's private history: the (own action, own observation) pairs seen so
// far, root-first. Nodes whose private histories coincide are indistinguishable
// to that player and share one key.
struct InfoSetKey {
  int player = 0;
  std::vector<std::pair<int, int>> steps;

  int depth() const { return static_cast<int>(steps.size()); }
  bool operator==(const InfoSetKey&) const = default;
  // Strict weak order: player, then depth, then lexicographic steps. Used for
  // deterministic file output.
  bool operator<(const InfoSetKey& other) const;

  // "a0:o0/a1:o1/..." with "-" for the empty history.
  std::string encode() const;
  static InfoSetKey decode(int player, const std::string& text);
};

struct InfoSetKeyHash {
  std::size_t operator()(const InfoSetKey& key) const;
};

// Map from private histories to action distributions for one player.
// Unseen histories fall back to the uniform distribution.
class BehaviorPolicy {
 public:
  BehaviorPolicy() = default;
  BehaviorPolicy(int player, int num_actions);

  int player() const { return player_; }
  int num_actions() const { return num_actions_; }
  std::size_t size() const { return table_.size(); }

  // Always returns a valid distribution (uniform fallback).
  std::vector<double> probs(const InfoSetKey& key) const;
  const std::vector<double>* find(const InfoSetKey& key) const;
  void set(const InfoSetKey& key, std::vector<double> probs);

  int sample_action(const InfoSetKey& key, Rng& rng) const;

  // Deterministically ordered view of the stored table.
  std::vector<std::pair<InfoSetKey, std::vector<double>>> sorted_entries() const;

 private:
  int player_ = 0;
  int num_actions_ = 1;
  std::map<InfoSetKey, std::vector<double>> table_;
};

double entropy_nats(std::span<const double> probs);

// ---------------------------------------------------------------------------
// Policy files: line-oriented text, one record per information set.
// ---------------------------------------------------------------------------

struct PolicyFileHeader {
  std::string tool_version;
  std::string config_hash;
  std::string model;
  int particles = 0;
  int horizon = 0;
  std::int64_t iterations = 0;
  std::int64_t snapshot = 0;
  std::uint64_t seed = 0;
};

void save_policy_file(const std::string& path, const PolicyFileHeader& header,
                      const std::array<BehaviorPolicy, kNumPlayers>& policies);

struct LoadedPolicy {
  PolicyFileHeader header;
  std::array<BehaviorPolicy, kNumPlayers> policies;
};
LoadedPolicy load_policy_file(const std::string& path);

}  // namespace posg

#endif  // POSGSOLVE_POLICY_H_
