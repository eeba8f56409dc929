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

#ifndef POSGSOLVE_CDIT_H_
#define POSGSOLVE_CDIT_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <unordered_map>
#include <vector>

#include "posgsolve/belief.h"
#include "posgsolve/model.h"
#include "posgsolve/policy.h"

namespace posg {

// Nodes whose terminal particle weight exceeds this are treated as leaves.
inline constexpr double kTerminalLeafWeight = 0.999;

class Cdit;

// One observation layer node: a sampled belief reached after a sequence of
// (joint action, chance branch) choices, together with the joint history that
// produced it.
class CditNode {
 public:
  struct HistoryStep {
    int action_code = 0;
    int branch_index = 0;
    int observation_code = 0;
  };

  int depth() const { return static_cast<int>(history_.size()); }
  const std::vector<HistoryStep>& history() const { return history_; }
  const ParticleBelief& belief() const { return belief_; }
  double terminal_weight() const { return terminal_weight_; }
  std::uint64_t path_hash() const { return path_hash_; }

  // The player's view of this node: its own action/observation components of
  // the joint history.
  InfoSetKey info_set_key(const PosgSpec& spec, int player) const;

  // Belief-weighted immediate reward, cached per joint action code.
  const std::array<double, kNumPlayers>& mean_reward(const Model& model,
                                                     int action_code);

  // Branches of `action_code` known to be depleted.
  int dead_branch_count(int action_code) const;
  // Children currently materialized in memory (cache view; children outside
  // the cache budget are regenerated on demand, bit-identically).
  std::size_t cached_child_count() const { return children_.size(); }

 private:
  friend class Cdit;

  std::vector<HistoryStep> history_;
  ParticleBelief belief_;
  double terminal_weight_ = 0.0;
  std::uint64_t path_hash_ = 0;

  // (action code, branch index) -> child. Ordered so tree dumps are stable.
  std::map<std::pair<int, int>, std::shared_ptr<CditNode>> children_;
  std::set<std::pair<int, int>> dead_branches_;
  std::unordered_map<int, std::array<double, kNumPlayers>> reward_cache_;
};

// Particle-based conditional-distribution tree over joint histories.
// Expansion is lazy and memoized: each (node, joint action, branch index)
// triple owns one frozen chance outcome. All expansion randomness derives
// from the tree seed and the triple itself, so a child evicted from the
// bounded cache is regenerated bit-identically on the next request, and the
// materialized tree is a deterministic function of (seed, traversal script).
class Cdit {
 public:
  struct Options {
    int particles = 0;                          // branches per action == C
    std::size_t cache_bytes = 256u << 20;       // belief cache budget
    // Registry mode keeps every expanded node and an information-set index
    // (key -> member nodes). Intended for small trees and diagnostics.
    bool registry = false;
  };

  // Root belief = `particles` i.i.d. initial-state draws with uniform
  // weights; the tree seed is drawn from `rng`.
  Cdit(std::shared_ptr<const Model> model, const Options& options, Rng& rng);

  const Model& model() const { return *model_; }
  int branch_count() const { return options_.particles; }
  int horizon() const { return model_->spec().horizon; }
  CditNode& root() { return *root_; }
  const CditNode& root() const { return *root_; }

  // Returns the (memoized) child for the triple, or nullptr when the branch
  // is dead: a depleted branch is re-sampled once and, if depleted again,
  // excluded permanently. node.depth() must be < horizon().
  std::shared_ptr<CditNode> expand_child(CditNode& node, const JointAction& a,
                                         int branch_index);
  std::shared_ptr<CditNode> expand_child(CditNode& node, int action_code,
                                         int branch_index);

  // Chance draw for solvers: uniform over the action's live branches.
  // Returns nullptr when every branch is dead (depleted subtree).
  std::shared_ptr<CditNode> sample_child(CditNode& node, int action_code, Rng& rng);

  // Diagnostics (registry mode only).
  struct Mixture {
    std::vector<const CditNode*> members;
    std::vector<double> weights;  // normalized
  };
  // Conditional distribution over the key's member nodes: each member is
  // weighted by the opponent's policy probability of its history times the
  // uniform chance weight of its branches. Throws EmptyMixtureError if the
  // key has no members.
  Mixture info_set_mixture(const InfoSetKey& key,
                           const BehaviorPolicy& opponent_policy) const;
  const std::vector<CditNode*>* members_of(const InfoSetKey& key) const;
  const std::unordered_map<InfoSetKey, std::vector<CditNode*>, InfoSetKeyHash>&
  registry() const {
    return registry_;
  }
  std::size_t registered_node_count() const { return registered_nodes_; }

  std::size_t cache_bytes_used() const { return cache_bytes_used_; }
  std::int64_t generation_count() const { return generations_; }

  // Textual walk of the materialized tree, one node per line.
  void dump(std::ostream& out, int max_depth) const;

 private:
  std::shared_ptr<CditNode> generate_child(const CditNode& node, int action_code,
                                           int branch_index);
  std::size_t node_bytes(const CditNode& node) const;
  void register_node(CditNode* node);
  void dump_node(std::ostream& out, const CditNode& node, int max_depth) const;

  std::shared_ptr<const Model> model_;
  Options options_;
  std::uint64_t tree_seed_ = 0;
  std::shared_ptr<CditNode> root_;
  std::size_t cache_bytes_used_ = 0;
  std::int64_t generations_ = 0;
  std::size_t registered_nodes_ = 0;
  std::unordered_map<InfoSetKey, std::vector<CditNode*>, InfoSetKeyHash> registry_;
};

}  // namespace posg

#endif  // POSGSOLVE_CDIT_H_
