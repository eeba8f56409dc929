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

#include "posgsolve/cdit.h"

#include <algorithm>
#include <cstdio>

#include "posgsolve/errors.h"

namespace posg {

InfoSetKey CditNode::info_set_key(const PosgSpec& spec, int player) const {
  InfoSetKey key;
  key.player = player;
  key.steps.reserve(history_.size());
  for (const HistoryStep& step : history_) {
    const JointAction a = joint_action_from_code(spec, step.action_code);
    const JointObservation o = joint_observation_from_code(spec, step.observation_code);
    key.steps.emplace_back(a[player], o[player]);
  }
  return key;
}

const std::array<double, kNumPlayers>& CditNode::mean_reward(const Model& model,
                                                             int action_code) {
  const auto it = reward_cache_.find(action_code);
  if (it != reward_cache_.end()) return it->second;
  const JointAction a = joint_action_from_code(model.spec(), action_code);
  return reward_cache_.emplace(action_code, belief_.mean_reward(model, a))
      .first->second;
}

int CditNode::dead_branch_count(int action_code) const {
  int count = 0;
  for (const auto& slot : dead_branches_)
    if (slot.first == action_code) ++count;
  return count;
}

Cdit::Cdit(std::shared_ptr<const Model> model, const Options& options, Rng& rng)
    : model_(std::move(model)), options_(options) {
  if (options_.particles <= 0)
    throw ContractViolationError("cdit: particle count must be positive");
  root_ = std::make_shared<CditNode>();
  root_->belief_ = sample_initial_belief(*model_, options_.particles, rng);
  root_->terminal_weight_ = root_->belief_.terminal_weight(*model_);
  tree_seed_ = rnd::mix(rng());
  root_->path_hash_ = tree_seed_;
  cache_bytes_used_ += node_bytes(*root_);
  register_node(root_.get());
}

std::size_t Cdit::node_bytes(const CditNode& node) const {
  return node.belief_.particles.size() * (sizeof(State) + sizeof(double)) +
         sizeof(CditNode) + 64;
}

void Cdit::register_node(CditNode* node) {
  if (!options_.registry) return;
  ++registered_nodes_;
  for (int p = 0; p < kNumPlayers; ++p)
    registry_[node->info_set_key(model_->spec(), p)].push_back(node);
}

std::shared_ptr<CditNode> Cdit::expand_child(CditNode& node, const JointAction& a,
                                             int branch_index) {
  return expand_child(node, joint_action_code(model_->spec(), a), branch_index);
}

std::shared_ptr<CditNode> Cdit::expand_child(CditNode& node, int action_code,
                                             int branch_index) {
  if (node.depth() >= horizon())
    throw ContractViolationError("cdit: cannot expand below the horizon");
  if (branch_index < 0 || branch_index >= options_.particles)
    throw ContractViolationError("cdit: branch index out of range");
  const std::pair<int, int> slot{action_code, branch_index};
  if (node.dead_branches_.count(slot)) return nullptr;
  if (const auto it = node.children_.find(slot); it != node.children_.end())
    return it->second;
  auto child = generate_child(node, action_code, branch_index);
  if (!child) {
    node.dead_branches_.insert(slot);
    return nullptr;
  }
  const std::size_t bytes = node_bytes(*child);
  const bool cache = options_.registry || cache_bytes_used_ + bytes <= options_.cache_bytes;
  if (cache) {
    node.children_.emplace(slot, child);
    cache_bytes_used_ += bytes;
    register_node(child.get());
  }
  return child;
}

std::shared_ptr<CditNode> Cdit::generate_child(const CditNode& node, int action_code,
                                               int branch_index) {
  // All randomness for this triple derives from the tree seed and the path,
  // never from the caller, so regeneration after eviction is bit-identical
  // and independent of traversal order.
  const std::uint64_t slot_seed = rnd::combine(
      node.path_hash_,
      static_cast<std::uint64_t>(action_code) * (options_.particles + 1) +
          static_cast<std::uint64_t>(branch_index) + 1);
  const JointAction action = joint_action_from_code(model_->spec(), action_code);
  // A depleted draw is retried once with a fresh stream before the branch is
  // declared dead.
  for (int attempt = 0; attempt < 2; ++attempt) {
    Rng rng(rnd::combine(slot_seed, static_cast<std::uint64_t>(attempt)));
    ObservationBranch branch =
        sample_observation_branch(*model_, node.belief_, action, rng);
    ParticleBelief posterior;
    try {
      posterior = reweight(*model_, std::move(branch.propagated),
                           node.belief_.weights, action, branch.observation);
    } catch (const ParticleDepletionError&) {
      continue;
    }
    auto child = std::make_shared<CditNode>();
    child->history_ = node.history_;
    child->history_.push_back(
        {action_code, branch_index,
         joint_observation_code(model_->spec(), branch.observation)});
    child->belief_ = std::move(posterior);
    child->terminal_weight_ = child->belief_.terminal_weight(*model_);
    child->path_hash_ = slot_seed;
    ++generations_;
    return child;
  }
  return nullptr;
}

std::shared_ptr<CditNode> Cdit::sample_child(CditNode& node, int action_code,
                                             Rng& rng) {
  // Uniform over live branches; freshly discovered dead branches shrink the
  // live set and the draw repeats. Returns nullptr once all C are dead.
  while (true) {
    const int dead = node.dead_branch_count(action_code);
    const int live = options_.particles - dead;
    if (live <= 0) return nullptr;
    int branch = rnd::uniform_below(rng, options_.particles);
    while (node.dead_branches_.count({action_code, branch}))
      branch = rnd::uniform_below(rng, options_.particles);
    if (auto child = expand_child(node, action_code, branch)) return child;
  }
}

Cdit::Mixture Cdit::info_set_mixture(const InfoSetKey& key,
                                     const BehaviorPolicy& opponent_policy) const {
  const auto* members = members_of(key);
  if (!members || members->empty())
    throw EmptyMixtureError("no member nodes for key '" + key.encode() + "'");
  const int opponent = 1 - key.player;
  const PosgSpec& spec = model_->spec();
  Mixture mixture;
  double total = 0.0;
  for (CditNode* node : *members) {
    // Weight = product over the node's history of the opponent's action
    // probability at its own key prefix, times the uniform chance weight of
    // each branch.
    double w = 1.0;
    InfoSetKey opp_key;
    opp_key.player = opponent;
    for (const CditNode::HistoryStep& step : node->history()) {
      const JointAction a = joint_action_from_code(spec, step.action_code);
      const JointObservation o =
          joint_observation_from_code(spec, step.observation_code);
      w *= opponent_policy.probs(opp_key)[a[opponent]];
      w *= 1.0 / options_.particles;
      opp_key.steps.emplace_back(a[opponent], o[opponent]);
    }
    mixture.members.push_back(node);
    mixture.weights.push_back(w);
    total += w;
  }
  if (total <= 0.0)
    throw EmptyMixtureError("all member nodes unreachable under opponent policy for '" +
                            key.encode() + "'");
  for (double& w : mixture.weights) w /= total;
  return mixture;
}

const std::vector<CditNode*>* Cdit::members_of(const InfoSetKey& key) const {
  const auto it = registry_.find(key);
  return it == registry_.end() ? nullptr : &it->second;
}

void Cdit::dump(std::ostream& out, int max_depth) const {
  out << "# cdit model=" << model_->name() << " particles=" << options_.particles
      << " horizon=" << horizon() << "\n";
  dump_node(out, *root_, max_depth);
}

void Cdit::dump_node(std::ostream& out, const CditNode& node, int max_depth) const {
  if (node.depth() > max_depth) return;
  out << node.depth() << " ";
  if (node.history().empty()) {
    out << "-";
  } else {
    for (std::size_t i = 0; i < node.history().size(); ++i) {
      const auto& step = node.history()[i];
      if (i) out << "/";
      out << step.action_code << "." << step.branch_index << "." << step.observation_code;
    }
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", node.terminal_weight());
  out << " terminal=" << buf << " top_weights=";
  std::vector<double> weights = node.belief().weights;
  std::sort(weights.begin(), weights.end(), std::greater<>());
  const std::size_t top = std::min<std::size_t>(5, weights.size());
  for (std::size_t i = 0; i < top; ++i) {
    std::snprintf(buf, sizeof(buf), "%.6f", weights[i]);
    out << (i ? "," : "") << buf;
  }
  out << "\n";
  for (const auto& [slot, child] : node.children_) dump_node(out, *child, max_depth);
}

}  // namespace posg
