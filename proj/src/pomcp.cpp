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

#include "posgsolve/pomcp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "posgsolve/errors.h"

namespace posg {

void PomcpParams::validate() const {
  if (num_simulations < 1) {
    throw ConfigError("pomcp_simulations", "must be >= 1");
  }
  if (root_particles < 1) {
    throw ConfigError("pomcp_root_particles", "must be >= 1");
  }
}

struct PomcpPlanner::Node {
  std::int64_t visits = 0;
  std::vector<std::int64_t> action_visits;
  std::vector<double> action_value;
  std::map<std::pair<int, int>, std::unique_ptr<Node>> children;
  std::vector<SimState> particles;

  bool expanded() const { return !action_visits.empty(); }
  void expand(int num_actions) {
    action_visits.assign(num_actions, 0);
    action_value.assign(num_actions, 0.0);
  }
  Node* child(int action, int observation) {
    auto& slot = children[{action, observation}];
    if (!slot) slot = std::make_unique<Node>();
    return slot.get();
  }
};

PomcpPlanner::PomcpPlanner(std::shared_ptr<const Model> model,
                           BehaviorPolicy frozen_opponent, int responder,
                           const PomcpParams& params)
    : model_(std::move(model)),
      frozen_(std::move(frozen_opponent)),
      responder_(responder),
      opponent_(1 - responder),
      params_(params) {
  params_.validate();
  const PosgSpec& spec = model_->spec();
  ucb_constant_ = params_.ucb_constant;
  if (ucb_constant_ <= 0) {
    // Default exploration scale: the maximum absolute discounted return.
    const double per_step = spec.max_abs_reward();
    double scale = 0;
    double power = 1;
    for (int d = 0; d < spec.horizon; ++d) {
      scale += power * per_step;
      power *= spec.discount;
    }
    ucb_constant_ = std::max(scale, 1e-3);
  }
}

PomcpPlanner::~PomcpPlanner() = default;

PomcpPlanner::StepOutcome PomcpPlanner::generative_step(const SimState& state,
                                                        int responder_action,
                                                        Rng& rng) const {
  const int opponent_action = frozen_.sample_action(state.opponent_key, rng);
  JointAction joint;
  joint[responder_] = responder_action;
  joint[opponent_] = opponent_action;
  const GenerativeStep step = model_->step(state.world, joint, rng);
  StepOutcome out;
  out.state.world = step.next_state;
  out.state.opponent_key = state.opponent_key;
  out.state.opponent_key.steps.emplace_back(opponent_action,
                                            step.observation[opponent_]);
  out.observation = step.observation[responder_];
  out.reward = step.rewards[responder_];
  out.terminal = step.terminal;
  return out;
}

double PomcpPlanner::rollout(SimState state, int stage, Rng& rng) {
  const PosgSpec& spec = model_->spec();
  const int num_actions = spec.action_counts[responder_];
  const int limit = params_.rollout_depth > 0
                        ? std::min(spec.horizon, stage + params_.rollout_depth)
                        : spec.horizon;
  double value = 0;
  double power = 1;
  for (int t = stage; t < limit; ++t) {
    if (model_->is_terminal(state.world)) break;
    const int action =
        static_cast<int>(rnd::uniform_below(rng, static_cast<std::uint64_t>(num_actions)));
    StepOutcome outcome = generative_step(state, action, rng);
    value += power * outcome.reward;
    power *= spec.discount;
    if (outcome.terminal) break;
    state = std::move(outcome.state);
  }
  return value;
}

double PomcpPlanner::simulate(const SimState& state, Node* node, int stage,
                              Rng& rng) {
  const PosgSpec& spec = model_->spec();
  if (stage >= spec.horizon || model_->is_terminal(state.world)) return 0;
  if (!node->expanded()) {
    node->expand(spec.action_counts[responder_]);
    node->visits = 1;
    return rollout(state, stage, rng);
  }
  int action = -1;
  double best = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < static_cast<int>(node->action_visits.size()); ++a) {
    if (node->action_visits[a] == 0) {
      action = a;
      break;
    }
    const double ucb =
        node->action_value[a] +
        ucb_constant_ * std::sqrt(std::log(static_cast<double>(node->visits)) /
                                  static_cast<double>(node->action_visits[a]));
    if (ucb > best) {
      best = ucb;
      action = a;
    }
  }
  StepOutcome outcome = generative_step(state, action, rng);
  double value = outcome.reward;
  if (!outcome.terminal && stage + 1 < spec.horizon) {
    Node* child = node->child(action, outcome.observation);
    child->particles.push_back(outcome.state);
    value += spec.discount * simulate(outcome.state, child, stage + 1, rng);
  }
  ++node->visits;
  ++node->action_visits[action];
  node->action_value[action] +=
      (value - node->action_value[action]) /
      static_cast<double>(node->action_visits[action]);
  return value;
}

int PomcpPlanner::plan(const std::vector<SimState>& belief, int stage, Rng& rng) {
  root_ = std::make_unique<Node>();
  for (int i = 0; i < params_.num_simulations; ++i) {
    const SimState& start =
        belief[rnd::uniform_below(rng, static_cast<std::uint64_t>(belief.size()))];
    simulate(start, root_.get(), stage, rng);
  }
  int best_action = 0;
  std::int64_t best_visits = -1;
  for (int a = 0; a < static_cast<int>(root_->action_visits.size()); ++a) {
    if (root_->action_visits[a] > best_visits) {
      best_visits = root_->action_visits[a];
      best_action = a;
    }
  }
  return best_action;
}

std::vector<PomcpPlanner::SimState> PomcpPlanner::filter_belief(
    const std::vector<SimState>& belief, int action, int observation, Rng& rng) {
  std::vector<SimState> next;
  next.reserve(params_.root_particles);
  if (root_) {
    auto it = root_->children.find({action, observation});
    if (it != root_->children.end() && it->second) {
      const auto& bag = it->second->particles;
      for (const SimState& s : bag) {
        if (static_cast<int>(next.size()) >= params_.root_particles) break;
        next.push_back(s);
      }
    }
  }
  // Rejection top-up: resimulate the taken action until the responder's
  // observation matches. Termination is public, so a particle that reaches a
  // terminal state (or already was one) is inconsistent with the episode
  // continuing and is rejected.
  const std::int64_t max_attempts =
      static_cast<std::int64_t>(params_.root_particles) * 50;
  std::int64_t attempts = 0;
  while (static_cast<int>(next.size()) < params_.root_particles &&
         attempts < max_attempts) {
    ++attempts;
    const SimState& start =
        belief[rnd::uniform_below(rng, static_cast<std::uint64_t>(belief.size()))];
    if (model_->is_terminal(start.world)) continue;
    StepOutcome outcome = generative_step(start, action, rng);
    if (!outcome.terminal && outcome.observation == observation) {
      next.push_back(std::move(outcome.state));
    }
  }
  if (next.empty()) {
    // Fallback when the observation is unreachable under the belief: keep the
    // propagated states and accept the mismatch rather than dying. Terminal
    // particles are carried over unstepped.
    for (int i = 0; i < params_.root_particles; ++i) {
      const SimState& start =
          belief[rnd::uniform_below(rng, static_cast<std::uint64_t>(belief.size()))];
      if (model_->is_terminal(start.world)) {
        next.push_back(start);
      } else {
        next.push_back(generative_step(start, action, rng).state);
      }
    }
  }
  return next;
}

double PomcpPlanner::play_episode(Rng& rng) {
  const PosgSpec& spec = model_->spec();
  State real = model_->sample_initial_state(rng);
  InfoSetKey opponent_key{opponent_, {}};
  std::vector<SimState> belief;
  belief.reserve(params_.root_particles);
  for (int i = 0; i < params_.root_particles; ++i) {
    belief.push_back({model_->sample_initial_state(rng), InfoSetKey{opponent_, {}}});
  }
  double value = 0;
  double power = 1;
  for (int t = 0; t < spec.horizon; ++t) {
    if (model_->is_terminal(real)) break;
    const int responder_action = plan(belief, t, rng);
    const int opponent_action = frozen_.sample_action(opponent_key, rng);
    JointAction joint;
    joint[responder_] = responder_action;
    joint[opponent_] = opponent_action;
    const GenerativeStep step = model_->step(real, joint, rng);
    value += power * step.rewards[responder_];
    power *= spec.discount;
    if (step.terminal || t + 1 >= spec.horizon) break;
    belief = filter_belief(belief, responder_action, step.observation[responder_],
                           rng);
    opponent_key.steps.emplace_back(opponent_action, step.observation[opponent_]);
    real = step.next_state;
  }
  return value;
}

}  // namespace posg
