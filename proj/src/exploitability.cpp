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

#include "posgsolve/exploitability.h"

#include <cmath>
#include <utility>

#include "posgsolve/stats.h"

namespace posg {
namespace {

ValueEstimate summarize(const std::vector<double>& samples) {
  ValueEstimate estimate;
  estimate.episodes = static_cast<std::int64_t>(samples.size());
  estimate.mean = stats::mean(samples);
  estimate.se = stats::standard_error(samples);
  return estimate;
}

}  // namespace

std::array<ValueEstimate, kNumPlayers> rollout_value(
    std::shared_ptr<const Model> model,
    const std::array<BehaviorPolicy, kNumPlayers>& policies,
    std::int64_t episodes, Rng& rng) {
  const PosgSpec& spec = model->spec();
  std::array<std::vector<double>, kNumPlayers> returns;
  for (auto& r : returns) r.reserve(episodes);
  const std::uint64_t master = rnd::mix(rng());
  for (std::int64_t episode = 0; episode < episodes; ++episode) {
    Rng episode_rng(rnd::combine(master, static_cast<std::uint64_t>(episode)));
    State state = model->sample_initial_state(episode_rng);
    std::array<InfoSetKey, kNumPlayers> keys{InfoSetKey{0, {}}, InfoSetKey{1, {}}};
    std::array<double, kNumPlayers> value{0, 0};
    double power = 1;
    for (int t = 0; t < spec.horizon; ++t) {
      if (model->is_terminal(state)) break;
      JointAction joint;
      for (int p = 0; p < kNumPlayers; ++p) {
        joint[p] = policies[p].sample_action(keys[p], episode_rng);
      }
      const GenerativeStep step = model->step(state, joint, episode_rng);
      value[0] += power * step.rewards[0];
      value[1] += power * step.rewards[1];
      power *= spec.discount;
      if (step.terminal) break;
      for (int p = 0; p < kNumPlayers; ++p) {
        keys[p].steps.emplace_back(joint[p], step.observation[p]);
      }
      state = step.next_state;
    }
    returns[0].push_back(value[0]);
    returns[1].push_back(value[1]);
  }
  return {summarize(returns[0]), summarize(returns[1])};
}

ValueEstimate pomcp_best_response(std::shared_ptr<const Model> model,
                                  const BehaviorPolicy& frozen_opponent,
                                  int responder, const PomcpParams& params,
                                  std::int64_t episodes, Rng& rng) {
  PomcpPlanner planner(model, frozen_opponent, responder, params);
  std::vector<double> returns;
  returns.reserve(episodes);
  const std::uint64_t master = rnd::mix(rng());
  for (std::int64_t episode = 0; episode < episodes; ++episode) {
    Rng episode_rng(rnd::combine(master, static_cast<std::uint64_t>(episode)));
    returns.push_back(planner.play_episode(episode_rng));
  }
  return summarize(returns);
}

ExploitabilityPoint estimate_exploitability(
    std::shared_ptr<const Model> model,
    const std::array<BehaviorPolicy, kNumPlayers>& policies,
    const PomcpParams& params, std::int64_t episodes, Rng& rng,
    std::int64_t iteration_label) {
  const auto values = rollout_value(model, policies, episodes, rng);
  ExploitabilityPoint point;
  point.iteration = iteration_label;
  point.episodes = episodes;
  for (int p = 0; p < kNumPlayers; ++p) {
    const int responder = 1 - p;
    const ValueEstimate response = pomcp_best_response(
        model, policies[p], responder, params, episodes, rng);
    point.exploitability[p] = values[p].mean + response.mean;
    point.se[p] = std::sqrt(values[p].se * values[p].se + response.se * response.se);
  }
  point.nashconv = point.exploitability[0] + point.exploitability[1];
  point.nashconv_se = std::sqrt(point.se[0] * point.se[0] + point.se[1] * point.se[1]);
  return point;
}

std::vector<ExploitabilityPoint> exploitability_curve(
    std::shared_ptr<const Model> model, const std::vector<EscfrSnapshot>& snapshots,
    const PomcpParams& params, std::int64_t episodes, Rng& rng) {
  std::vector<ExploitabilityPoint> curve;
  curve.reserve(snapshots.size());
  for (const EscfrSnapshot& snapshot : snapshots) {
    curve.push_back(estimate_exploitability(model, snapshot.policies, params,
                                            episodes, rng, snapshot.iteration));
  }
  return curve;
}

}  // namespace posg
