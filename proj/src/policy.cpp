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

#include "posgsolve/policy.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "posgsolve/errors.h"

namespace posg {

bool InfoSetKey::operator<(const InfoSetKey& other) const {
  if (player != other.player) return player < other.player;
  if (steps.size() != other.steps.size()) return steps.size() < other.steps.size();
  return steps < other.steps;
}

std::string InfoSetKey::encode() const {
  if (steps.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) out += '/';
    out += std::to_string(steps[i].first);
    out += ':';
    out += std::to_string(steps[i].second);
  }
  return out;
}

InfoSetKey InfoSetKey::decode(int player, const std::string& text) {
  InfoSetKey key;
  key.player = player;
  if (text == "-" || text.empty()) return key;
  std::istringstream ss(text);
  std::string part;
  while (std::getline(ss, part, '/')) {
    const auto colon = part.find(':');
    if (colon == std::string::npos)
      throw ConfigError("policy.history", "malformed step '" + part + "'");
    key.steps.emplace_back(std::stoi(part.substr(0, colon)),
                           std::stoi(part.substr(colon + 1)));
  }
  return key;
}

std::size_t InfoSetKeyHash::operator()(const InfoSetKey& key) const {
  std::uint64_t h = rnd::mix(static_cast<std::uint64_t>(key.player) + 1);
  for (const auto& [a, o] : key.steps) {
    h = rnd::combine(h, static_cast<std::uint64_t>(a) * 0x10001ULL +
                            static_cast<std::uint64_t>(o));
  }
  return static_cast<std::size_t>(h);
}

BehaviorPolicy::BehaviorPolicy(int player, int num_actions)
    : player_(player), num_actions_(num_actions) {
  if (num_actions <= 0)
    throw ContractViolationError("behavior policy needs a positive action count");
}

std::vector<double> BehaviorPolicy::probs(const InfoSetKey& key) const {
  if (const auto* found = find(key)) return *found;
  return std::vector<double>(num_actions_, 1.0 / num_actions_);
}

const std::vector<double>* BehaviorPolicy::find(const InfoSetKey& key) const {
  const auto it = table_.find(key);
  return it == table_.end() ? nullptr : &it->second;
}

void BehaviorPolicy::set(const InfoSetKey& key, std::vector<double> probs) {
  if (static_cast<int>(probs.size()) != num_actions_)
    throw ContractViolationError("behavior policy row has wrong action count");
  table_[key] = std::move(probs);
}

int BehaviorPolicy::sample_action(const InfoSetKey& key, Rng& rng) const {
  if (const auto* found = find(key)) return rnd::sample_weighted(rng, *found);
  return rnd::uniform_below(rng, num_actions_);
}

std::vector<std::pair<InfoSetKey, std::vector<double>>> BehaviorPolicy::sorted_entries()
    const {
  return {table_.begin(), table_.end()};
}

double entropy_nats(std::span<const double> probs) {
  double h = 0.0;
  for (const double p : probs)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

// ---------------------------------------------------------------------------
// Policy files
// ---------------------------------------------------------------------------

void save_policy_file(const std::string& path, const PolicyFileHeader& header,
                      const std::array<BehaviorPolicy, kNumPlayers>& policies) {
  std::ofstream out(path);
  if (!out) throw ConfigError("output.dir", "cannot write '" + path + "'");
  out << "# posgsolve " << header.tool_version << " config=" << header.config_hash
      << " seed=" << header.seed << "\n";
  out << "# model=" << header.model << " particles=" << header.particles
      << " horizon=" << header.horizon << " iterations=" << header.iterations
      << " snapshot=" << header.snapshot << "\n";
  char buf[64];
  for (const auto& policy : policies) {
    for (const auto& [key, probs] : policy.sorted_entries()) {
      out << policy.player() << " " << key.encode();
      for (const double p : probs) {
        std::snprintf(buf, sizeof(buf), "%.17g", p);
        out << " " << buf;
      }
      out << "\n";
    }
  }
}

LoadedPolicy load_policy_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("policy.file", "cannot open '" + path + "'");
  LoadedPolicy out;
  std::array<bool, kNumPlayers> initialized{false, false};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      // Header lines carry space-separated key=value tokens plus the bare
      // version after the tool name.
      std::istringstream ss(line.substr(1));
      std::string token;
      std::string previous;
      while (ss >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) {
          if (previous == "posgsolve") out.header.tool_version = token;
          previous = token;
          continue;
        }
        previous = token;
        const std::string k = token.substr(0, eq);
        const std::string v = token.substr(eq + 1);
        if (k == "config") out.header.config_hash = v;
        else if (k == "seed") out.header.seed = std::stoull(v);
        else if (k == "model") out.header.model = v;
        else if (k == "particles") out.header.particles = std::stoi(v);
        else if (k == "horizon") out.header.horizon = std::stoi(v);
        else if (k == "iterations") out.header.iterations = std::stoll(v);
        else if (k == "snapshot") out.header.snapshot = std::stoll(v);
      }
      continue;
    }
    std::istringstream ss(line);
    int player = 0;
    std::string history;
    if (!(ss >> player >> history))
      throw ConfigError("policy.file", "malformed record '" + line + "'");
    if (player < 0 || player >= kNumPlayers)
      throw ConfigError("policy.file", "player index out of range in '" + line + "'");
    std::vector<double> probs;
    double p;
    while (ss >> p) probs.push_back(p);
    if (probs.empty())
      throw ConfigError("policy.file", "record without probabilities: '" + line + "'");
    if (!initialized[player]) {
      out.policies[player] = BehaviorPolicy(player, static_cast<int>(probs.size()));
      initialized[player] = true;
    }
    out.policies[player].set(InfoSetKey::decode(player, history), std::move(probs));
  }
  return out;
}

}  // namespace posg
