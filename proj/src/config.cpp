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

#include "posgsolve/config.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "posgsolve/errors.h"

namespace posg {
namespace {

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double parsed = 0;
  try {
    parsed = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ConfigError(key, "not a number: '" + value + "'");
  }
  if (used != value.size()) throw ConfigError(key, "trailing junk in '" + value + "'");
  return parsed;
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long long parsed = 0;
  try {
    parsed = std::stoll(value, &used);
  } catch (const std::exception&) {
    throw ConfigError(key, "not an integer: '" + value + "'");
  }
  if (used != value.size()) throw ConfigError(key, "trailing junk in '" + value + "'");
  return parsed;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  const std::int64_t parsed = parse_int(key, value);
  if (parsed < 0) throw ConfigError(key, "must be non-negative");
  return static_cast<std::uint64_t>(parsed);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(key, "not a boolean: '" + value + "'");
}

// An empty value clears the list (the canonical form round-trips through
// here); a value with blank elements is malformed.
template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& key, const std::string& value,
                          Parse parse) {
  std::vector<T> out;
  if (trim(value).empty()) return out;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(key, "empty list element");
    out.push_back(parse(key, item));
  }
  return out;
}

void apply_key(ExperimentConfig& config, const std::string& section,
               const std::string& key, const std::string& value) {
  const std::string full = section.empty() ? key : section + "." + key;
  if (section == "model") {
    if (key == "name") {
      config.model_name = value;
    } else if (key == "path") {
      config.model_path = value;
    } else if (key == "step_length") {
      config.tag.step_length = parse_double(full, value);
    } else if (key == "noise_sigma") {
      config.tag.noise_sigma = parse_double(full, value);
    } else if (key == "capture_radius") {
      config.tag.capture_radius = parse_double(full, value);
    } else if (key == "discount") {
      config.tag.discount = parse_double(full, value);
    } else if (key == "horizon") {
      config.tag.horizon = static_cast<int>(parse_int(full, value));
    } else {
      throw ConfigError(full, "unknown key");
    }
  } else if (section == "solve") {
    if (key == "particles") {
      config.particles = static_cast<int>(parse_int(full, value));
    } else if (key == "iterations") {
      config.iterations = parse_int(full, value);
    } else if (key == "snapshots") {
      config.snapshots = parse_list<std::int64_t>(full, value, parse_int);
    } else if (key == "seed_base") {
      config.seed_base = parse_uint(full, value);
    } else if (key == "seed_count") {
      config.seed_count = static_cast<int>(parse_int(full, value));
    } else if (key == "seed_list") {
      config.seed_list = parse_list<std::uint64_t>(full, value, parse_uint);
    } else if (key == "cache_mb") {
      config.cache_mb = static_cast<std::size_t>(parse_int(full, value));
    } else if (key == "registry") {
      config.registry = parse_bool(full, value);
    } else {
      throw ConfigError(full, "unknown key");
    }
  } else if (section == "evaluate") {
    if (key == "episodes") {
      config.episodes = parse_int(full, value);
    } else if (key == "pomcp_simulations") {
      config.pomcp.num_simulations = static_cast<int>(parse_int(full, value));
    } else if (key == "pomcp_ucb") {
      config.pomcp.ucb_constant = parse_double(full, value);
    } else if (key == "pomcp_rollout_depth") {
      config.pomcp.rollout_depth = static_cast<int>(parse_int(full, value));
    } else if (key == "pomcp_root_particles") {
      config.pomcp.root_particles = static_cast<int>(parse_int(full, value));
    } else {
      throw ConfigError(full, "unknown key");
    }
  } else if (section == "bounds") {
    if (key == "lambda") {
      config.lambda = parse_double(full, value);
    } else if (key == "failure_prob") {
      config.failure_prob = parse_double(full, value);
    } else if (key == "d_inf_max") {
      config.d_inf_max = parse_double(full, value);
    } else {
      throw ConfigError(full, "unknown key");
    }
  } else if (section == "output") {
    if (key == "directory") {
      config.output_dir = value;
    } else {
      throw ConfigError(full, "unknown key");
    }
  } else {
    throw ConfigError(full, "unknown section");
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  static const std::set<std::string> known_models{"tag", "signal_duel",
                                                  "matching_pennies", "oracle_file"};
  if (!known_models.count(model_name)) {
    throw ConfigError("model.name", "unknown model '" + model_name + "'");
  }
  if (model_name == "oracle_file" && model_path.empty()) {
    throw ConfigError("model.path", "required when model.name = oracle_file");
  }
  if (tag.horizon < 0) throw ConfigError("model.horizon", "must be >= 0");
  if (!(tag.discount >= 0 && tag.discount <= 1)) {
    throw ConfigError("model.discount", "must be in [0, 1]");
  }
  if (!(tag.step_length > 0)) throw ConfigError("model.step_length", "must be > 0");
  if (!(tag.noise_sigma >= 0)) throw ConfigError("model.noise_sigma", "must be >= 0");
  if (!(tag.capture_radius > 0)) {
    throw ConfigError("model.capture_radius", "must be > 0");
  }
  if (particles < 1) throw ConfigError("solve.particles", "must be >= 1");
  if (iterations < 1) throw ConfigError("solve.iterations", "must be >= 1");
  for (std::int64_t s : snapshots) {
    if (s < 1) throw ConfigError("solve.snapshots", "entries must be >= 1");
  }
  if (!std::is_sorted(snapshots.begin(), snapshots.end())) {
    throw ConfigError("solve.snapshots", "must be ascending");
  }
  const std::vector<std::uint64_t> all_seeds = seeds();
  if (all_seeds.empty()) throw ConfigError("solve.seed_count", "no seeds configured");
  if (std::set<std::uint64_t>(all_seeds.begin(), all_seeds.end()).size() !=
      all_seeds.size()) {
    throw ConfigError("solve.seed_list", "seeds must be distinct");
  }
  if (episodes < 1) throw ConfigError("evaluate.episodes", "must be >= 1");
  pomcp.validate();
  if (!(lambda > 0)) throw ConfigError("bounds.lambda", "must be > 0");
  if (!(failure_prob > 0 && failure_prob < 1)) {
    throw ConfigError("bounds.failure_prob", "must be in (0, 1)");
  }
  if (!(d_inf_max >= 1)) throw ConfigError("bounds.d_inf_max", "must be >= 1");
  if (output_dir.empty()) throw ConfigError("output.directory", "must be non-empty");
}

std::vector<std::uint64_t> ExperimentConfig::seeds() const {
  if (!seed_list.empty()) return seed_list;
  std::vector<std::uint64_t> out;
  out.reserve(seed_count);
  for (int i = 0; i < seed_count; ++i) {
    out.push_back(seed_base + static_cast<std::uint64_t>(i));
  }
  return out;
}

std::vector<std::int64_t> ExperimentConfig::snapshot_schedule() const {
  std::vector<std::int64_t> out;
  for (std::int64_t s : snapshots) {
    if (s <= iterations) out.push_back(s);
  }
  if (out.empty() || out.back() != iterations) out.push_back(iterations);
  return out;
}

std::string ExperimentConfig::canonical_text() const {
  std::ostringstream out;
  char buffer[64];
  auto emit_double = [&](const char* key, double value) {
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    out << key << "=" << buffer << "\n";
  };
  out << "model.name=" << model_name << "\n";
  out << "model.path=" << model_path << "\n";
  emit_double("model.step_length", tag.step_length);
  emit_double("model.noise_sigma", tag.noise_sigma);
  emit_double("model.capture_radius", tag.capture_radius);
  emit_double("model.discount", tag.discount);
  out << "model.horizon=" << tag.horizon << "\n";
  out << "solve.particles=" << particles << "\n";
  out << "solve.iterations=" << iterations << "\n";
  out << "solve.snapshots=";
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    out << (i ? "," : "") << snapshots[i];
  }
  out << "\n";
  out << "solve.seed_base=" << seed_base << "\n";
  out << "solve.seed_count=" << seed_count << "\n";
  out << "solve.seed_list=";
  for (std::size_t i = 0; i < seed_list.size(); ++i) {
    out << (i ? "," : "") << seed_list[i];
  }
  out << "\n";
  out << "solve.cache_mb=" << cache_mb << "\n";
  out << "solve.registry=" << (registry ? "true" : "false") << "\n";
  out << "evaluate.episodes=" << episodes << "\n";
  out << "evaluate.pomcp_simulations=" << pomcp.num_simulations << "\n";
  emit_double("evaluate.pomcp_ucb", pomcp.ucb_constant);
  out << "evaluate.pomcp_rollout_depth=" << pomcp.rollout_depth << "\n";
  out << "evaluate.pomcp_root_particles=" << pomcp.root_particles << "\n";
  emit_double("bounds.lambda", lambda);
  emit_double("bounds.failure_prob", failure_prob);
  emit_double("bounds.d_inf_max", d_inf_max);
  out << "output.directory=" << output_dir << "\n";
  return out.str();
}

std::string ExperimentConfig::hash() const {
  const std::string text = canonical_text();
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(h));
  return buffer;
}

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin) {
  ExperimentConfig config;
  std::istringstream stream(text);
  std::string line;
  std::string section;
  int line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']') {
        throw ConfigError(origin + ":" + std::to_string(line_number),
                          "malformed section header '" + stripped + "'");
      }
      section = trim(stripped.substr(1, stripped.size() - 2));
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_number),
                        "expected key=value, got '" + stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(origin + ":" + std::to_string(line_number), "empty key");
    }
    apply_key(config, section, key, value);
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError(assignment, "override must be section.key=value");
  }
  const std::string full_key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  const auto dot = full_key.find('.');
  if (dot == std::string::npos) {
    throw ConfigError(full_key, "override key must be section.key");
  }
  apply_key(config, full_key.substr(0, dot), full_key.substr(dot + 1), value);
}

std::shared_ptr<Model> make_model(const ExperimentConfig& config) {
  if (config.model_name == "tag") {
    return std::make_shared<TagGame>(config.tag);
  }
  if (config.model_name == "signal_duel") {
    return std::make_shared<OracleGame>(make_signal_duel());
  }
  if (config.model_name == "matching_pennies") {
    return std::make_shared<OracleGame>(make_matching_pennies_game());
  }
  if (config.model_name == "oracle_file") {
    return std::make_shared<OracleGame>(load_oracle_tables(config.model_path));
  }
  throw ConfigError("model.name", "unknown model '" + config.model_name + "'");
}

BoundParams bound_params_for(const ExperimentConfig& config, const Model& model) {
  const PosgSpec& spec = model.spec();
  BoundParams params;
  params.lambda = config.lambda;
  params.particles = config.particles;
  params.horizon = spec.horizon;
  params.discount = spec.discount;
  params.d_inf_max = config.d_inf_max;
  params.failure_prob = config.failure_prob;
  params.iterations = config.iterations;
  params.action_counts = spec.action_counts;
  params.observation_counts = spec.observation_counts;
  for (int p = 0; p < kNumPlayers; ++p) {
    params.reward_range[p] = spec.reward_range(p);
    params.max_abs_reward[p] =
        std::max(std::abs(spec.reward_bounds[p][0]), std::abs(spec.reward_bounds[p][1]));
  }
  return params;
}

}  // namespace posg
