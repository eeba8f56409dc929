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

#ifndef POSGSOLVE_CONFIG_H_
#define POSGSOLVE_CONFIG_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "posgsolve/bounds.h"
#include "posgsolve/model.h"
#include "posgsolve/pomcp.h"

namespace posg {

inline constexpr const char* kToolVersion = "0.1.0";

// Flat sectioned key=value experiment description. Unknown keys are errors;
// every parse failure names the offending key.
struct ExperimentConfig {
  // [model]
  std::string model_name = "tag";  // tag | signal_duel | matching_pennies | oracle_file
  std::string model_path;          // game table file when model_name = oracle_file
  TagParams tag;

  // [solve]
  int particles = 100;       // C: branches per action and particles per belief
  std::int64_t iterations = 1000;  // T
  std::vector<std::int64_t> snapshots{1, 2, 5, 10, 20, 50, 100, 200, 500, 1000};
  std::uint64_t seed_base = 1;
  int seed_count = 10;
  std::vector<std::uint64_t> seed_list;  // overrides seed_base/seed_count if set
  std::size_t cache_mb = 256;
  bool registry = false;

  // [evaluate]
  std::int64_t episodes = 1000;
  PomcpParams pomcp;

  // [bounds]
  double lambda = 0.1;
  double failure_prob = 0.05;
  double d_inf_max = 1.0;

  // [output]
  std::string output_dir = "out";

  void validate() const;           // throws ConfigError naming the key
  std::vector<std::uint64_t> seeds() const;
  std::vector<std::int64_t> snapshot_schedule() const;  // clipped to iterations
  // Canonical serialization: every key in fixed order, one per line.
  std::string canonical_text() const;
  // FNV-1a hash of the canonical text, 16 hex digits.
  std::string hash() const;
};

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin);
ExperimentConfig load_config(const std::string& path);
// "section.key=value" override, applied after loading.
void apply_override(ExperimentConfig& config, const std::string& assignment);

// Model selected by the config; throws ConfigError for unknown names.
std::shared_ptr<Model> make_model(const ExperimentConfig& config);

// Bound parameters filled from the config plus the model's spec.
BoundParams bound_params_for(const ExperimentConfig& config, const Model& model);

}  // namespace posg

#endif  // POSGSOLVE_CONFIG_H_
