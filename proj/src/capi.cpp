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

#include "posgsolve.h"

#include <cstring>
#include <memory>
#include <sstream>
#include <string>

#include "posgsolve/config.h"
#include "posgsolve/errors.h"
#include "posgsolve/policy.h"
#include "posgsolve/runner.h"

namespace {

thread_local std::string g_last_error = "no error";

char* copy_string(const std::string& text) {
  char* out = new char[text.size() + 1];
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

template <typename Fn>
posg_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const posg::ConfigError& e) {
    g_last_error = e.what();
    return POSG_ERROR_CONFIG;
  } catch (const posg::EnumerationTooLargeError& e) {
    g_last_error = e.what();
    return POSG_ERROR_UNSUPPORTED;
  } catch (const posg::StipulationViolatedError& e) {
    g_last_error = e.what();
    return POSG_ERROR_UNSUPPORTED;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return POSG_ERROR_RUNTIME;
  } catch (...) {
    g_last_error = "unknown error";
    return POSG_ERROR_RUNTIME;
  }
}

posg_status invalid_argument(const char* message) {
  g_last_error = message;
  return POSG_ERROR_INVALID_ARGUMENT;
}

}  // namespace

struct posg_config {
  posg::ExperimentConfig impl;
};

struct posg_policy {
  posg::LoadedPolicy impl;
};

extern "C" {

const char* posg_version(void) { return posg::kToolVersion; }

const char* posg_last_error(void) { return g_last_error.c_str(); }

void posg_string_free(char* text) { delete[] text; }

posg_status posg_config_default(posg_config** out) {
  if (!out) return invalid_argument("out is NULL");
  return guarded([&]() {
    *out = new posg_config{};
    return POSG_OK;
  });
}

posg_status posg_config_load(const char* path, posg_config** out) {
  if (!path) return invalid_argument("path is NULL");
  if (!out) return invalid_argument("out is NULL");
  return guarded([&]() {
    auto config = std::make_unique<posg_config>();
    config->impl = posg::load_config(path);
    *out = config.release();
    return POSG_OK;
  });
}

posg_status posg_config_set(posg_config* config, const char* assignment) {
  if (!config) return invalid_argument("config is NULL");
  if (!assignment) return invalid_argument("assignment is NULL");
  return guarded([&]() {
    posg::apply_override(config->impl, assignment);
    return POSG_OK;
  });
}

posg_status posg_config_validate(const posg_config* config) {
  if (!config) return invalid_argument("config is NULL");
  return guarded([&]() {
    config->impl.validate();
    return POSG_OK;
  });
}

posg_status posg_config_canonical(const posg_config* config, char** out_text) {
  if (!config) return invalid_argument("config is NULL");
  if (!out_text) return invalid_argument("out_text is NULL");
  return guarded([&]() {
    *out_text = copy_string(config->impl.canonical_text());
    return POSG_OK;
  });
}

posg_status posg_config_hash(const posg_config* config, char** out_hash) {
  if (!config) return invalid_argument("config is NULL");
  if (!out_hash) return invalid_argument("out_hash is NULL");
  return guarded([&]() {
    *out_hash = copy_string(config->impl.hash());
    return POSG_OK;
  });
}

void posg_config_free(posg_config* config) { delete config; }

posg_status posg_run_solve(const posg_config* config, int jobs, int dump_tree,
                           int* out_solved, int* out_skipped) {
  if (!config) return invalid_argument("config is NULL");
  return guarded([&]() {
    const posg::SolveRunResult result =
        posg::run_solve(config->impl, jobs, dump_tree != 0);
    if (out_solved) *out_solved = static_cast<int>(result.solved_seeds.size());
    if (out_skipped) *out_skipped = static_cast<int>(result.skipped_seeds.size());
    return POSG_OK;
  });
}

posg_status posg_run_exploitability(const posg_config* config, int jobs,
                                    char** out_raw_csv_path,
                                    char** out_aggregate_csv_path) {
  if (!config) return invalid_argument("config is NULL");
  return guarded([&]() {
    const posg::ExploitRunResult result =
        posg::run_exploitability(config->impl, jobs);
    if (out_raw_csv_path) *out_raw_csv_path = copy_string(result.raw_csv_path);
    if (out_aggregate_csv_path) {
      *out_aggregate_csv_path = copy_string(result.aggregate_csv_path);
    }
    return POSG_OK;
  });
}

posg_status posg_run_marginal(const posg_config* config, const char* policy_path,
                              char** out_csv_path) {
  if (!config) return invalid_argument("config is NULL");
  if (!policy_path) return invalid_argument("policy_path is NULL");
  return guarded([&]() {
    const std::string path = posg::run_policy_marginal(config->impl, policy_path);
    if (out_csv_path) *out_csv_path = copy_string(path);
    return POSG_OK;
  });
}

posg_status posg_run_bounds(const posg_config* config, char** out_report) {
  if (!config) return invalid_argument("config is NULL");
  return guarded([&]() {
    const std::string report = posg::run_bounds(config->impl);
    if (out_report) *out_report = copy_string(report);
    return POSG_OK;
  });
}

posg_status posg_run_oracle_suite(int* out_failed, char** out_report) {
  return guarded([&]() {
    std::ostringstream stream;
    const posg::OracleSuiteResult result = posg::run_oracle_suite(stream);
    if (out_failed) *out_failed = result.failed;
    if (out_report) *out_report = copy_string(stream.str());
    return POSG_OK;
  });
}

posg_status posg_policy_load(const char* path, posg_policy** out) {
  if (!path) return invalid_argument("path is NULL");
  if (!out) return invalid_argument("out is NULL");
  return guarded([&]() {
    auto policy = std::make_unique<posg_policy>();
    policy->impl = posg::load_policy_file(path);
    *out = policy.release();
    return POSG_OK;
  });
}

posg_status posg_policy_num_actions(const posg_policy* policy, int player,
                                    int* out) {
  if (!policy) return invalid_argument("policy is NULL");
  if (player < 0 || player >= posg::kNumPlayers) {
    return invalid_argument("player out of range");
  }
  if (!out) return invalid_argument("out is NULL");
  *out = policy->impl.policies[player].num_actions();
  return POSG_OK;
}

posg_status posg_policy_probs(const posg_policy* policy, int player,
                              const char* history, double* buffer,
                              size_t buffer_size, size_t* out_size) {
  if (!policy) return invalid_argument("policy is NULL");
  if (player < 0 || player >= posg::kNumPlayers) {
    return invalid_argument("player out of range");
  }
  if (!history) return invalid_argument("history is NULL");
  if (!buffer) return invalid_argument("buffer is NULL");
  return guarded([&]() {
    const posg::InfoSetKey key = posg::InfoSetKey::decode(player, history);
    const std::vector<double> probs = policy->impl.policies[player].probs(key);
    if (buffer_size < probs.size()) {
      g_last_error = "buffer too small: need " + std::to_string(probs.size()) +
                     " doubles";
      return POSG_ERROR_INVALID_ARGUMENT;
    }
    std::memcpy(buffer, probs.data(), probs.size() * sizeof(double));
    if (out_size) *out_size = probs.size();
    return POSG_OK;
  });
}

void posg_policy_free(posg_policy* policy) { delete policy; }

}  // extern "C"
