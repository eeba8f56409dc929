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

// Command-line front end; talks to the solver exclusively through the C API.

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "posgsolve.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;        // config or runtime failure
constexpr int kExitSuiteFailed = 2;  // oracle suite found mismatches

struct ConfigDeleter {
  void operator()(posg_config* config) const { posg_config_free(config); }
};
using ConfigHandle = std::unique_ptr<posg_config, ConfigDeleter>;

struct StringDeleter {
  void operator()(char* text) const { posg_string_free(text); }
};
using StringHandle = std::unique_ptr<char, StringDeleter>;

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::optional<long long> seed;
  int jobs = 1;
};

void add_common(CLI::App* sub, CommonOptions* options, bool with_jobs = true) {
  sub->add_option("--config", options->config_path, "experiment config file")
      ->required();
  sub->add_option("--out", options->out_dir,
                  "output directory (default: config value, or POSGSOLVE_OUT)");
  sub->add_option("--set", options->overrides,
                  "config override, section.key=value (repeatable)");
  sub->add_option("--seed", options->seed, "run a single seed");
  if (with_jobs) {
    sub->add_option("--jobs", options->jobs, "worker threads across seeds")
        ->check(CLI::PositiveNumber);
  }
}

int report_failure() {
  std::fprintf(stderr, "error: %s\n", posg_last_error());
  return kExitError;
}

ConfigHandle load_config(const CommonOptions& options, int* exit_code) {
  posg_config* raw = nullptr;
  if (posg_config_load(options.config_path.c_str(), &raw) != POSG_OK) {
    *exit_code = report_failure();
    return nullptr;
  }
  ConfigHandle config(raw);
  for (const std::string& assignment : options.overrides) {
    if (posg_config_set(config.get(), assignment.c_str()) != POSG_OK) {
      *exit_code = report_failure();
      return nullptr;
    }
  }
  if (options.seed) {
    const std::string assignment =
        "solve.seed_list=" + std::to_string(*options.seed);
    if (posg_config_set(config.get(), assignment.c_str()) != POSG_OK) {
      *exit_code = report_failure();
      return nullptr;
    }
  }
  std::string out_dir = options.out_dir;
  if (out_dir.empty()) {
    if (const char* env = std::getenv("POSGSOLVE_OUT")) out_dir = env;
  }
  if (!out_dir.empty()) {
    const std::string assignment = "output.directory=" + out_dir;
    if (posg_config_set(config.get(), assignment.c_str()) != POSG_OK) {
      *exit_code = report_failure();
      return nullptr;
    }
  }
  if (posg_config_validate(config.get()) != POSG_OK) {
    *exit_code = report_failure();
    return nullptr;
  }
  *exit_code = kExitOk;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"posgsolve: particle-tree regret-minimization solver for "
               "two-player zero-sum partially observable games"};
  app.set_version_flag("--version", posg_version());
  app.require_subcommand(1);

  CommonOptions solve_options;
  bool dump_tree = false;
  CLI::App* solve = app.add_subcommand("solve", "solve all configured seeds");
  add_common(solve, &solve_options);
  solve->add_flag("--dump-tree", dump_tree, "write a tree walk per seed");

  CommonOptions exploit_options;
  CLI::App* exploit =
      app.add_subcommand("exploit", "evaluate exploitability of solve artifacts");
  add_common(exploit, &exploit_options);

  CommonOptions marginal_options;
  std::string policy_path;
  CLI::App* marginal =
      app.add_subcommand("marginal", "action-sequence marginals of a policy file");
  add_common(marginal, &marginal_options, /*with_jobs=*/false);
  marginal->add_option("--policy", policy_path, "policy file to analyze")
      ->required();

  CommonOptions bounds_options;
  CLI::App* bounds =
      app.add_subcommand("bounds", "print the accuracy-bound constant table");
  add_common(bounds, &bounds_options, /*with_jobs=*/false);

  CLI::App* suite = app.add_subcommand(
      "oracle-suite", "cross-check sampling machinery against exact oracles");

  CLI11_PARSE(app, argc, argv);

  if (solve->parsed()) {
    int exit_code = kExitOk;
    ConfigHandle config = load_config(solve_options, &exit_code);
    if (!config) return exit_code;
    int solved = 0;
    int skipped = 0;
    if (posg_run_solve(config.get(), solve_options.jobs, dump_tree ? 1 : 0,
                       &solved, &skipped) != POSG_OK) {
      return report_failure();
    }
    std::printf("solved %d seed(s), skipped %d already complete\n", solved,
                skipped);
    return kExitOk;
  }

  if (exploit->parsed()) {
    int exit_code = kExitOk;
    ConfigHandle config = load_config(exploit_options, &exit_code);
    if (!config) return exit_code;
    char* raw_path = nullptr;
    char* agg_path = nullptr;
    if (posg_run_exploitability(config.get(), exploit_options.jobs, &raw_path,
                                &agg_path) != POSG_OK) {
      return report_failure();
    }
    StringHandle raw(raw_path);
    StringHandle agg(agg_path);
    std::printf("wrote %s\nwrote %s\n", raw.get(), agg.get());
    return kExitOk;
  }

  if (marginal->parsed()) {
    int exit_code = kExitOk;
    ConfigHandle config = load_config(marginal_options, &exit_code);
    if (!config) return exit_code;
    char* csv_path = nullptr;
    if (posg_run_marginal(config.get(), policy_path.c_str(), &csv_path) !=
        POSG_OK) {
      return report_failure();
    }
    StringHandle csv(csv_path);
    std::printf("wrote %s\n", csv.get());
    return kExitOk;
  }

  if (bounds->parsed()) {
    int exit_code = kExitOk;
    ConfigHandle config = load_config(bounds_options, &exit_code);
    if (!config) return exit_code;
    char* report = nullptr;
    if (posg_run_bounds(config.get(), &report) != POSG_OK) {
      return report_failure();
    }
    StringHandle text(report);
    std::fputs(text.get(), stdout);
    return kExitOk;
  }

  if (suite->parsed()) {
    int failed = 0;
    char* report = nullptr;
    if (posg_run_oracle_suite(&failed, &report) != POSG_OK) {
      return report_failure();
    }
    StringHandle text(report);
    std::fputs(text.get(), stdout);
    return failed == 0 ? kExitOk : kExitSuiteFailed;
  }

  return kExitError;
}
