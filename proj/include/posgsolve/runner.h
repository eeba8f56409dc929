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

#ifndef POSGSOLVE_RUNNER_H_
#define POSGSOLVE_RUNNER_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "posgsolve/config.h"

namespace posg {

// Artifact naming inside the output directory.
std::string policy_file_name(std::uint64_t seed, std::int64_t snapshot_iter);
std::string solve_report_file_name(std::uint64_t seed);

struct SolveRunResult {
  std::vector<std::uint64_t> solved_seeds;
  std::vector<std::uint64_t> skipped_seeds;  // all artifacts already present
  std::vector<std::string> files;
};
// Per seed: builds the tree, runs the solver, writes one policy file per
// snapshot plus a report. Deterministic per seed; completed seeds are skipped
// on rerun. `jobs` > 1 dispatches seeds to a worker pool.
SolveRunResult run_solve(const ExperimentConfig& config, int jobs = 1,
                         bool dump_tree = false);

struct ExploitRunResult {
  std::string raw_csv_path;
  std::string aggregate_csv_path;
};
// Reads this config's solve artifacts; writes per-(snapshot, seed) rows and
// the cross-seed aggregate. Throws Error listing seeds with missing files.
ExploitRunResult run_exploitability(const ExperimentConfig& config, int jobs = 1);

// Action-sequence marginals of a saved policy: exact enumeration on tabular
// models, Monte Carlo scoring elsewhere; rows normalized to sum to 1.
std::string run_policy_marginal(const ExperimentConfig& config,
                                const std::string& policy_path);

// Writes and returns the formatted constant table.
std::string run_bounds(const ExperimentConfig& config);

struct OracleSuiteResult {
  int passed = 0;
  int failed = 0;
};
// Cross-checks the sampling machinery against exact evaluation on tiny
// games, printing one pass/fail line per check.
OracleSuiteResult run_oracle_suite(std::ostream& out);

}  // namespace posg

#endif  // POSGSOLVE_RUNNER_H_
