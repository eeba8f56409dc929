/* Copyright 2026 The posgsolve Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of the posgsolve shared library. All functions return a
 * posg_status; on failure, posg_last_error() describes the problem for the
 * calling thread. Handles are opaque and freed with their matching _free
 * function. Strings returned through char** are owned by the caller and
 * released with posg_string_free().
 */

#ifndef POSGSOLVE_H_
#define POSGSOLVE_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum posg_status {
  POSG_OK = 0,
  POSG_ERROR_INVALID_ARGUMENT = 1,
  POSG_ERROR_CONFIG = 2,
  POSG_ERROR_UNSUPPORTED = 3, /* enumeration guards, parameter stipulations */
  POSG_ERROR_RUNTIME = 4
} posg_status;

const char* posg_version(void);
/* Message of the most recent failure on this thread; never NULL. */
const char* posg_last_error(void);
void posg_string_free(char* text);

/* ------------------------------------------------------------------------ */
/* Experiment configuration                                                  */
/* ------------------------------------------------------------------------ */

typedef struct posg_config posg_config;

posg_status posg_config_default(posg_config** out);
posg_status posg_config_load(const char* path, posg_config** out);
/* assignment: "section.key=value", e.g. "solve.particles=100". */
posg_status posg_config_set(posg_config* config, const char* assignment);
posg_status posg_config_validate(const posg_config* config);
posg_status posg_config_canonical(const posg_config* config, char** out_text);
posg_status posg_config_hash(const posg_config* config, char** out_hash);
void posg_config_free(posg_config* config);

/* ------------------------------------------------------------------------ */
/* Runs (artifacts written under the config's output directory)              */
/* ------------------------------------------------------------------------ */

/* Solves every configured seed; completed seeds are skipped on rerun. */
posg_status posg_run_solve(const posg_config* config, int jobs, int dump_tree,
                           int* out_solved, int* out_skipped);
/* Evaluates the config's solve artifacts; returns both CSV paths. */
posg_status posg_run_exploitability(const posg_config* config, int jobs,
                                    char** out_raw_csv_path,
                                    char** out_aggregate_csv_path);
/* Action-sequence marginals of one saved policy file. */
posg_status posg_run_marginal(const posg_config* config, const char* policy_path,
                              char** out_csv_path);
/* Labelled table of every accuracy-bound constant. */
posg_status posg_run_bounds(const posg_config* config, char** out_report);
/* Exact-vs-sampled cross checks on tiny games. out_failed: number of failed
 * checks; out_report: one pass/fail line per check. */
posg_status posg_run_oracle_suite(int* out_failed, char** out_report);

/* ------------------------------------------------------------------------ */
/* Policy files                                                              */
/* ------------------------------------------------------------------------ */

typedef struct posg_policy posg_policy;

posg_status posg_policy_load(const char* path, posg_policy** out);
posg_status posg_policy_num_actions(const posg_policy* policy, int player,
                                    int* out);
/* history: "a0:o0/a1:o1/..." of the player's own actions and observations,
 * or "-" for the root. Unseen histories yield the uniform distribution.
 * buffer must hold at least num_actions doubles. */
posg_status posg_policy_probs(const posg_policy* policy, int player,
                              const char* history, double* buffer,
                              size_t buffer_size, size_t* out_size);
void posg_policy_free(posg_policy* policy);

#ifdef __cplusplus
}
#endif

#endif /* POSGSOLVE_H_ */
