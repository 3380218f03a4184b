// Copyright 2026 The idldp Authors
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

/*
 * C interface of libidldp.
 *
 * Objects are opaque handles created by idldp_*_create / solve / load calls
 * and released with the matching *_free function. Every fallible call
 * returns an idldp_status; on failure idldp_last_error() describes the
 * problem (per thread, valid until the next failing call on that thread).
 * Strings returned through char** out-parameters are heap-allocated and must
 * be released with idldp_string_free().
 *
 * Budgets are in nats. Items are 1-based; levels are 0-based.
 */

#ifndef IDLDP_IDLDP_H_
#define IDLDP_IDLDP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define IDLDP_API __declspec(dllexport)
#else
#define IDLDP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum idldp_status {
  IDLDP_OK = 0,
  IDLDP_INVALID_ARGUMENT = 1,
  IDLDP_OUT_OF_RANGE = 2,
  IDLDP_SOLVER_ERROR = 3,
  IDLDP_ENUMERATION_CAP = 4,
  IDLDP_PARSE_ERROR = 5,
  IDLDP_IO_ERROR = 6,
  IDLDP_INTERNAL = 7
} idldp_status;

typedef enum idldp_r_kind { IDLDP_R_MIN = 0, IDLDP_R_AVG = 1 } idldp_r_kind;
typedef enum idldp_opt_model { IDLDP_OPT0 = 0, IDLDP_OPT1 = 1, IDLDP_OPT2 = 2 } idldp_opt_model;
typedef enum idldp_baseline { IDLDP_RAPPOR = 0, IDLDP_OUE = 1 } idldp_baseline;
typedef enum idldp_generator { IDLDP_POWERLAW = 0, IDLDP_UNIFORM = 1 } idldp_generator;
typedef enum idldp_format { IDLDP_SPACE_SEP_IDS = 0, IDLDP_CSV_USER_ITEM = 1 } idldp_format;

typedef struct idldp_model idldp_model;
typedef struct idldp_profile idldp_profile;
typedef struct idldp_dataset idldp_dataset;

IDLDP_API const char* idldp_version(void);
IDLDP_API const char* idldp_status_string(idldp_status status);
IDLDP_API const char* idldp_last_error(void);
IDLDP_API void idldp_string_free(char* text);

/* "ln(k)" or a decimal number. */
IDLDP_API idldp_status idldp_parse_budget(const char* text, double* out);

/* ---- privacy model ---------------------------------------------------- */

/* Contiguous levels: the first sizes[0] items get budgets[0], and so on. */
IDLDP_API idldp_status idldp_model_from_sizes(const double* budgets, const size_t* sizes,
                                              size_t levels, idldp_r_kind r_kind,
                                              idldp_model** out);
/* item_levels[k] is the 0-based level of item k+1. Empty levels are dropped
 * when compact is non-zero and rejected otherwise. */
IDLDP_API idldp_status idldp_model_from_levels(const double* budgets, size_t levels,
                                               const size_t* item_levels, size_t m,
                                               idldp_r_kind r_kind, int compact,
                                               idldp_model** out);
IDLDP_API void idldp_model_free(idldp_model* model);
IDLDP_API size_t idldp_model_num_levels(const idldp_model* model);
IDLDP_API size_t idldp_model_universe_size(const idldp_model* model);
IDLDP_API idldp_status idldp_model_budget(const idldp_model* model, size_t level, double* out);
IDLDP_API idldp_status idldp_model_level_of(const idldp_model* model, uint32_t item,
                                            size_t* out);

/* ---- profiles ---------------------------------------------------------- */

typedef struct idldp_solver_options {
  size_t restarts;
  size_t max_iters;
  double step_tol;
  double constraint_tol;
  uint64_t seed;
  size_t threads;
} idldp_solver_options;

IDLDP_API void idldp_solver_options_default(idldp_solver_options* options);

/* A profile handle keeps a copy of the model it was built for. options may
 * be NULL for the defaults. */
IDLDP_API idldp_status idldp_solve(const idldp_model* model, idldp_opt_model which,
                                   const idldp_solver_options* options, idldp_profile** out);
IDLDP_API idldp_status idldp_profile_baseline(const idldp_model* model, idldp_baseline which,
                                              double eps, idldp_profile** out);
/* Per-level (a, b); the dummy pair copies the level with the smallest
 * budget. */
IDLDP_API idldp_status idldp_profile_create(const idldp_model* model, const double* a,
                                            const double* b, size_t levels,
                                            idldp_profile** out);
IDLDP_API void idldp_profile_free(idldp_profile* profile);
IDLDP_API size_t idldp_profile_num_levels(const idldp_profile* profile);
IDLDP_API idldp_status idldp_profile_level(const idldp_profile* profile, size_t level, double* a,
                                           double* b);
IDLDP_API idldp_status idldp_profile_dummy(const idldp_profile* profile, double* a, double* b);
/* New model handle with the profile's model. */
IDLDP_API idldp_status idldp_profile_model(const idldp_profile* profile, idldp_model** out);
/* Worst-case total variance coefficient and the variance sum. */
IDLDP_API idldp_status idldp_profile_objectives(const idldp_profile* profile,
                                                double* worst_case, double* variance_sum);
/* Solver objective, or NaN when the profile was not produced by a solver. */
IDLDP_API double idldp_profile_solver_objective(const idldp_profile* profile);
IDLDP_API idldp_status idldp_profile_serialize(const idldp_profile* profile, char** out);
IDLDP_API idldp_status idldp_profile_parse(const char* text, idldp_profile** out);

/* ---- privacy checks ---------------------------------------------------- */

typedef struct idldp_check_result {
  int passed;
  double max_ratio;
  double bound;
  double slack;
  size_t pairs_checked;
  char worst_x[64];
  char worst_x_prime[64];
} idldp_check_result;

IDLDP_API idldp_status idldp_check(const idldp_profile* profile, double tol,
                                   idldp_check_result* out);

typedef struct idldp_audit_options {
  /* Items kept for the single-item brute-force, LDP and composition audits. */
  size_t bruteforce_m;
  /* Items kept for the item-set audit; 0 skips it. */
  size_t itemset_m;
  /* Largest padding length of the item-set audit (1..max_ell). */
  size_t max_ell;
  double tol;
  uint64_t enumeration_cap;
} idldp_audit_options;

IDLDP_API void idldp_audit_options_default(idldp_audit_options* options);

/* Runs every audit and writes a JSON document. *all_passed is 1 when every
 * audit passed. options may be NULL for the defaults. */
IDLDP_API idldp_status idldp_audit(const idldp_profile* profile,
                                   const idldp_audit_options* options, char** json,
                                   int* all_passed);

/* ---- datasets ---------------------------------------------------------- */

/* alpha is ignored by the uniform generator. */
IDLDP_API idldp_status idldp_dataset_generate(idldp_generator kind, size_t n, size_t m,
                                              double alpha, uint64_t seed, idldp_dataset** out);
/* Record u holds items[offsets[u] .. offsets[u+1]); offsets has n+1 entries. */
IDLDP_API idldp_status idldp_dataset_create(size_t m, const uint32_t* items,
                                            const size_t* offsets, size_t n,
                                            idldp_dataset** out);
/* warnings may be NULL; otherwise receives a JSON object with loader
 * diagnostics. */
IDLDP_API idldp_status idldp_dataset_load(const char* path, idldp_format format,
                                          idldp_dataset** out, char** warnings);
IDLDP_API idldp_status idldp_dataset_save(const idldp_dataset* dataset, const char* path);
IDLDP_API void idldp_dataset_free(idldp_dataset* dataset);
IDLDP_API size_t idldp_dataset_num_records(const idldp_dataset* dataset);
IDLDP_API size_t idldp_dataset_universe_size(const idldp_dataset* dataset);
/* counts must hold universe_size entries. */
IDLDP_API idldp_status idldp_dataset_true_counts(const idldp_dataset* dataset, uint64_t* counts,
                                                 size_t len);
IDLDP_API idldp_status idldp_dataset_summary(const idldp_dataset* dataset, char** json);

/* ---- simulation -------------------------------------------------------- */

/* Runs the experiment described by a flat key=value text (one pair per line,
 * '#' comments) and returns the metrics CSV. Keys: mechanisms, model,
 * r_kind, epsilons, level_multipliers, level_fractions, repeats, k, ell,
 * seed, threads, report_path (aggregate|per-user), identity (0|1),
 * solver.restarts, solver.max_iters, solver.seed. Unknown keys are echoed
 * into the CSV header but otherwise ignored. profile may be NULL; otherwise
 * it replaces the solved IDUE profile. */
IDLDP_API idldp_status idldp_simulate(const idldp_dataset* dataset, const char* config,
                                      const idldp_profile* profile, char** csv);

#ifdef __cplusplus
}
#endif

#endif /* IDLDP_IDLDP_H_ */
