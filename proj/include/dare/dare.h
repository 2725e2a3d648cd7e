// Copyright 2026 The darecache Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DARE_DARE_H
#define DARE_DARE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef DARE_BUILDING_LIBRARY
#    define DARE_API __declspec(dllexport)
#  else
#    define DARE_API __declspec(dllimport)
#  endif
#else
#  define DARE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every fallible call returns one; on failure the message is
 * available from dare_last_error() on the calling thread. */
typedef enum dare_status {
  DARE_OK = 0,
  DARE_ERR_INVALID_ARGUMENT = 1,
  DARE_ERR_INFEASIBLE = 2,
  DARE_ERR_CONVERGENCE = 3,
  DARE_ERR_TOO_LARGE = 4,
  DARE_ERR_DOMAIN = 5,
  DARE_ERR_IO = 6,
  DARE_ERR_BUFFER_TOO_SMALL = 7,
  DARE_ERR_INTERNAL = 8
} dare_status;

DARE_API const char* dare_version(void);
DARE_API const char* dare_status_name(dare_status status);
/* Message of the last failed call on this thread; "" if none. */
DARE_API const char* dare_last_error(void);

/* Text outputs follow one convention: `needed` receives the size including
 * the terminating NUL. Pass buf = NULL or a short buffer to query it; the
 * call then returns DARE_ERR_BUFFER_TOO_SMALL (or DARE_OK when buf is NULL). */

typedef struct dare_catalog dare_catalog;
typedef struct dare_damage dare_damage;
typedef struct dare_trace dare_trace;
typedef struct dare_offline_result dare_offline_result;
typedef struct dare_retention_solution dare_retention_solution;
typedef struct dare_sim_report dare_sim_report;
typedef struct dare_sweep_result dare_sweep_result;
typedef struct dare_mdp_result dare_mdp_result;
typedef struct dare_experiment dare_experiment;
typedef struct dare_table dare_table;

/* ---- catalog ---------------------------------------------------------- */

/* Zipf rates 1/m^alpha. `delays` may be NULL (all 1), hold one uniform value,
 * or one value per file. */
DARE_API dare_status dare_catalog_zipf(uint32_t files, double alpha, const double* delays,
                                       size_t n_delays, dare_catalog** out);
DARE_API dare_status dare_catalog_from_rates(const double* rates, size_t n_rates,
                                             const double* delays, size_t n_delays,
                                             dare_catalog** out);
/* Copy with rates rescaled to sum to one. */
DARE_API dare_status dare_catalog_normalized(const dare_catalog* catalog, dare_catalog** out);
DARE_API void dare_catalog_free(dare_catalog* catalog);
DARE_API uint32_t dare_catalog_size(const dare_catalog* catalog);
/* Per-file values for m in 1..size. */
DARE_API dare_status dare_catalog_rate(const dare_catalog* catalog, uint32_t m, double* out);
DARE_API dare_status dare_catalog_probability(const dare_catalog* catalog, uint32_t m,
                                              double* out);
DARE_API dare_status dare_catalog_delay(const dare_catalog* catalog, uint32_t m, double* out);

/* ---- damage polynomial ------------------------------------------------ */

/* coefficients[k-1] = a_k, k = 1..n. */
DARE_API dare_status dare_damage_create(const double* coefficients, size_t n,
                                        dare_damage** out);
DARE_API void dare_damage_free(dare_damage* damage);
DARE_API dare_status dare_damage_eval(const dare_damage* damage, double z, double* out);
DARE_API dare_status dare_damage_expected_exponential(const dare_damage* damage, double mu,
                                                      double* out);

/* ---- traces ----------------------------------------------------------- */

DARE_API dare_status dare_trace_create(uint32_t files, const uint32_t* requests, size_t slots,
                                       const uint32_t* initial_cache, size_t n_initial,
                                       dare_trace** out);
DARE_API dare_status dare_trace_generate(const dare_catalog* catalog, uint64_t slots,
                                         uint64_t seed, dare_trace** out);
DARE_API dare_status dare_trace_parse(const char* text, dare_trace** out);
DARE_API dare_status dare_trace_format(const dare_trace* trace, char* buf, size_t cap,
                                       size_t* needed);
/* Replaces the initial cache of an existing trace. */
DARE_API dare_status dare_trace_set_initial_cache(dare_trace* trace, const uint32_t* files,
                                                  size_t n);
DARE_API void dare_trace_free(dare_trace* trace);
DARE_API uint64_t dare_trace_horizon(const dare_trace* trace);
DARE_API uint32_t dare_trace_files(const dare_trace* trace);
DARE_API dare_status dare_trace_request(const dare_trace* trace, uint64_t slot, uint32_t* out);

/* ---- offline policies ------------------------------------------------- */

typedef enum dare_offline_policy {
  DARE_OFFLINE_LRU = 0,
  DARE_OFFLINE_FIFO = 1,
  DARE_OFFLINE_RND = 2,
  DARE_OFFLINE_FIF = 3,
  DARE_OFFLINE_DARE = 4,
  DARE_OFFLINE_DARE_STAR = 5,
  DARE_OFFLINE_FIF_STAR = 6,
  DARE_OFFLINE_LRU_STAR = 7
} dare_offline_policy;

DARE_API dare_status dare_offline_policy_parse(const char* name, dare_offline_policy* out);
DARE_API const char* dare_offline_policy_name(dare_offline_policy policy);

typedef struct dare_offline_summary {
  uint64_t horizon;
  uint64_t misses;
  uint64_t writes;
  uint64_t evictions;
  double damage;
  double miss_fraction;
} dare_offline_summary;

typedef struct dare_write_record {
  uint32_t file;
  uint64_t write_slot;
  uint64_t retention;
  /* Nonzero when the write was evicted at `evicted_slot`. */
  int evicted;
  uint64_t evicted_slot;
} dare_write_record;

/* Runs any offline policy; star variants may decline to cache. `seed` may be
 * NULL except for RND. */
DARE_API dare_status dare_offline_run(const dare_trace* trace, uint32_t capacity,
                                      dare_offline_policy policy, const dare_damage* damage,
                                      const uint64_t* seed, dare_offline_result** out);
DARE_API void dare_offline_result_free(dare_offline_result* result);
DARE_API dare_status dare_offline_result_summary(const dare_offline_result* result,
                                                 dare_offline_summary* out);
DARE_API dare_status dare_offline_result_write(const dare_offline_result* result, size_t index,
                                               dare_write_record* out);
DARE_API dare_status dare_offline_result_eviction(const dare_offline_result* result,
                                                  size_t index, uint64_t* slot, uint32_t* file);
DARE_API dare_status dare_offline_result_csv(const dare_offline_result* result, char* buf,
                                             size_t cap, size_t* needed);

/* Exhaustive minimum (misses, damage) over all schedules of a small trace. */
DARE_API dare_status dare_offline_brute_force(const dare_trace* trace, uint32_t capacity,
                                              const dare_damage* damage, uint64_t* min_misses,
                                              double* min_damage);

/* ---- retention optimizer ---------------------------------------------- */

DARE_API dare_status dare_retention_objective(const dare_catalog* catalog,
                                              const dare_damage* damage, const double* q,
                                              size_t n, double* out);
DARE_API dare_status dare_retention_delay(const dare_catalog* catalog, const double* q,
                                          size_t n, double* out);
/* tolerance <= 0 selects the default. */
DARE_API dare_status dare_retention_solve(const dare_catalog* catalog, const dare_damage* damage,
                                          double delay_budget, double tolerance,
                                          dare_retention_solution** out);
DARE_API void dare_retention_solution_free(dare_retention_solution* solution);
DARE_API uint32_t dare_retention_solution_size(const dare_retention_solution* solution);
/* q_m and mu_m for m in 1..size; mu is +inf for never-written files. */
DARE_API dare_status dare_retention_solution_file(const dare_retention_solution* solution,
                                                  uint32_t m, double* q, double* mu);
DARE_API double dare_retention_solution_objective(const dare_retention_solution* solution);
DARE_API double dare_retention_solution_delay(const dare_retention_solution* solution);
DARE_API double dare_retention_solution_theta(const dare_retention_solution* solution);
DARE_API double dare_retention_solution_kkt_residual(const dare_retention_solution* solution);
DARE_API dare_status dare_retention_solution_csv(const dare_retention_solution* solution,
                                                 char* buf, size_t cap, size_t* needed);

/* ---- online simulation ------------------------------------------------ */

typedef enum dare_eviction_rule {
  DARE_RULE_DARE_DELTA = 0,
  DARE_RULE_LRU = 1,
  DARE_RULE_FIFO = 2,
  DARE_RULE_RND = 3
} dare_eviction_rule;

typedef enum dare_cost_mode {
  DARE_COST_DELAY_PLUS_DAMAGE = 0,
  DARE_COST_DAMAGE_ONLY = 1,
  DARE_COST_DELAY_ONLY = 2
} dare_cost_mode;

DARE_API dare_status dare_eviction_rule_parse(const char* name, dare_eviction_rule* out);
DARE_API const char* dare_eviction_rule_name(dare_eviction_rule rule);
DARE_API dare_status dare_cost_mode_parse(const char* name, dare_cost_mode* out);
DARE_API const char* dare_cost_mode_name(dare_cost_mode mode);

typedef struct dare_online_config {
  /* Zero means an unbounded cache. */
  uint32_t capacity;
  dare_eviction_rule rule;
  /* Stochastic retention when `mu` is non-NULL (one rate per file, +inf for
   * never-write); otherwise every write is retained for `tau`. */
  const double* mu;
  size_t n_mu;
  double tau;
  dare_cost_mode cost_mode;
  uint64_t events;
  uint64_t seed;
  int record_events;
} dare_online_config;

typedef struct dare_sim_summary {
  double total_damage;
  uint64_t requests;
  uint64_t misses;
  uint64_t writes;
  uint64_t evictions;
  uint64_t declined;
  double miss_fraction;
  double delay;
  double end_time;
} dare_sim_summary;

DARE_API void dare_online_config_init(dare_online_config* config);
DARE_API dare_status dare_online_run(const dare_catalog* catalog, const dare_damage* damage,
                                     const dare_online_config* config, dare_sim_report** out);
/* Solve for the budget, then simulate DARE-Delta with the solved rates.
 * `solution` may be NULL. capacity 0 = unbounded. */
DARE_API dare_status dare_pipeline_run(const dare_catalog* catalog, const dare_damage* damage,
                                       uint32_t capacity, double delay_budget,
                                       dare_cost_mode cost_mode, uint64_t events, uint64_t seed,
                                       dare_retention_solution** solution,
                                       dare_sim_report** out);
DARE_API void dare_sim_report_free(dare_sim_report* report);
DARE_API dare_status dare_sim_report_summary(const dare_sim_report* report,
                                             dare_sim_summary* out);
/* Per-file counts for m in 1..M. */
DARE_API dare_status dare_sim_report_file(const dare_sim_report* report, uint32_t m,
                                          uint64_t* requests, uint64_t* misses,
                                          uint64_t* writes, double* damage);
/* Free-form configuration text stored in the JSON output. */
DARE_API dare_status dare_sim_report_set_config_echo(dare_sim_report* report, const char* text);
DARE_API dare_status dare_sim_report_csv(const dare_sim_report* report, char* buf, size_t cap,
                                         size_t* needed);
DARE_API dare_status dare_sim_report_json(const dare_sim_report* report, char* buf, size_t cap,
                                          size_t* needed);
DARE_API dare_status dare_sim_report_event_log_csv(const dare_sim_report* report, char* buf,
                                                   size_t cap, size_t* needed);

/* Deterministic-retention sweep. `delay_budget` may be NULL (no constraint).
 * capacity 0 = unbounded. */
DARE_API dare_status dare_sweep_run(const dare_catalog* catalog, const dare_damage* damage,
                                    uint32_t capacity, dare_eviction_rule rule,
                                    const double* taus, size_t n_taus, uint64_t events,
                                    const uint64_t* seeds, size_t n_seeds,
                                    const double* delay_budget, dare_sweep_result** out);
DARE_API void dare_sweep_result_free(dare_sweep_result* result);
DARE_API dare_status dare_sweep_result_best(const dare_sweep_result* result, double* tau,
                                            double* damage, double* miss_fraction);
DARE_API dare_status dare_sweep_result_csv(const dare_sweep_result* result, char* buf,
                                           size_t cap, size_t* needed);

/* ---- MDP oracle ------------------------------------------------------- */

/* Finite-horizon value iteration for arrival rates `lambda`, retention rates
 * `mu` and per-file miss costs `cost`, all of length `files`. */
DARE_API dare_status dare_mdp_oracle_run(const double* lambda, const double* mu,
                                         const double* cost, uint32_t files, uint32_t capacity,
                                         uint32_t horizon, dare_mdp_result** out);
DARE_API void dare_mdp_result_free(dare_mdp_result* result);
DARE_API size_t dare_mdp_result_decisions(const dare_mdp_result* result);
/* 1 when the p_u c(u) rule is optimal in every decision state. */
DARE_API int dare_mdp_result_all_agree(const dare_mdp_result* result);
DARE_API dare_status dare_mdp_result_csv(const dare_mdp_result* result, char* buf, size_t cap,
                                         size_t* needed);

/* ---- experiments ------------------------------------------------------ */

/* Names: offline-tradeoff, delta-sweep, online-compare, star-tradeoff,
 * competitive-ratio. */
DARE_API dare_status dare_experiment_create(const char* name, dare_experiment** out);
DARE_API void dare_experiment_free(dare_experiment* experiment);
/* Keys: capacities, alphas, files, slots, events, epsilons, degrees, delta,
 * tau_grid, policies, replications, seed, cost_mode, damage, threads. List
 * values are comma separated. */
DARE_API dare_status dare_experiment_set(dare_experiment* experiment, const char* key,
                                         const char* value);
DARE_API dare_status dare_experiment_run(const dare_experiment* experiment, int plot_data,
                                         dare_table** out);
DARE_API void dare_table_free(dare_table* table);
DARE_API dare_status dare_table_csv(const dare_table* table, char* buf, size_t cap,
                                    size_t* needed);

#ifdef __cplusplus
}
#endif

#endif /* DARE_DARE_H */
