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

/* Exercises the shared library through its C header only. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "dare/dare.h"

static int failures = 0;
static int checks = 0;

#define CHECK(cond)                                                   \
  do {                                                                \
    ++checks;                                                         \
    if (!(cond)) {                                                    \
      ++failures;                                                     \
      fprintf(stderr, "%s:%d: CHECK(%s) failed\n", __FILE__, __LINE__, #cond); \
    }                                                                 \
  } while (0)

#define CHECK_OK(expr) CHECK((expr) == DARE_OK)

static void test_status_and_errors(void) {
  dare_catalog* cat = NULL;
  CHECK(dare_version() != NULL && strlen(dare_version()) > 0);
  CHECK(strcmp(dare_status_name(DARE_ERR_INVALID_ARGUMENT), "invalid-argument") == 0);
  CHECK(dare_catalog_zipf(0, 0.8, NULL, 0, &cat) == DARE_ERR_INVALID_ARGUMENT);
  CHECK(cat == NULL);
  CHECK(strlen(dare_last_error()) > 0);
  CHECK(dare_catalog_zipf(3, 0.8, NULL, 0, NULL) == DARE_ERR_INVALID_ARGUMENT);
  dare_catalog_free(NULL);
}

static void test_example_one(void) {
  const uint32_t req[] = {1, 5, 3, 1, 4, 1, 2, 5, 1};
  const uint32_t init[] = {1, 2, 3};
  const double square[] = {0.0, 1.0};
  dare_trace* trace = NULL;
  dare_damage* f = NULL;
  dare_offline_result* fif = NULL;
  dare_offline_result* dare = NULL;
  dare_offline_summary s;
  dare_write_record w;
  size_t i;
  size_t needed = 0;
  char small[4];
  char* csv;
  uint64_t min_misses = 0;
  double min_damage = 0.0;

  CHECK_OK(dare_trace_create(5, req, 9, init, 3, &trace));
  CHECK_OK(dare_damage_create(square, 2, &f));
  CHECK_OK(dare_offline_run(trace, 3, DARE_OFFLINE_FIF, f, NULL, &fif));
  CHECK_OK(dare_offline_result_summary(fif, &s));
  CHECK(s.misses == 3 && s.evictions == 3);
  CHECK(fabs(s.damage - 206.0) < 1e-9);

  CHECK_OK(dare_offline_run(trace, 3, DARE_OFFLINE_DARE, f, NULL, &dare));
  CHECK_OK(dare_offline_result_summary(dare, &s));
  CHECK(fabs(s.damage - 168.0) < 1e-9);
  for (i = 0; i < s.writes; ++i) {
    CHECK_OK(dare_offline_result_write(dare, i, &w));
    if (w.file == 3) CHECK(w.retention == 4);
    if (w.file == 4) CHECK(w.retention == 1);
  }
  CHECK(dare_offline_result_write(dare, s.writes, &w) == DARE_ERR_INVALID_ARGUMENT);

  /* Two-call text convention. */
  CHECK_OK(dare_offline_result_csv(dare, NULL, 0, &needed));
  CHECK(needed > 1);
  CHECK(dare_offline_result_csv(dare, small, sizeof small, &needed) == DARE_ERR_BUFFER_TOO_SMALL);
  csv = (char*)malloc(needed);
  CHECK_OK(dare_offline_result_csv(dare, csv, needed, &needed));
  CHECK(strlen(csv) + 1 == needed);
  CHECK(strstr(csv, "summary") != NULL);
  free(csv);

  CHECK_OK(dare_offline_brute_force(trace, 3, f, &min_misses, &min_damage));
  CHECK(min_misses == 3 && fabs(min_damage - 168.0) < 1e-9);

  dare_offline_result_free(fif);
  fif = NULL;
  CHECK(dare_offline_run(trace, 3, DARE_OFFLINE_RND, f, NULL, &fif) == DARE_ERR_INVALID_ARGUMENT);
  CHECK(fif == NULL);
  dare_offline_result_free(dare);
  dare_damage_free(f);
  dare_trace_free(trace);
}

static void test_trace_text(void) {
  dare_trace* t = NULL;
  uint32_t r = 0;
  CHECK_OK(dare_trace_parse("3 2 0\n2\n1\n1\n", &t));
  CHECK(dare_trace_horizon(t) == 3);
  CHECK(dare_trace_files(t) == 2);
  CHECK_OK(dare_trace_request(t, 1, &r));
  CHECK(r == 2);
  CHECK(dare_trace_request(t, 4, &r) == DARE_ERR_INVALID_ARGUMENT);
  dare_trace_free(t);
}

static void test_retention(void) {
  const double linear[] = {1.0};
  const double one[] = {1.0};
  dare_catalog* cat = NULL;
  dare_damage* f = NULL;
  dare_retention_solution* sol = NULL;
  double q = 0, mu = 0;
  CHECK_OK(dare_catalog_from_rates(one, 1, NULL, 0, &cat));
  CHECK_OK(dare_damage_create(linear, 1, &f));
  CHECK_OK(dare_retention_solve(cat, f, 0.5, 0.0, &sol));
  CHECK_OK(dare_retention_solution_file(sol, 1, &q, &mu));
  CHECK(fabs(q - 0.5) < 1e-8 && fabs(mu - 1.0) < 1e-7);
  CHECK(fabs(dare_retention_solution_objective(sol) - 0.5) < 1e-7);
  CHECK(dare_retention_solution_kkt_residual(sol) < 1e-6);
  CHECK(dare_retention_solve(cat, f, 0.0, 0.0, &sol) == DARE_ERR_INFEASIBLE);
  dare_retention_solution_free(sol);
  dare_damage_free(f);
  dare_catalog_free(cat);
}

static void test_online(void) {
  const double square[] = {0.0, 1.0};
  const double rate1[] = {1.0};
  dare_catalog* cat = NULL;
  dare_damage* f = NULL;
  dare_sim_report* rep = NULL;
  dare_online_config cfg;
  dare_sim_summary s;
  size_t needed = 0;

  CHECK_OK(dare_catalog_zipf(1, 0.0, NULL, 0, &cat));
  CHECK_OK(dare_damage_create(square, 2, &f));
  dare_online_config_init(&cfg);
  cfg.mu = rate1;
  cfg.n_mu = 1;
  cfg.events = 100000;
  cfg.seed = 1;
  CHECK_OK(dare_online_run(cat, f, &cfg, &rep));
  CHECK_OK(dare_sim_report_summary(rep, &s));
  CHECK(fabs(s.miss_fraction - 0.5) <= 0.01);
  CHECK_OK(dare_sim_report_json(rep, NULL, 0, &needed));
  CHECK(needed > 10);
  dare_sim_report_free(rep);

  cfg.mu = NULL;
  cfg.tau = -1.0;
  CHECK(dare_online_run(cat, f, &cfg, &rep) == DARE_ERR_INVALID_ARGUMENT);
  dare_damage_free(f);
  dare_catalog_free(cat);
}

static void test_mdp(void) {
  const double lambda[] = {3.0, 2.0, 1.0};
  const double mu[] = {1.0, 1.0, 1.0};
  const double cost[] = {1.0, 1.0, 1.0};
  dare_mdp_result* r = NULL;
  CHECK_OK(dare_mdp_oracle_run(lambda, mu, cost, 3, 2, 6, &r));
  CHECK(dare_mdp_result_decisions(r) == 18);
  CHECK(dare_mdp_result_all_agree(r) == 1);
  dare_mdp_result_free(r);
  CHECK(dare_mdp_oracle_run(lambda, mu, cost, 3, 3, 6, &r) == DARE_ERR_TOO_LARGE);
}

static void test_experiment(void) {
  dare_experiment* e = NULL;
  dare_table* t = NULL;
  size_t needed = 0;
  CHECK(dare_experiment_create("no-such-experiment", &e) == DARE_ERR_INVALID_ARGUMENT);
  CHECK_OK(dare_experiment_create("delta-sweep", &e));
  CHECK(dare_experiment_set(e, "colour", "red") == DARE_ERR_INVALID_ARGUMENT);
  CHECK(dare_experiment_set(e, "files", "ten") == DARE_ERR_INVALID_ARGUMENT);
  CHECK_OK(dare_experiment_set(e, "files", "20"));
  CHECK_OK(dare_experiment_set(e, "epsilons", "0.5,0.9"));
  CHECK_OK(dare_experiment_run(e, 0, &t));
  CHECK_OK(dare_table_csv(t, NULL, 0, &needed));
  CHECK(needed > 1);
  dare_table_free(t);
  dare_experiment_free(e);
}

int main(void) {
  test_status_and_errors();
  test_example_one();
  test_trace_text();
  test_retention();
  test_online();
  test_mdp();
  test_experiment();
  printf("capi: %d checks, %d failed\n", checks, failures);
  return failures == 0 ? 0 : 1;
}
