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

#include "dare/dare.h"

#include <charconv>
#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "experiments.hpp"
#include "mdp_oracle.hpp"
#include "model.hpp"
#include "offline.hpp"
#include "offline_oracle.hpp"
#include "online.hpp"
#include "retention.hpp"
#include "workload.hpp"

struct dare_catalog {
  dare::Catalog value;
};
struct dare_damage {
  dare::DamagePolynomial value;
};
struct dare_trace {
  dare::RequestTrace value;
};
struct dare_offline_result {
  dare::OfflineResult value;
  dare::DamagePolynomial damage;
};
struct dare_retention_solution {
  dare::RetentionSolution value;
  dare::RetentionProblem problem;
};
struct dare_sim_report {
  dare::SimReport value;
};
struct dare_sweep_result {
  dare::SweepResult value;
  dare::EvictionRule rule;
};
struct dare_mdp_result {
  dare::MdpOracleResult value;
};
struct dare_experiment {
  dare::ExperimentSpec value;
};
struct dare_table {
  std::string csv;
};

namespace {

thread_local std::string last_error;

dare_status to_status(dare::ErrorCode code) {
  switch (code) {
    case dare::ErrorCode::InvalidArgument: return DARE_ERR_INVALID_ARGUMENT;
    case dare::ErrorCode::Infeasible: return DARE_ERR_INFEASIBLE;
    case dare::ErrorCode::Convergence: return DARE_ERR_CONVERGENCE;
    case dare::ErrorCode::TooLarge: return DARE_ERR_TOO_LARGE;
    case dare::ErrorCode::Domain: return DARE_ERR_DOMAIN;
    case dare::ErrorCode::Io: return DARE_ERR_IO;
  }
  return DARE_ERR_INTERNAL;
}

dare_status set_error(dare_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <typename F>
dare_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return DARE_OK;
  } catch (const dare::Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(DARE_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(DARE_ERR_INTERNAL, e.what());
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) dare::fail(dare::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

dare_status copy_text(const std::string& text, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (buf == nullptr) {
    if (needed == nullptr) return set_error(DARE_ERR_INVALID_ARGUMENT, "buf and needed are null");
    last_error.clear();
    return DARE_OK;
  }
  if (cap < text.size() + 1) {
    return set_error(DARE_ERR_BUFFER_TOO_SMALL,
                     "buffer holds " + std::to_string(cap) + " bytes, need " +
                         std::to_string(text.size() + 1));
  }
  std::memcpy(buf, text.data(), text.size());
  buf[text.size()] = '\0';
  last_error.clear();
  return DARE_OK;
}

template <typename T>
std::span<const T> span_of(const T* p, size_t n) {
  if (n > 0) need(p, "array");
  return n ? std::span<const T>(p, n) : std::span<const T>();
}

std::optional<std::uint32_t> capacity_of(uint32_t capacity) {
  return capacity == 0 ? std::nullopt : std::optional<std::uint32_t>(capacity);
}

void check_file(std::uint32_t m, std::uint32_t size) {
  if (m < 1 || m > size) {
    dare::fail(dare::ErrorCode::InvalidArgument,
               "file " + std::to_string(m) + " outside 1.." + std::to_string(size));
  }
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  for (char c : value + ",") {
    if (c == ',') {
      const auto b = item.find_first_not_of(" \t");
      const auto e = item.find_last_not_of(" \t");
      if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
      item.clear();
    } else {
      item.push_back(c);
    }
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const char* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end) {
    dare::fail(dare::ErrorCode::InvalidArgument,
               "experiment." + key + ": cannot parse '" + text + "'");
  }
  return v;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& value) {
  std::vector<T> out;
  for (const auto& item : split_list(value)) out.push_back(parse_number<T>(key, item));
  return out;
}

}  // namespace

extern "C" {

const char* dare_version(void) { return "0.1.0"; }

const char* dare_status_name(dare_status status) {
  switch (status) {
    case DARE_OK: return "ok";
    case DARE_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case DARE_ERR_INFEASIBLE: return "infeasible";
    case DARE_ERR_CONVERGENCE: return "convergence";
    case DARE_ERR_TOO_LARGE: return "too-large";
    case DARE_ERR_DOMAIN: return "domain";
    case DARE_ERR_IO: return "io";
    case DARE_ERR_BUFFER_TOO_SMALL: return "buffer-too-small";
    case DARE_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* dare_last_error(void) { return last_error.c_str(); }

// ---- catalog ----

dare_status dare_catalog_zipf(uint32_t files, double alpha, const double* delays, size_t n_delays,
                              dare_catalog** out) {
  return guarded([&] {
    need(out, "out");
    *out = new dare_catalog{dare::Catalog::zipf(files, alpha, span_of(delays, n_delays))};
  });
}

dare_status dare_catalog_from_rates(const double* rates, size_t n_rates, const double* delays,
                                    size_t n_delays, dare_catalog** out) {
  return guarded([&] {
    need(out, "out");
    *out = new dare_catalog{
        dare::Catalog::from_rates(span_of(rates, n_rates), span_of(delays, n_delays))};
  });
}

dare_status dare_catalog_normalized(const dare_catalog* catalog, dare_catalog** out) {
  return guarded([&] {
    need(catalog, "catalog");
    need(out, "out");
    *out = new dare_catalog{catalog->value.normalized()};
  });
}

void dare_catalog_free(dare_catalog* catalog) { delete catalog; }

uint32_t dare_catalog_size(const dare_catalog* catalog) {
  return catalog ? catalog->value.size() : 0;
}

dare_status dare_catalog_rate(const dare_catalog* catalog, uint32_t m, double* out) {
  return guarded([&] {
    need(catalog, "catalog");
    need(out, "out");
    check_file(m, catalog->value.size());
    *out = catalog->value.rate(m);
  });
}

dare_status dare_catalog_probability(const dare_catalog* catalog, uint32_t m, double* out) {
  return guarded([&] {
    need(catalog, "catalog");
    need(out, "out");
    check_file(m, catalog->value.size());
    *out = catalog->value.probability(m);
  });
}

dare_status dare_catalog_delay(const dare_catalog* catalog, uint32_t m, double* out) {
  return guarded([&] {
    need(catalog, "catalog");
    need(out, "out");
    check_file(m, catalog->value.size());
    *out = catalog->value.delay(m);
  });
}

// ---- damage ----

dare_status dare_damage_create(const double* coefficients, size_t n, dare_damage** out) {
  return guarded([&] {
    need(out, "out");
    const auto c = span_of(coefficients, n);
    *out = new dare_damage{dare::DamagePolynomial(std::vector<double>(c.begin(), c.end()))};
  });
}

void dare_damage_free(dare_damage* damage) { delete damage; }

dare_status dare_damage_eval(const dare_damage* damage, double z, double* out) {
  return guarded([&] {
    need(damage, "damage");
    need(out, "out");
    *out = damage->value.eval(z);
  });
}

dare_status dare_damage_expected_exponential(const dare_damage* damage, double mu, double* out) {
  return guarded([&] {
    need(damage, "damage");
    need(out, "out");
    *out = damage->value.expected_exponential(mu);
  });
}

// ---- traces ----

dare_status dare_trace_create(uint32_t files, const uint32_t* requests, size_t slots,
                              const uint32_t* initial_cache, size_t n_initial, dare_trace** out) {
  return guarded([&] {
    need(out, "out");
    const auto r = span_of(requests, slots);
    const auto i = span_of(initial_cache, n_initial);
    *out = new dare_trace{dare::make_trace(files, {r.begin(), r.end()}, {i.begin(), i.end()})};
  });
}

dare_status dare_trace_generate(const dare_catalog* catalog, uint64_t slots, uint64_t seed,
                                dare_trace** out) {
  return guarded([&] {
    need(catalog, "catalog");
    need(out, "out");
    *out = new dare_trace{dare::generate_trace(catalog->value, slots, seed)};
  });
}

dare_status dare_trace_parse(const char* text, dare_trace** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = new dare_trace{dare::parse_trace(text)};
  });
}

dare_status dare_trace_format(const dare_trace* trace, char* buf, size_t cap, size_t* needed) {
  if (trace == nullptr) return set_error(DARE_ERR_INVALID_ARGUMENT, "trace is null");
  return copy_text(dare::format_trace(trace->value), buf, cap, needed);
}

dare_status dare_trace_set_initial_cache(dare_trace* trace, const uint32_t* files, size_t n) {
  return guarded([&] {
    need(trace, "trace");
    const auto i = span_of(files, n);
    const auto& t = trace->value;
    trace->value = dare::make_trace(t.files, t.requests, {i.begin(), i.end()}, t.seed);
  });
}

void dare_trace_free(dare_trace* trace) { delete trace; }

uint64_t dare_trace_horizon(const dare_trace* trace) { return trace ? trace->value.horizon() : 0; }

uint32_t dare_trace_files(const dare_trace* trace) { return trace ? trace->value.files : 0; }

dare_status dare_trace_request(const dare_trace* trace, uint64_t slot, uint32_t* out) {
  return guarded([&] {
    need(trace, "trace");
    need(out, "out");
    if (slot < 1 || slot > trace->value.horizon()) {
      dare::fail(dare::ErrorCode::InvalidArgument, "slot " + std::to_string(slot) +
                                                       " outside 1.." +
                                                       std::to_string(trace->value.horizon()));
    }
    *out = trace->value.at(slot);
  });
}

// ---- offline ----

dare_status dare_offline_policy_parse(const char* name, dare_offline_policy* out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    *out = static_cast<dare_offline_policy>(dare::parse_offline_policy(name));
  });
}

const char* dare_offline_policy_name(dare_offline_policy policy) {
  if (policy < DARE_OFFLINE_LRU || policy > DARE_OFFLINE_LRU_STAR) return "unknown";
  return dare::offline_policy_name(static_cast<dare::OfflinePolicy>(policy));
}

dare_status dare_offline_run(const dare_trace* trace, uint32_t capacity,
                             dare_offline_policy policy, const dare_damage* damage,
                             const uint64_t* seed, dare_offline_result** out) {
  return guarded([&] {
    need(trace, "trace");
    need(damage, "damage");
    need(out, "out");
    if (policy < DARE_OFFLINE_LRU || policy > DARE_OFFLINE_LRU_STAR) {
      dare::fail(dare::ErrorCode::InvalidArgument, "unknown offline policy");
    }
    const auto p = static_cast<dare::OfflinePolicy>(policy);
    const auto s = seed ? std::optional<std::uint64_t>(*seed) : std::nullopt;
    dare::OfflineResult r =
        dare::is_star_policy(p)
            ? dare::simulate_offline_star(trace->value, capacity, p, damage->value, s)
            : dare::simulate_offline(trace->value, capacity, p, damage->value, s);
    *out = new dare_offline_result{std::move(r), damage->value};
  });
}

void dare_offline_result_free(dare_offline_result* result) { delete result; }

dare_status dare_offline_result_summary(const dare_offline_result* result,
                                        dare_offline_summary* out) {
  return guarded([&] {
    need(result, "result");
    need(out, "out");
    const auto& r = result->value;
    *out = {r.horizon, r.misses, r.writes.size(), r.evictions.size(), r.damage, r.miss_fraction};
  });
}

dare_status dare_offline_result_write(const dare_offline_result* result, size_t index,
                                      dare_write_record* out) {
  return guarded([&] {
    need(result, "result");
    need(out, "out");
    const auto& w = result->value.writes;
    if (index >= w.size()) dare::fail(dare::ErrorCode::InvalidArgument, "write index out of range");
    const auto& rec = w[index];
    *out = {rec.file, rec.write_slot, rec.retention, rec.evicted_slot.has_value() ? 1 : 0,
            rec.evicted_slot.value_or(0)};
  });
}

dare_status dare_offline_result_eviction(const dare_offline_result* result, size_t index,
                                         uint64_t* slot, uint32_t* file) {
  return guarded([&] {
    need(result, "result");
    const auto& e = result->value.evictions;
    if (index >= e.size()) {
      dare::fail(dare::ErrorCode::InvalidArgument, "eviction index out of range");
    }
    if (slot) *slot = e[index].slot;
    if (file) *file = e[index].file;
  });
}

dare_status dare_offline_result_csv(const dare_offline_result* result, char* buf, size_t cap,
                                    size_t* needed) {
  if (result == nullptr) return set_error(DARE_ERR_INVALID_ARGUMENT, "result is null");
  std::string text;
  const dare_status s =
      guarded([&] { text = dare::offline_result_csv(result->value, result->damage); });
  return s == DARE_OK ? copy_text(text, buf, cap, needed) : s;
}

dare_status dare_offline_brute_force(const dare_trace* trace, uint32_t capacity,
                                     const dare_damage* damage, uint64_t* min_misses,
                                     double* min_damage) {
  return guarded([&] {
    need(trace, "trace");
    need(damage, "damage");
    const auto r = dare::brute_force_min_damage(trace->value, capacity, damage->value);
    if (min_misses) *min_misses = r.min_misses;
    if (min_damage) *min_damage = r.min_damage;
  });
}

// ---- retention ----

dare_status dare_retention_objective(const dare_catalog* catalog, const dare_damage* damage,
                                     const double* q, size_t n, double* out) {
  return guarded([&] {
    need(catalog, "catalog");
    need(damage, "damage");
    need(out, "out");
    const dare::RetentionProblem problem{catalog->value, damage->value, 1.0};
    *out = dare::retention_objective(problem, span_of(q, n));
  });
}

dare_status dare_retention_delay(const dare_catalog* catalog, const double* q, size_t n,
                                 double* out) {
  return guarded([&] {
    need(catalog, "catalog");
    need(out, "out");
    const dare::RetentionProblem problem{catalog->value, dare::DamagePolynomial({1.0}), 1.0};
    *out = dare::retention_delay(problem, span_of(q, n));
  });
}

dare_status dare_retention_solve(const dare_catalog* catalog, const dare_damage* damage,
                                 double delay_budget, double tolerance,
                                 dare_retention_solution** out) {
  return guarded([&] {
    need(catalog, "catalog");
    need(damage, "damage");
    need(out, "out");
    dare::RetentionProblem problem{catalog->value, damage->value, delay_budget};
    auto sol = tolerance > 0 ? dare::solve_retention(problem, tolerance)
                             : dare::solve_retention(problem);
    *out = new dare_retention_solution{std::move(sol), std::move(problem)};
  });
}

void dare_retention_solution_free(dare_retention_solution* solution) { delete solution; }

uint32_t dare_retention_solution_size(const dare_retention_solution* solution) {
  return solution ? static_cast<uint32_t>(solution->value.q.size()) : 0;
}

dare_status dare_retention_solution_file(const dare_retention_solution* solution, uint32_t m,
                                         double* q, double* mu) {
  return guarded([&] {
    need(solution, "solution");
    check_file(m, static_cast<std::uint32_t>(solution->value.q.size()));
    if (q) *q = solution->value.q[m - 1];
    if (mu) *mu = solution->value.mu[m - 1];
  });
}

double dare_retention_solution_objective(const dare_retention_solution* solution) {
  return solution ? solution->value.objective : std::numeric_limits<double>::quiet_NaN();
}

double dare_retention_solution_delay(const dare_retention_solution* solution) {
  return solution ? solution->value.achieved_delay : std::numeric_limits<double>::quiet_NaN();
}

double dare_retention_solution_theta(const dare_retention_solution* solution) {
  return solution ? solution->value.theta : std::numeric_limits<double>::quiet_NaN();
}

double dare_retention_solution_kkt_residual(const dare_retention_solution* solution) {
  return solution ? solution->value.kkt_residual() : std::numeric_limits<double>::quiet_NaN();
}

dare_status dare_retention_solution_csv(const dare_retention_solution* solution, char* buf,
                                        size_t cap, size_t* needed) {
  if (solution == nullptr) return set_error(DARE_ERR_INVALID_ARGUMENT, "solution is null");
  std::string text;
  const dare_status s = guarded(
      [&] { text = dare::retention_solution_csv(solution->value, solution->problem); });
  return s == DARE_OK ? copy_text(text, buf, cap, needed) : s;
}

// ---- online ----

dare_status dare_eviction_rule_parse(const char* name, dare_eviction_rule* out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    *out = static_cast<dare_eviction_rule>(dare::parse_eviction_rule(name));
  });
}

const char* dare_eviction_rule_name(dare_eviction_rule rule) {
  if (rule < DARE_RULE_DARE_DELTA || rule > DARE_RULE_RND) return "unknown";
  return dare::eviction_rule_name(static_cast<dare::EvictionRule>(rule));
}

dare_status dare_cost_mode_parse(const char* name, dare_cost_mode* out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    *out = static_cast<dare_cost_mode>(dare::parse_cost_mode(name));
  });
}

const char* dare_cost_mode_name(dare_cost_mode mode) {
  if (mode < DARE_COST_DELAY_PLUS_DAMAGE || mode > DARE_COST_DELAY_ONLY) return "unknown";
  return dare::cost_mode_name(static_cast<dare::CostMode>(mode));
}

void dare_online_config_init(dare_online_config* config) {
  if (config == nullptr) return;
  *config = dare_online_config{};
  config->rule = DARE_RULE_DARE_DELTA;
  config->tau = 1.0;
  config->cost_mode = DARE_COST_DELAY_PLUS_DAMAGE;
}

dare_status dare_online_run(const dare_catalog* catalog, const dare_damage* damage,
                            const dare_online_config* config, dare_sim_report** out) {
  return guarded([&] {
    need(catalog, "catalog");
    need(damage, "damage");
    need(config, "config");
    need(out, "out");
    if (config->rule < DARE_RULE_DARE_DELTA || config->rule > DARE_RULE_RND) {
      dare::fail(dare::ErrorCode::InvalidArgument, "unknown eviction rule");
    }
    if (config->cost_mode < DARE_COST_DELAY_PLUS_DAMAGE ||
        config->cost_mode > DARE_COST_DELAY_ONLY) {
      dare::fail(dare::ErrorCode::InvalidArgument, "unknown cost mode");
    }
    dare::OnlineConfig c;
    c.capacity = capacity_of(config->capacity);
    c.rule = static_cast<dare::EvictionRule>(config->rule);
    if (config->mu != nullptr) {
      const auto mu = span_of(config->mu, config->n_mu);
      c.retention = dare::StochasticRetention{{mu.begin(), mu.end()}};
    } else {
      c.retention = dare::DeterministicRetention{config->tau};
    }
    c.cost.mode = static_cast<dare::CostMode>(config->cost_mode);
    c.events = config->events;
    c.seed = config->seed;
    c.record_events = config->record_events != 0;
    *out = new dare_sim_report{dare::run_online(catalog->value, damage->value, c)};
  });
}

dare_status dare_pipeline_run(const dare_catalog* catalog, const dare_damage* damage,
                              uint32_t capacity, double delay_budget, dare_cost_mode cost_mode,
                              uint64_t events, uint64_t seed, dare_retention_solution** solution,
                              dare_sim_report** out) {
  return guarded([&] {
    need(catalog, "catalog");
    need(damage, "damage");
    need(out, "out");
    if (cost_mode < DARE_COST_DELAY_PLUS_DAMAGE || cost_mode > DARE_COST_DELAY_ONLY) {
      dare::fail(dare::ErrorCode::InvalidArgument, "unknown cost mode");
    }
    auto r = dare::dare_delta_pipeline(catalog->value, damage->value, capacity_of(capacity),
                                       delay_budget, static_cast<dare::CostMode>(cost_mode),
                                       events, seed);
    if (solution) {
      *solution = new dare_retention_solution{
          std::move(r.solution),
          dare::RetentionProblem{catalog->value, damage->value, delay_budget}};
    }
    *out = new dare_sim_report{std::move(r.report)};
  });
}

void dare_sim_report_free(dare_sim_report* report) { delete report; }

dare_status dare_sim_report_summary(const dare_sim_report* report, dare_sim_summary* out) {
  return guarded([&] {
    need(report, "report");
    need(out, "out");
    const auto& r = report->value;
    *out = {r.total_damage, r.requests,      r.misses, r.writes,  r.evictions,
            r.declined,     r.miss_fraction, r.delay,  r.end_time};
  });
}

dare_status dare_sim_report_file(const dare_sim_report* report, uint32_t m, uint64_t* requests,
                                 uint64_t* misses, uint64_t* writes, double* damage) {
  return guarded([&] {
    need(report, "report");
    check_file(m, static_cast<std::uint32_t>(report->value.per_file.size()));
    const auto& s = report->value.per_file[m - 1];
    if (requests) *requests = s.requests;
    if (misses) *misses = s.misses;
    if (writes) *writes = s.writes;
    if (damage) *damage = s.damage;
  });
}

dare_status dare_sim_report_set_config_echo(dare_sim_report* report, const char* text) {
  return guarded([&] {
    need(report, "report");
    report->value.config_echo = text ? text : "";
  });
}

dare_status dare_sim_report_csv(const dare_sim_report* report, char* buf, size_t cap,
                                size_t* needed) {
  if (report == nullptr) return set_error(DARE_ERR_INVALID_ARGUMENT, "report is null");
  return copy_text(dare::sim_report_csv(report->value), buf, cap, needed);
}

dare_status dare_sim_report_json(const dare_sim_report* report, char* buf, size_t cap,
                                 size_t* needed) {
  if (report == nullptr) return set_error(DARE_ERR_INVALID_ARGUMENT, "report is null");
  return copy_text(dare::sim_report_json(report->value), buf, cap, needed);
}

dare_status dare_sim_report_event_log_csv(const dare_sim_report* report, char* buf, size_t cap,
                                          size_t* needed) {
  if (report == nullptr) return set_error(DARE_ERR_INVALID_ARGUMENT, "report is null");
  return copy_text(dare::event_log_csv(report->value), buf, cap, needed);
}

dare_status dare_sweep_run(const dare_catalog* catalog, const dare_damage* damage,
                           uint32_t capacity, dare_eviction_rule rule, const double* taus,
                           size_t n_taus, uint64_t events, const uint64_t* seeds, size_t n_seeds,
                           const double* delay_budget, dare_sweep_result** out) {
  return guarded([&] {
    need(catalog, "catalog");
    need(damage, "damage");
    need(out, "out");
    if (rule < DARE_RULE_DARE_DELTA || rule > DARE_RULE_RND) {
      dare::fail(dare::ErrorCode::InvalidArgument, "unknown eviction rule");
    }
    const auto r = static_cast<dare::EvictionRule>(rule);
    const auto budget = delay_budget ? std::optional<double>(*delay_budget) : std::nullopt;
    *out = new dare_sweep_result{
        dare::sweep_deterministic_retention(catalog->value, damage->value, capacity_of(capacity),
                                            r, span_of(taus, n_taus), events,
                                            span_of(seeds, n_seeds), budget),
        r};
  });
}

void dare_sweep_result_free(dare_sweep_result* result) { delete result; }

dare_status dare_sweep_result_best(const dare_sweep_result* result, double* tau, double* damage,
                                   double* miss_fraction) {
  return guarded([&] {
    need(result, "result");
    if (tau) *tau = result->value.best_tau;
    if (damage) *damage = result->value.best_damage;
    if (miss_fraction) *miss_fraction = result->value.best_miss_fraction;
  });
}

dare_status dare_sweep_result_csv(const dare_sweep_result* result, char* buf, size_t cap,
                                  size_t* needed) {
  if (result == nullptr) return set_error(DARE_ERR_INVALID_ARGUMENT, "result is null");
  return copy_text(dare::sweep_csv(result->value, result->rule), buf, cap, needed);
}

// ---- MDP oracle ----

dare_status dare_mdp_oracle_run(const double* lambda, const double* mu, const double* cost,
                                uint32_t files, uint32_t capacity, uint32_t horizon,
                                dare_mdp_result** out) {
  return guarded([&] {
    need(out, "out");
    const auto chain =
        dare::UniformizedChain::build(span_of(lambda, files), span_of(mu, files), capacity);
    *out = new dare_mdp_result{dare::value_iteration_oracle(chain, span_of(cost, files), horizon)};
  });
}

void dare_mdp_result_free(dare_mdp_result* result) { delete result; }

size_t dare_mdp_result_decisions(const dare_mdp_result* result) {
  return result ? result->value.decisions.size() : 0;
}

int dare_mdp_result_all_agree(const dare_mdp_result* result) {
  return result && result->value.all_agree() ? 1 : 0;
}

dare_status dare_mdp_result_csv(const dare_mdp_result* result, char* buf, size_t cap,
                                size_t* needed) {
  if (result == nullptr) return set_error(DARE_ERR_INVALID_ARGUMENT, "result is null");
  return copy_text(dare::mdp_oracle_csv(result->value), buf, cap, needed);
}

// ---- experiments ----

dare_status dare_experiment_create(const char* name, dare_experiment** out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    *out = new dare_experiment{dare::ExperimentSpec::defaults(dare::parse_experiment(name))};
  });
}

void dare_experiment_free(dare_experiment* experiment) { delete experiment; }

dare_status dare_experiment_set(dare_experiment* experiment, const char* key, const char* value) {
  return guarded([&] {
    need(experiment, "experiment");
    need(key, "key");
    need(value, "value");
    auto& s = experiment->value;
    const std::string k = key;
    const std::string v = value;
    if (k == "capacities") s.capacities = parse_list<std::uint32_t>(k, v);
    else if (k == "alphas") s.alphas = parse_list<double>(k, v);
    else if (k == "files") s.file_counts = parse_list<std::uint32_t>(k, v);
    else if (k == "slots") s.slots = parse_number<std::uint64_t>(k, v);
    else if (k == "events") s.events = parse_number<std::uint64_t>(k, v);
    else if (k == "epsilons") s.epsilons = parse_list<double>(k, v);
    else if (k == "degrees") s.degrees = parse_list<unsigned>(k, v);
    else if (k == "delta") s.delta = parse_number<double>(k, v);
    else if (k == "tau_grid") s.tau_grid = parse_list<double>(k, v);
    else if (k == "policies") s.policies = split_list(v);
    else if (k == "replications") s.replications = parse_number<std::uint32_t>(k, v);
    else if (k == "seed") s.seed = parse_number<std::uint64_t>(k, v);
    else if (k == "cost_mode") s.cost_mode = dare::parse_cost_mode(v);
    else if (k == "damage") s.damage = parse_list<double>(k, v);
    else if (k == "threads") s.threads = parse_number<unsigned>(k, v);
    else dare::fail(dare::ErrorCode::InvalidArgument, "experiment: unknown key '" + k + "'");
  });
}

dare_status dare_experiment_run(const dare_experiment* experiment, int plot_data,
                                dare_table** out) {
  return guarded([&] {
    need(experiment, "experiment");
    need(out, "out");
    *out = new dare_table{dare::run_experiment_csv(experiment->value, plot_data != 0)};
  });
}

void dare_table_free(dare_table* table) { delete table; }

dare_status dare_table_csv(const dare_table* table, char* buf, size_t cap, size_t* needed) {
  if (table == nullptr) return set_error(DARE_ERR_INVALID_ARGUMENT, "table is null");
  return copy_text(table->csv, buf, cap, needed);
}

}  // extern "C"
