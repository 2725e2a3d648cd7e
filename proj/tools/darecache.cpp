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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "dare/dare.h"

namespace {

using darecli::Config;
using darecli::ConfigError;

class ApiError : public std::runtime_error {
 public:
  ApiError(dare_status status, const std::string& message)
      : std::runtime_error(message), status_(status) {}
  dare_status status() const { return status_; }

 private:
  dare_status status_;
};

void check(dare_status status) {
  if (status != DARE_OK) throw ApiError(status, dare_last_error());
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
template <typename T, void (*Free)(T*)>
using Handle = std::unique_ptr<T, Deleter<T, Free>>;

using CatalogH = Handle<dare_catalog, dare_catalog_free>;
using DamageH = Handle<dare_damage, dare_damage_free>;
using TraceH = Handle<dare_trace, dare_trace_free>;
using OfflineH = Handle<dare_offline_result, dare_offline_result_free>;
using SolutionH = Handle<dare_retention_solution, dare_retention_solution_free>;
using ReportH = Handle<dare_sim_report, dare_sim_report_free>;
using SweepH = Handle<dare_sweep_result, dare_sweep_result_free>;
using MdpH = Handle<dare_mdp_result, dare_mdp_result_free>;
using ExperimentH = Handle<dare_experiment, dare_experiment_free>;
using TableH = Handle<dare_table, dare_table_free>;

// Two-call text retrieval.
template <typename Fn>
std::string fetch(Fn fn) {
  size_t needed = 0;
  check(fn(nullptr, 0, &needed));
  std::string text(needed, '\0');
  check(fn(text.data(), text.size(), &needed));
  text.resize(needed - 1);
  return text;
}

std::string read_all(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ApiError(DARE_ERR_IO, "cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void emit(const Config& cfg, const std::string& command, const std::string& body,
          bool comments = true) {
  std::string text;
  if (comments) text = "# darecache " + command + "\n" + cfg.echo();
  text += body;
  const std::string path = cfg.str("output.path");
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ApiError(DARE_ERR_IO, "cannot write '" + path + "'");
  out << text;
  if (!out) throw ApiError(DARE_ERR_IO, "write failed for '" + path + "'");
}

std::uint64_t require_seed(const Config& cfg, const std::string& command) {
  if (!cfg.raw("workload.seed")) {
    throw ConfigError("workload.seed", command + " is stochastic: pass --seed or set workload.seed");
  }
  return cfg.u64("workload.seed");
}

CatalogH make_catalog(const Config& cfg) {
  const std::vector<double> delays = cfg.reals("catalog.delays");
  dare_catalog* raw = nullptr;
  if (cfg.has("catalog.rates")) {
    const std::vector<double> rates = cfg.reals("catalog.rates");
    check(dare_catalog_from_rates(rates.data(), rates.size(), delays.data(), delays.size(), &raw));
  } else {
    check(dare_catalog_zipf(cfg.u32("catalog.files"), cfg.real("catalog.alpha"), delays.data(),
                            delays.size(), &raw));
  }
  CatalogH catalog(raw);
  if (cfg.flag("catalog.normalize")) {
    check(dare_catalog_normalized(catalog.get(), &raw));
    catalog.reset(raw);
  }
  return catalog;
}

DamageH make_damage(const Config& cfg) {
  const std::vector<double> a = cfg.reals("damage.coefficients");
  dare_damage* raw = nullptr;
  check(dare_damage_create(a.data(), a.size(), &raw));
  return DamageH(raw);
}

dare_cost_mode cost_mode(const Config& cfg) {
  dare_cost_mode mode{};
  check(dare_cost_mode_parse(cfg.str("policy.cost_mode").c_str(), &mode));
  return mode;
}

std::uint32_t finite_capacity(const Config& cfg, const std::string& command) {
  const std::uint32_t b = cfg.capacity("cache.capacity");
  if (b == 0) throw ConfigError("cache.capacity", command + " needs a finite cache.capacity");
  return b;
}

// Literal trace, trace file, or a fresh IRM trace, in that order.
TraceH load_trace(const Config& cfg, const CatalogH& catalog, const std::string& command) {
  dare_trace* raw = nullptr;
  if (cfg.has("workload.trace")) {
    const std::vector<std::uint32_t> ids = cfg.ids("workload.trace");
    check(dare_trace_create(dare_catalog_size(catalog.get()), ids.data(), ids.size(), nullptr, 0,
                            &raw));
  } else if (cfg.has("workload.trace_file")) {
    const std::string text = read_all(cfg.str("workload.trace_file"));
    check(dare_trace_parse(text.c_str(), &raw));
  } else {
    check(dare_trace_generate(catalog.get(), cfg.u64("workload.slots"), require_seed(cfg, command),
                              &raw));
  }
  TraceH trace(raw);
  if (cfg.has("workload.initial_cache")) {
    const std::vector<std::uint32_t> init = cfg.ids("workload.initial_cache");
    check(dare_trace_set_initial_cache(trace.get(), init.data(), init.size()));
  }
  return trace;
}

std::vector<double> catalog_rates(const CatalogH& catalog) {
  std::vector<double> rates(dare_catalog_size(catalog.get()));
  for (std::uint32_t m = 1; m <= rates.size(); ++m) {
    check(dare_catalog_rate(catalog.get(), m, &rates[m - 1]));
  }
  return rates;
}

// policy.mu: explicit list, or 'lambda' for mu_m = lambda_m.
std::vector<double> explicit_mu(const Config& cfg, const CatalogH& catalog) {
  if (cfg.str("policy.mu") == "lambda") return catalog_rates(catalog);
  std::vector<double> mu = cfg.reals("policy.mu");
  if (mu.size() != dare_catalog_size(catalog.get())) {
    throw ConfigError("policy.mu", "policy.mu has " + std::to_string(mu.size()) +
                                       " entries for " +
                                       std::to_string(dare_catalog_size(catalog.get())) +
                                       " files");
  }
  return mu;
}

std::vector<double> solved_mu(const Config& cfg, const CatalogH& catalog, const DamageH& damage) {
  dare_retention_solution* raw = nullptr;
  check(dare_retention_solve(catalog.get(), damage.get(), cfg.real("policy.delta"),
                             cfg.real("policy.tolerance"), &raw));
  SolutionH sol(raw);
  std::vector<double> mu(dare_retention_solution_size(sol.get()));
  for (std::uint32_t m = 1; m <= mu.size(); ++m) {
    check(dare_retention_solution_file(sol.get(), m, nullptr, &mu[m - 1]));
  }
  return mu;
}

std::vector<double> tau_grid(const Config& cfg, const std::string& key) {
  if (cfg.has(key)) return cfg.reals(key);
  std::vector<double> grid;
  for (int i = 1; i <= 80; ++i) grid.push_back(0.25 * i);
  return grid;
}

// ---- commands ----

void cmd_gen_trace(const Config& cfg) {
  const CatalogH catalog = make_catalog(cfg);
  const TraceH trace = load_trace(cfg, catalog, "gen-trace");
  emit(cfg, "gen-trace", fetch([&](char* b, size_t c, size_t* n) {
         return dare_trace_format(trace.get(), b, c, n);
       }));
}

void cmd_offline(const Config& cfg) {
  const CatalogH catalog = make_catalog(cfg);
  const DamageH damage = make_damage(cfg);
  dare_offline_policy policy{};
  check(dare_offline_policy_parse(cfg.str("policy.name").c_str(), &policy));
  const TraceH trace = load_trace(cfg, catalog, "offline");
  std::uint64_t seed = 0;
  const bool seeded = cfg.raw("workload.seed").has_value();
  if (seeded) seed = cfg.u64("workload.seed");
  if (policy == DARE_OFFLINE_RND && !seeded) require_seed(cfg, "offline --policy rnd");
  dare_offline_result* raw = nullptr;
  check(dare_offline_run(trace.get(), finite_capacity(cfg, "offline"), policy, damage.get(),
                         seeded ? &seed : nullptr, &raw));
  OfflineH result(raw);
  emit(cfg, "offline", fetch([&](char* b, size_t c, size_t* n) {
         return dare_offline_result_csv(result.get(), b, c, n);
       }));
}

void cmd_solve_retention(const Config& cfg) {
  const CatalogH catalog = make_catalog(cfg);
  const DamageH damage = make_damage(cfg);
  dare_retention_solution* raw = nullptr;
  check(dare_retention_solve(catalog.get(), damage.get(), cfg.real("policy.delta"),
                             cfg.real("policy.tolerance"), &raw));
  SolutionH sol(raw);
  emit(cfg, "solve-retention", fetch([&](char* b, size_t c, size_t* n) {
         return dare_retention_solution_csv(sol.get(), b, c, n);
       }));
}

void cmd_online(const Config& cfg) {
  const CatalogH catalog = make_catalog(cfg);
  const DamageH damage = make_damage(cfg);
  dare_online_config oc;
  dare_online_config_init(&oc);
  check(dare_eviction_rule_parse(cfg.str("policy.rule").c_str(), &oc.rule));
  oc.capacity = cfg.capacity("cache.capacity");
  oc.cost_mode = cost_mode(cfg);
  oc.events = cfg.u64("workload.events");
  oc.seed = require_seed(cfg, "online");
  const std::string log_path = cfg.raw("output.event_log").value_or("");
  oc.record_events = log_path.empty() ? 0 : 1;
  std::vector<double> mu;
  if (cfg.has("policy.mu")) {
    mu = explicit_mu(cfg, catalog);
  } else if (cfg.has("policy.delta")) {
    mu = solved_mu(cfg, catalog, damage);
  } else if (cfg.has("policy.tau")) {
    oc.tau = cfg.real("policy.tau");
  } else {
    throw ConfigError("policy.mu", "online needs policy.mu, policy.delta or policy.tau");
  }
  if (!mu.empty()) {
    oc.mu = mu.data();
    oc.n_mu = mu.size();
  }
  dare_sim_report* raw = nullptr;
  check(dare_online_run(catalog.get(), damage.get(), &oc, &raw));
  ReportH report(raw);
  const std::string format = cfg.str("output.format");
  if (format == "json") {
    std::string echo = "darecache online\n";
    for (const auto& [k, v] : cfg.values()) echo += k + " = " + v + "\n";
    check(dare_sim_report_set_config_echo(report.get(), echo.c_str()));
    emit(cfg, "online", fetch([&](char* b, size_t c, size_t* n) {
           return dare_sim_report_json(report.get(), b, c, n);
         }), false);
  } else if (format == "csv") {
    emit(cfg, "online", fetch([&](char* b, size_t c, size_t* n) {
           return dare_sim_report_csv(report.get(), b, c, n);
         }));
  } else {
    throw ConfigError("output.format", "output.format must be csv or json, got '" + format + "'");
  }
  if (!log_path.empty()) {
    Config log_cfg = cfg;
    log_cfg.set("output.path", log_path);
    emit(log_cfg, "online event log", fetch([&](char* b, size_t c, size_t* n) {
           return dare_sim_report_event_log_csv(report.get(), b, c, n);
         }));
  }
}

void cmd_sweep(const Config& cfg) {
  const CatalogH catalog = make_catalog(cfg);
  const DamageH damage = make_damage(cfg);
  dare_eviction_rule rule{};
  const std::string rule_name = cfg.has("policy.rule") ? cfg.str("policy.rule") : "lru";
  check(dare_eviction_rule_parse(rule_name.c_str(), &rule));
  const std::uint64_t seed = require_seed(cfg, "sweep");
  std::vector<std::uint64_t> seeds;
  for (std::uint32_t i = 0; i < cfg.u32("policy.replications"); ++i) seeds.push_back(seed + i);
  const std::vector<double> taus = tau_grid(cfg, "policy.tau_grid");
  double budget = 0.0;
  const bool budgeted = cfg.has("policy.delta");
  if (budgeted) budget = cfg.real("policy.delta");
  dare_sweep_result* raw = nullptr;
  check(dare_sweep_run(catalog.get(), damage.get(), cfg.capacity("cache.capacity"), rule,
                       taus.data(), taus.size(), cfg.u64("workload.events"), seeds.data(),
                       seeds.size(), budgeted ? &budget : nullptr, &raw));
  SweepH result(raw);
  emit(cfg, "sweep", fetch([&](char* b, size_t c, size_t* n) {
         return dare_sweep_result_csv(result.get(), b, c, n);
       }));
}

void run_experiment(const Config& cfg, const std::string& id, const std::string& command) {
  dare_experiment* raw = nullptr;
  check(dare_experiment_create(id.c_str(), &raw));
  ExperimentH exp(raw);
  for (const auto& [key, value] : cfg.values()) {
    if (key.rfind("experiment.", 0) != 0 || key == "experiment.id") continue;
    const std::string name = key.substr(std::string("experiment.").size());
    if (dare_experiment_set(exp.get(), name.c_str(), value.c_str()) != DARE_OK) {
      throw ConfigError(key, dare_last_error());
    }
  }
  const std::string seed = std::to_string(require_seed(cfg, command));
  check(dare_experiment_set(exp.get(), "seed", seed.c_str()));
  dare_table* table_raw = nullptr;
  check(dare_experiment_run(exp.get(), cfg.flag("output.plot_data") ? 1 : 0, &table_raw));
  TableH table(table_raw);
  emit(cfg, command, fetch([&](char* b, size_t c, size_t* n) {
         return dare_table_csv(table.get(), b, c, n);
       }));
}

void cmd_experiment(const Config& cfg) {
  if (!cfg.raw("experiment.id")) {
    throw ConfigError("experiment.id", "experiment needs an id (positional or experiment.id)");
  }
  run_experiment(cfg, cfg.str("experiment.id"), "experiment");
}

void cmd_cr(const Config& cfg) { run_experiment(cfg, "competitive-ratio", "cr"); }

void cmd_oracle(const Config& cfg) {
  const CatalogH catalog = make_catalog(cfg);
  const DamageH damage = make_damage(cfg);
  const std::string kind = cfg.str("oracle.kind");
  const std::uint32_t capacity = finite_capacity(cfg, "oracle");
  if (kind == "offline") {
    const TraceH trace = load_trace(cfg, catalog, "oracle");
    std::uint64_t min_misses = 0;
    double min_damage = 0.0;
    check(dare_offline_brute_force(trace.get(), capacity, damage.get(), &min_misses, &min_damage));
    dare_offline_result* raw = nullptr;
    check(dare_offline_run(trace.get(), capacity, DARE_OFFLINE_DARE, damage.get(), nullptr, &raw));
    OfflineH dare_result(raw);
    dare_offline_summary s{};
    check(dare_offline_result_summary(dare_result.get(), &s));
    std::ostringstream body;
    body << "min_misses,min_damage,dare_misses,dare_damage,optimal\n"
         << min_misses << ',' << min_damage << ',' << s.misses << ',' << s.damage << ','
         << (s.misses == min_misses && s.damage == min_damage ? 1 : 0) << "\n";
    emit(cfg, "oracle", body.str());
    return;
  }
  if (kind != "mdp") {
    throw ConfigError("oracle.kind", "oracle.kind must be mdp or offline, got '" + kind + "'");
  }
  const std::vector<double> lambda = catalog_rates(catalog);
  std::vector<double> mu;
  if (cfg.has("policy.mu")) {
    mu = explicit_mu(cfg, catalog);
  } else if (cfg.has("policy.delta")) {
    mu = solved_mu(cfg, catalog, damage);
  } else {
    throw ConfigError("policy.mu", "oracle needs policy.mu or policy.delta");
  }
  std::vector<double> cost;
  if (cfg.has("oracle.costs")) {
    cost = cfg.reals("oracle.costs");
  } else {
    const dare_cost_mode mode = cost_mode(cfg);
    for (std::uint32_t m = 1; m <= lambda.size(); ++m) {
      double delay = 0.0;
      double expected = 0.0;
      check(dare_catalog_delay(catalog.get(), m, &delay));
      if (std::isfinite(mu[m - 1])) {
        check(dare_damage_expected_exponential(damage.get(), mu[m - 1], &expected));
      }
      cost.push_back(mode == DARE_COST_DAMAGE_ONLY  ? expected
                     : mode == DARE_COST_DELAY_ONLY ? delay
                                                    : delay + expected);
    }
  }
  if (cost.size() != lambda.size()) {
    throw ConfigError("oracle.costs", "oracle.costs needs one entry per file");
  }
  dare_mdp_result* raw = nullptr;
  check(dare_mdp_oracle_run(lambda.data(), mu.data(), cost.data(),
                            static_cast<std::uint32_t>(lambda.size()), capacity,
                            cfg.u32("oracle.horizon"), &raw));
  MdpH result(raw);
  std::string body = fetch([&](char* b, size_t c, size_t* n) {
    return dare_mdp_result_csv(result.get(), b, c, n);
  });
  body = "# decisions = " + std::to_string(dare_mdp_result_decisions(result.get())) +
         "\n# all_agree = " + std::to_string(dare_mdp_result_all_agree(result.get())) + "\n" +
         body;
  emit(cfg, "oracle", body);
}

struct Flags {
  std::string config;
  std::string seed;
  std::string out;
  std::string format;
  std::string policy;
  std::string rule;
  std::string capacity;
  std::string delta;
  std::string tau;
  std::string events;
  std::string trace;
  std::string initial_cache;
  std::string event_log;
  std::string experiment;
  bool plot_data = false;
  std::vector<std::string> sets;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "Configuration file");
  sub->add_option("--seed", f.seed, "Root seed (workload.seed)");
  sub->add_option("--out", f.out, "Output path (output.path)");
  sub->add_option("--format", f.format, "csv or json (output.format)");
  sub->add_option("--set", f.sets, "Override: section.key=value (repeatable)");
  sub->add_option("--capacity", f.capacity, "Cache size or 'inf' (cache.capacity)");
}

// Flags are applied after the file so they take precedence.
Config build_config(const Flags& f) {
  Config cfg;
  if (!f.config.empty()) cfg.load_file(f.config);
  for (const auto& s : f.sets) cfg.apply_assignment(s);
  auto put = [&](const char* key, const std::string& v) {
    if (!v.empty()) cfg.set(key, v);
  };
  put("workload.seed", f.seed);
  put("output.path", f.out);
  put("output.format", f.format);
  put("policy.name", f.policy);
  put("policy.rule", f.rule);
  put("cache.capacity", f.capacity);
  put("policy.delta", f.delta);
  put("policy.tau", f.tau);
  put("workload.events", f.events);
  put("workload.trace", f.trace);
  put("workload.initial_cache", f.initial_cache);
  put("output.event_log", f.event_log);
  put("experiment.id", f.experiment);
  if (f.plot_data) cfg.set("output.plot_data", "true");
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Damage-aware flash cache laboratory"};
  app.footer(darecli::describe_keys());
  app.require_subcommand(1);
  Flags flags;

  struct Command {
    const char* name;
    const char* help;
    void (*run)(const Config&);
  };
  const Command commands[] = {
      {"gen-trace", "Write a request trace", cmd_gen_trace},
      {"offline", "Run an offline policy on a trace", cmd_offline},
      {"solve-retention", "Solve the retention program for a delay budget", cmd_solve_retention},
      {"online", "Run the continuous-time cache simulation", cmd_online},
      {"sweep", "Sweep deterministic retentions for a baseline rule", cmd_sweep},
      {"experiment", "Run an experiment grid", cmd_experiment},
      {"oracle", "Check the eviction rule or DARE against exhaustive search", cmd_oracle},
      {"cr", "Competitive-ratio experiment", cmd_cr},
  };
  void (*selected)(const Config&) = nullptr;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, flags);
    const std::string name = c.name;
    if (name == "gen-trace" || name == "offline" || name == "oracle") {
      sub->add_option("--trace", flags.trace, "Literal trace, e.g. 1,5,3 (workload.trace)");
      sub->add_option("--initial-cache", flags.initial_cache,
                      "Files cached at slot 0 (workload.initial_cache)");
    }
    if (name == "offline") sub->add_option("--policy", flags.policy, "Offline policy (policy.name)");
    if (name == "online" || name == "sweep") {
      sub->add_option("--rule", flags.rule, "Eviction rule (policy.rule)");
      sub->add_option("--events", flags.events, "Request count (workload.events)");
    }
    if (name == "online" || name == "sweep" || name == "solve-retention" || name == "oracle") {
      sub->add_option("--delta", flags.delta, "Delay budget (policy.delta)");
    }
    if (name == "online") {
      sub->add_option("--tau", flags.tau, "Deterministic retention (policy.tau)");
      sub->add_option("--event-log", flags.event_log, "Event log CSV path (output.event_log)");
    }
    if (name == "experiment") {
      sub->add_option("id", flags.experiment, "Experiment id (experiment.id)");
    }
    if (name == "experiment" || name == "cr") {
      sub->add_flag("--plot-data", flags.plot_data, "Emit long-format figure data");
    }
    sub->callback([&selected, run = c.run] { selected = run; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const Config cfg = build_config(flags);
    selected(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "error code=invalid-argument field=" << (e.field().empty() ? "-" : e.field())
              << " message=\"" << e.what() << "\"\n";
    return 2;
  } catch (const ApiError& e) {
    std::cerr << "error code=" << dare_status_name(e.status()) << " field=- message=\""
              << e.what() << "\"\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error code=internal field=- message=\"" << e.what() << "\"\n";
    return 1;
  }
  return 0;
}
