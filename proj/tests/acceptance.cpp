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

// Acceptance gate: one PASS/FAIL line per criterion.
//   acceptance            run all criteria
//   acceptance --only N   run criterion N

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "experiments.hpp"
#include "mdp_oracle.hpp"
#include "model.hpp"
#include "offline.hpp"
#include "offline_oracle.hpp"
#include "online.hpp"
#include "retention.hpp"
#include "rng.hpp"
#include "workload.hpp"

#ifndef DARECACHE_PATH
#define DARECACHE_PATH "darecache"
#endif

using namespace dare;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

const DamagePolynomial kQuadratic = DamagePolynomial::monomial(2);

// Files requested in a hit slot must lie inside a write interval of that file.
bool hits_covered(const RequestTrace& trace, const OfflineResult& fif, const OfflineResult& dare) {
  for (std::uint64_t t = 1; t <= trace.horizon(); ++t) {
    if (!fif.hits[t - 1]) continue;
    const FileId f = trace.at(t);
    const bool covered = std::any_of(dare.writes.begin(), dare.writes.end(), [&](const auto& w) {
      return w.file == f && w.write_slot <= t && t <= w.write_slot + w.retention - 1;
    });
    if (!covered) return false;
  }
  return true;
}

std::vector<FileId> random_initial_cache(Rng& rng, std::uint32_t files, std::uint32_t capacity) {
  std::vector<FileId> all(files);
  for (std::uint32_t i = 0; i < files; ++i) all[i] = i + 1;
  const auto k = rng.index(std::min(files, capacity) + 1);
  for (std::uint64_t i = 0; i < k; ++i) std::swap(all[i], all[i + rng.index(files - i)]);
  all.resize(k);
  return all;
}

Outcome criterion1() {
  int mismatches = 0;
  int uncovered = 0;
  int dominated = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    Rng rng(derive_seed(101, Stream::Instance, i));
    const auto M = static_cast<std::uint32_t>(1 + rng.index(50));
    const std::uint64_t T = 1 + rng.index(500);
    const auto B = static_cast<std::uint32_t>(1 + rng.index(10));
    const Catalog catalog = Catalog::zipf(M, 1.2 * rng.uniform01());
    RequestTrace trace = generate_trace(catalog, T, derive_seed(101, Stream::Trace, i));
    if (i % 2) trace.initial_cache = random_initial_cache(rng, M, B);
    const OfflineResult fif = simulate_offline(trace, B, OfflinePolicy::Fif, kQuadratic);
    const OfflineResult dare = simulate_offline(trace, B, OfflinePolicy::Dare, kQuadratic);
    if (fif.misses != dare.misses || fif.evictions != dare.evictions) ++mismatches;
    if (!hits_covered(trace, fif, dare)) ++uncovered;
    if (dare.damage > fif.damage) ++dominated;
  }
  return {mismatches == 0 && uncovered == 0 && dominated == 0,
          "mismatches=" + std::to_string(mismatches) + " uncovered=" + std::to_string(uncovered) +
              " damage_above_fif=" + std::to_string(dominated)};
}

Outcome criterion2() {
  int checked = 0;
  int failures = 0;
  for (std::uint64_t i = 0; checked < 200; ++i) {
    Rng rng(derive_seed(202, Stream::Instance, i));
    const auto M = static_cast<std::uint32_t>(2 + rng.index(4));
    const std::uint64_t T = 1 + rng.index(9);
    const auto B = static_cast<std::uint32_t>(1 + rng.index(3));
    std::vector<FileId> requests(T);
    for (auto& r : requests) r = static_cast<FileId>(1 + rng.index(M));
    const RequestTrace trace = make_trace(M, requests, random_initial_cache(rng, M, B));
    std::vector<double> a(1 + rng.index(3));
    for (auto& c : a) c = static_cast<double>(rng.index(4));
    a.back() += 1.0;
    const DamagePolynomial f(a);
    const OfflineResult fif = simulate_offline(trace, B, OfflinePolicy::Fif, f);
    if (fif.writes.size() > 5) continue;
    ++checked;
    const OfflineResult dare = dare_retentions(trace, fif, f);
    const BruteForceResult oracle = brute_force_min_damage(trace, B, f);
    if (oracle.min_misses != fif.misses || oracle.min_damage != dare.damage ||
        brute_force_min_misses(trace, B) != fif.misses) {
      ++failures;
    }
  }
  return {failures == 0, "instances=" + std::to_string(checked) +
                             " disagreements=" + std::to_string(failures)};
}

Outcome criterion3() {
  const RequestTrace trace = make_trace(5, {1, 5, 3, 1, 4, 1, 2, 5, 1}, {1, 2, 3});
  const OfflineResult fif = simulate_offline(trace, 3, OfflinePolicy::Fif, kQuadratic);
  const OfflineResult dare = dare_retentions(trace, fif, kQuadratic);
  const std::vector<Eviction> expected{{2, 2}, {5, 3}, {7, 4}};
  bool ok = fif.misses == 3 && fif.evictions == expected;
  // file -> retentions in write order
  std::array<std::vector<std::uint64_t>, 6> got;
  for (const auto& w : dare.writes) got[w.file].push_back(w.retention);
  ok = ok && got[3] == std::vector<std::uint64_t>{4} && got[4] == std::vector<std::uint64_t>{1} &&
       got[2] == std::vector<std::uint64_t>({1, 1}) && got[1] == std::vector<std::uint64_t>{10} &&
       got[5] == std::vector<std::uint64_t>{7};
  return {ok, "misses=" + std::to_string(fif.misses) + " retentions a=" +
                  std::to_string(got[1].empty() ? 0 : got[1][0]) +
                  " c=" + std::to_string(got[3].empty() ? 0 : got[3][0]) +
                  " e=" + std::to_string(got[5].empty() ? 0 : got[5][0])};
}

Outcome criterion4() {
  ExperimentSpec spec = ExperimentSpec::defaults(ExperimentId::OfflineTradeoff);
  spec.capacities = {50, 600};
  spec.alphas = {0.65};
  spec.file_counts = {1000};
  spec.slots = 10000;
  spec.replications = 10;
  spec.seed = 4;
  const auto rows = run_offline_tradeoff(spec);
  const double small = rows[0].savings;
  const double large = rows[1].savings;
  return {small >= 1.5 && large <= 1.2,
          "savings(B=50)=" + fmt(small) + " savings(B=600)=" + fmt(large)};
}

double grid_search_two_files(const RetentionProblem& problem) {
  double best = std::numeric_limits<double>::infinity();
  std::array<double, 2> q{};
  for (int i = 0; i < 1000; ++i) {
    for (int j = 0; j < 1000; ++j) {
      q = {i * 1e-3, j * 1e-3};
      if (retention_delay(problem, q) > problem.delay_budget) continue;
      best = std::min(best, retention_objective(problem, q));
    }
  }
  return best;
}

RetentionProblem random_problem(Rng& rng, std::uint32_t max_files) {
  const auto M = static_cast<std::uint32_t>(1 + rng.index(max_files));
  std::vector<double> delays(M);
  for (auto& d : delays) d = 0.5 + 1.5 * rng.uniform01();
  const Catalog catalog = Catalog::zipf(M, 1.5 * rng.uniform01(), delays);
  std::vector<double> a(1 + rng.index(3));
  for (auto& c : a) c = rng.uniform01();
  a.back() += 0.1;
  double max_delay = 0.0;
  for (std::uint32_t m = 1; m <= M; ++m) max_delay += catalog.probability(m) * catalog.delay(m);
  return {catalog, DamagePolynomial(a), max_delay * (0.05 + 0.9 * rng.uniform01())};
}

Outcome criterion5() {
  const RetentionProblem single{Catalog::from_rates(std::vector<double>{1.0}),
                                DamagePolynomial::monomial(1), 0.5};
  const RetentionSolution s = solve_retention(single);
  const bool analytic = std::abs(s.q[0] - 0.5) < 1e-6 && std::abs(s.mu[0] - 1.0) < 1e-6 &&
                        std::abs(s.objective - 0.5) < 1e-6;
  double worst_kkt = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng rng(derive_seed(505, Stream::Instance, i));
    worst_kkt = std::max(worst_kkt, solve_retention(random_problem(rng, 40)).kkt_residual());
  }
  double worst_gap = 0.0;
  std::vector<RetentionProblem> grid_cases{
      {Catalog::from_rates(std::vector<double>{1.0, 0.5}), kQuadratic, 0.4}};
  for (std::uint64_t i = 0; i < 5; ++i) {
    Rng rng(derive_seed(506, Stream::Instance, i));
    RetentionProblem p = random_problem(rng, 1);
    // A 1e-3 grid cannot resolve the optimum once q approaches the pole, so
    // random budgets stay in [0.3, 0.9].
    grid_cases.push_back({Catalog::zipf(2, 1.5 * rng.uniform01()), p.damage,
                          0.3 + 0.6 * rng.uniform01()});
  }
  bool below_grid = true;
  for (const auto& p : grid_cases) {
    const double solved = solve_retention(p).objective;
    const double grid = grid_search_two_files(p);
    worst_gap = std::max(worst_gap, std::abs(solved - grid) / std::max(1.0, std::abs(grid)));
    below_grid = below_grid && solved <= grid + 1e-12;
  }
  return {analytic && worst_kkt < 1e-6 && worst_gap <= 1e-2 && below_grid,
          "analytic q=" + fmt(s.q[0]) + " mu=" + fmt(s.mu[0]) + " obj=" + fmt(s.objective) +
              " max_kkt=" + fmt(worst_kkt) + " max_scaled_grid_gap=" + fmt(worst_gap) +
              " solver_below_grid=" + (below_grid ? "yes" : "no")};
}

Outcome criterion6() {
  int violations = 0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    Rng rng(derive_seed(606, Stream::Instance, i));
    const RetentionProblem p = random_problem(rng, 5);
    const std::uint32_t M = p.catalog.size();
    std::vector<double> q1(M), q2(M), mix(M);
    const double t = rng.uniform01();
    for (std::uint32_t m = 0; m < M; ++m) {
      q1[m] = 0.95 * rng.uniform01();
      q2[m] = 0.95 * rng.uniform01();
      mix[m] = t * q1[m] + (1 - t) * q2[m];
    }
    const double rhs = t * retention_objective(p, q1) + (1 - t) * retention_objective(p, q2);
    if (retention_objective(p, mix) > rhs + 1e-9 * std::max(1.0, rhs)) ++violations;
  }
  ExperimentSpec spec = ExperimentSpec::defaults(ExperimentId::DeltaSweep);
  const auto rows = run_delta_sweep(spec);
  int increases = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& a = rows[i - 1];
    const auto& b = rows[i];
    if (a.degree == b.degree && a.files == b.files && b.objective > a.objective) ++increases;
  }
  return {violations == 0 && increases == 0, "convexity_violations=" + std::to_string(violations) +
                                                 " sweep_increases=" + std::to_string(increases) +
                                                 " sweep_points=" + std::to_string(rows.size())};
}

Outcome criterion7() {
  const Catalog catalog = Catalog::zipf(5, 0.85);
  OnlineConfig config;
  config.retention = StochasticRetention{catalog.rates()};
  config.events = 100000;
  config.seed = 7;
  const SimReport report = run_online(catalog, kQuadratic, config);
  double worst_z = 0.0;
  for (const auto& s : report.per_file) {
    const double n = static_cast<double>(s.requests);
    const double z = std::abs(static_cast<double>(s.misses) / n - 0.5) / std::sqrt(0.25 / n);
    worst_z = std::max(worst_z, z);
  }
  double worst_gap = 0.0;
  for (double delta : {0.3, 0.6}) {
    const PipelineResult r = dare_delta_pipeline(Catalog::zipf(10, 0.85), kQuadratic, std::nullopt,
                                                 delta, CostMode::DelayPlusDamage, 100000, 77);
    if (r.solution.theta > 0.0) {
      worst_gap = std::max(worst_gap, std::abs(r.report.miss_fraction - delta));
    }
  }
  return {worst_z <= 3.0 && worst_gap <= 0.02,
          "max_per_file_z=" + fmt(worst_z) + " max_binding_gap=" + fmt(worst_gap)};
}

Outcome criterion8() {
  int instances = 0;
  std::size_t states = 0;
  int disagreements = 0;
  for (std::uint64_t i = 0; instances < 50; ++i) {
    Rng rng(derive_seed(808, Stream::Instance, i));
    const auto M = static_cast<std::uint32_t>(2 + rng.index(3));
    const auto B = static_cast<std::uint32_t>(1 + rng.index(std::min<std::uint32_t>(2, M - 1)));
    const auto T = static_cast<std::uint32_t>(1 + rng.index(8));
    const Catalog catalog = Catalog::zipf(M, 1.5 * rng.uniform01());
    const DamagePolynomial f({rng.uniform01(), 0.1 + rng.uniform01()});
    const RetentionSolution sol =
        solve_retention({catalog, f, 0.1 + 0.8 * rng.uniform01()});
    if (std::any_of(sol.mu.begin(), sol.mu.end(), [](double mu) { return !std::isfinite(mu); })) {
      continue;
    }
    const CostModel cost{rng.index(2) ? CostMode::DelayPlusDamage : CostMode::DamageOnly};
    std::vector<double> c(M);
    for (FileId m = 1; m <= M; ++m) {
      c[m - 1] = cost.cost(catalog, m, f.expected_exponential(sol.mu[m - 1]));
    }
    const auto chain = UniformizedChain::build(catalog.rates(), sol.mu, B);
    const MdpOracleResult r = value_iteration_oracle(chain, c, T);
    ++instances;
    states += r.decisions.size();
    for (const auto& d : r.decisions) disagreements += d.rule_is_optimal ? 0 : 1;
  }
  return {disagreements == 0, "instances=" + std::to_string(instances) +
                                  " decision_states=" + std::to_string(states) +
                                  " disagreements=" + std::to_string(disagreements)};
}

Outcome criterion9() {
  ExperimentSpec spec = ExperimentSpec::defaults(ExperimentId::OnlineCompare);
  spec.file_counts = {200};
  spec.alphas = {0.95};
  spec.capacities = {100};
  spec.delta = 0.66;
  spec.events = 100000;
  spec.replications = 20;
  spec.seed = 9;
  const auto rows = run_online_compare(spec);
  double dare = 0.0;
  double best_baseline = std::numeric_limits<double>::infinity();
  std::string detail;
  for (const auto& r : rows) {
    if (r.policy == "dare-delta") {
      dare = r.damage;
    } else {
      best_baseline = std::min(best_baseline, r.damage);
    }
    detail += r.policy + "=" + fmt(r.damage) + (std::isnan(r.tau) ? "" : "@tau" + fmt(r.tau)) + " ";
  }
  const bool lowest = dare < best_baseline;
  const double ratio = best_baseline / dare;
  return {lowest && ratio >= 1.5, detail + "savings=" + fmt(ratio)};
}

Outcome criterion10() {
  ExperimentSpec spec = ExperimentSpec::defaults(ExperimentId::CompetitiveRatio);
  spec.file_counts = {200};
  spec.capacities = {10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  spec.replications = 20;
  spec.seed = 10;
  const auto rows = run_competitive_ratio(spec);
  int below_one = 0;
  bool converged = true;
  std::string detail;
  for (const auto& r : rows) {
    for (double cr : {r.cr1, r.cr2}) {
      if (std::isnan(cr)) continue;
      if (cr < 1.0) ++below_one;
      if (r.capacity == 100 && std::abs(cr - 1.0) > 0.1) converged = false;
    }
    if (r.capacity == 10 || r.capacity == 100) {
      detail += "alpha=" + fmt(r.alpha) + ",B=" + fmt(r.capacity) + ":cr1=" + fmt(r.cr1) +
                ",cr2=" + fmt(r.cr2) + " ";
    }
  }
  return {below_one == 0 && converged,
          detail + "cells_below_one=" + std::to_string(below_one)};
}

std::string run_capture(const std::string& command) {
  std::string out;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return "<popen failed>";
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  if (status != 0) out += "<exit " + std::to_string(status) + ">";
  return out;
}

Outcome criterion11() {
  const std::string cli = DARECACHE_PATH;
  const std::vector<std::string> commands = {
      "gen-trace --seed 5 --set catalog.files=20 --set workload.slots=200",
      "offline --seed 5 --policy rnd --capacity 4 --set catalog.files=20 --set workload.slots=300",
      "offline --seed 5 --policy dare* --capacity 4 --set catalog.files=20",
      "solve-retention --delta 0.5 --set catalog.files=30",
      "online --seed 5 --capacity 10 --delta 0.6 --set catalog.files=50 --events 20000",
      "online --seed 5 --capacity 10 --delta 0.6 --set catalog.files=50 --events 20000 --format json",
      "online --seed 5 --capacity 10 --rule rnd --tau 3 --set catalog.files=50 --events 20000",
      "sweep --seed 5 --capacity 10 --rule fifo --set catalog.files=50 --events 5000 "
      "--set policy.tau_grid=1,2,4",
      "experiment offline-tradeoff --seed 5 --set experiment.capacities=5,10 "
      "--set experiment.files=50 --set experiment.slots=2000 --set experiment.replications=3",
      "experiment online-compare --seed 5 --set experiment.files=50 --set experiment.capacities=10 "
      "--set experiment.events=5000 --set experiment.replications=2 --set experiment.tau_grid=1,2,4",
      "oracle --capacity 2 --set catalog.files=4 --delta 0.5",
      "cr --seed 5 --set experiment.capacities=5,10 --set experiment.files=30 "
      "--set experiment.slots=2000 --set experiment.replications=2 --plot-data",
  };
  int differing = 0;
  int failed = 0;
  for (const auto& c : commands) {
    const std::string a = run_capture(cli + " " + c + " 2>&1");
    const std::string b = run_capture(cli + " " + c + " 2>&1");
    if (a.find("<exit") != std::string::npos || a.find("error") == 0) ++failed;
    if (a != b) ++differing;
  }
  ExperimentSpec spec = ExperimentSpec::defaults(ExperimentId::StarTradeoff);
  spec.capacities = {5, 10, 15};
  spec.file_counts = {40};
  spec.slots = 3000;
  spec.replications = 4;
  spec.threads = 1;
  const std::string serial = run_experiment_csv(spec);
  spec.threads = 4;
  const bool thread_invariant = serial == run_experiment_csv(spec);
  return {differing == 0 && failed == 0 && thread_invariant,
          "commands=" + std::to_string(commands.size()) + " differing=" +
              std::to_string(differing) + " failed=" + std::to_string(failed) +
              " thread_invariant=" + (thread_invariant ? "yes" : "no")};
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "DARE preserves FiF misses and evictions on 1000 traces", 60, criterion1},
      {2, "DARE damage equals the exhaustive minimum on 200 instances", 120, criterion2},
      {3, "Example 1 golden evictions and retentions", 1, criterion3},
      {4, "offline savings >= 1.5 at B=50 and <= 1.2 at B=600", 600, criterion4},
      {5, "retention solver: analytic case, KKT residuals, grid oracle", 60, criterion5},
      {6, "objective convexity probes and monotone delta sweep", 60, criterion6},
      {7, "hit probability and binding miss budget in simulation", 60, criterion7},
      {8, "value iteration confirms the p*c eviction rule", 120, criterion8},
      {9, "DARE-Delta saves >= 1.5x over tuned LRU/FIFO/RND", 900, criterion9},
      {10, "competitive ratios >= 1 and within 10% of 1 at B=100", 900, criterion10},
      {11, "byte-identical reruns of every command", 120, criterion11},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  int failures = 0;
  for (const auto& c : criteria) {
    if (only && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_seconds) {
      o.pass = false;
      o.detail += " (over time budget " + fmt(c.budget_seconds) + "s)";
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " | "
              << o.detail << " | " << fmt(secs) << "s" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
