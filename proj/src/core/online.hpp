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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "model.hpp"
#include "retention.hpp"

namespace dare {

enum class EvictionRule {
  DareDelta,
  Lru,
  Fifo,
  Random,
};

const char* eviction_rule_name(EvictionRule rule);
EvictionRule parse_eviction_rule(std::string_view name);

/// Retention drawn per write from Exp(mu_m); mu_m = +inf means never write.
struct StochasticRetention {
  std::vector<double> mu;
};

/// Every write gets the same fixed retention.
struct DeterministicRetention {
  double tau = 1.0;
};

using RetentionSpec = std::variant<StochasticRetention, DeterministicRetention>;

struct OnlineConfig {
  /// nullopt = unbounded cache.
  std::optional<std::uint32_t> capacity;
  EvictionRule rule = EvictionRule::DareDelta;
  RetentionSpec retention = DeterministicRetention{};
  CostModel cost;
  /// Number of request arrivals to simulate.
  std::uint64_t events = 0;
  std::uint64_t seed = 0;
  bool record_events = false;
};

struct FileStats {
  std::uint64_t requests = 0;
  std::uint64_t misses = 0;
  std::uint64_t writes = 0;
  double damage = 0.0;
};

enum class EventKind { Arrival, Expiry };

struct EventLogEntry {
  double time = 0.0;
  EventKind kind = EventKind::Arrival;
  FileId file = 0;
  bool hit = false;
  /// Evicted file, 0 when nothing was evicted; equals `file` when the
  /// request itself was not cached.
  FileId victim = 0;
  double damage = 0.0;
};

struct SimReport {
  double total_damage = 0.0;
  std::uint64_t requests = 0;
  std::uint64_t misses = 0;
  std::uint64_t writes = 0;
  std::uint64_t evictions = 0;
  /// Misses served without writing the file.
  std::uint64_t declined = 0;
  double miss_fraction = 0.0;
  /// sum_m delta(m) * misses_m / requests.
  double delay = 0.0;
  double end_time = 0.0;
  std::vector<FileStats> per_file;
  std::uint64_t seed = 0;
  std::string config_echo;
  std::vector<EventLogEntry> log;
};

/// DARE-Delta victim over S + r: the candidate with the smallest score
/// p_u c(u). Ties prefer the request itself, then the smaller id. Returns
/// `request` when the file should be served without caching.
FileId dare_delta_victim(std::span<const double> scores, std::span<const FileId> cache,
                         FileId request);

/// Per-file scores p_u c(u) used by the DARE-Delta rule.
std::vector<double> dare_delta_scores(const Catalog& catalog, const DamagePolynomial& damage,
                                      const RetentionSpec& retention, const CostModel& cost);

/// Continuous-time simulation: Poisson arrivals, scheduled expiries, and the
/// chosen eviction rule on full-cache misses.
SimReport run_online(const Catalog& catalog, const DamagePolynomial& damage,
                     const OnlineConfig& config);

std::string sim_report_csv(const SimReport& report);
std::string sim_report_json(const SimReport& report);
std::string event_log_csv(const SimReport& report);

struct SweepPoint {
  double tau = 0.0;
  double mean_damage = 0.0;
  double mean_miss_fraction = 0.0;
  double mean_delay = 0.0;
  bool feasible = true;
};

struct SweepResult {
  double best_tau = 0.0;
  double best_damage = 0.0;
  double best_miss_fraction = 0.0;
  std::vector<SweepPoint> grid;
};

/// Simulates every tau with every seed and returns the tau with the smallest
/// mean damage among those whose mean delay is within `delay_budget` (all of
/// them when no budget is given). Ties go to the smaller tau.
SweepResult sweep_deterministic_retention(const Catalog& catalog, const DamagePolynomial& damage,
                                          std::optional<std::uint32_t> capacity,
                                          EvictionRule rule, std::span<const double> taus,
                                          std::uint64_t events,
                                          std::span<const std::uint64_t> seeds,
                                          std::optional<double> delay_budget = std::nullopt);

std::string sweep_csv(const SweepResult& result, EvictionRule rule);

struct PipelineResult {
  RetentionSolution solution;
  SimReport report;
};

/// Solve the retention program for the budget, then run the DARE-Delta rule
/// at the given capacity with the solved rates.
PipelineResult dare_delta_pipeline(const Catalog& catalog, const DamagePolynomial& damage,
                                   std::optional<std::uint32_t> capacity, double delay_budget,
                                   CostMode cost_mode, std::uint64_t events, std::uint64_t seed,
                                   double tolerance = 1e-10);

struct SimulationCheck {
  double miss_fraction = 0.0;
  double damage_per_request = 0.0;
};

/// Runs an unbounded cache with the solution's retention rates.
SimulationCheck verify_by_simulation(const RetentionSolution& solution,
                                     const RetentionProblem& problem, std::uint64_t events,
                                     std::uint64_t seed);

}  // namespace dare
