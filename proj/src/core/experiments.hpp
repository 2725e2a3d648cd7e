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
#include <string>
#include <string_view>
#include <vector>

#include "model.hpp"

namespace dare {

enum class ExperimentId {
  OfflineTradeoff,
  DeltaSweep,
  OnlineCompare,
  StarTradeoff,
  CompetitiveRatio,
};

const char* experiment_name(ExperimentId id);
ExperimentId parse_experiment(std::string_view name);

struct ExperimentSpec {
  ExperimentId id = ExperimentId::OfflineTradeoff;
  std::vector<std::uint32_t> capacities{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  std::vector<double> alphas{0.65, 0.95};
  std::vector<std::uint32_t> file_counts{200};
  /// Offline horizon in slots; also the online request count for the
  /// star-variant and competitive-ratio experiments.
  std::uint64_t slots = 20000;
  /// Online request count for online-compare.
  std::uint64_t events = 100000;
  std::vector<double> epsilons{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<unsigned> degrees{1, 2, 3};
  double delta = 0.66;
  std::vector<double> tau_grid;
  std::vector<std::string> policies{"dare-delta", "lru", "fifo", "rnd"};
  std::uint32_t replications = 20;
  std::uint64_t seed = 1;
  CostMode cost_mode = CostMode::DelayPlusDamage;
  /// Damage coefficients a_1..a_n; quadratic by default.
  std::vector<double> damage{0.0, 1.0};
  unsigned threads = 0;

  /// Desk-scale defaults for one experiment: alpha 0.85 for delta-sweep;
  /// alpha 0.95, B = 100 and damage-only cost for online-compare; damage-only
  /// cost for the star-variant and competitive-ratio runs.
  static ExperimentSpec defaults(ExperimentId id);
  void validate() const;
};

/// Deterministic-retention sweep grid used when none is configured:
/// 0.25 to 20 in steps of 0.25.
std::vector<double> default_tau_grid();

struct OfflineTradeoffRow {
  std::uint32_t capacity = 0;
  double alpha = 0.0;
  double damage_fif = 0.0;
  double damage_dare = 0.0;
  double miss_fraction = 0.0;
  double savings = 0.0;
};

struct DeltaSweepRow {
  unsigned degree = 0;
  std::uint32_t files = 0;
  double epsilon = 0.0;
  double objective = 0.0;
};

struct OnlineCompareRow {
  std::string policy;
  double alpha = 0.0;
  /// Best swept retention; NaN for DARE-Delta.
  double tau = 0.0;
  double damage = 0.0;
  double miss_fraction = 0.0;
};

struct StarTradeoffRow {
  std::uint32_t capacity = 0;
  double alpha = 0.0;
  double damage_dare_star = 0.0;
  double miss_dare_star = 0.0;
  double writes_dare_star = 0.0;
  double writes_dare = 0.0;
  double damage_lru_star = 0.0;
  double miss_lru_star = 0.0;
  double damage_online_dare_star = 0.0;
  double miss_online_dare_star = 0.0;
  double damage_online_lru_star = 0.0;
  double miss_online_lru_star = 0.0;
};

struct CompetitiveRatioRow {
  std::uint32_t capacity = 0;
  double alpha = 0.0;
  double epsilon_dare_star = 0.0;
  double damage_dare_star = 0.0;
  double damage_online_dare_star = 0.0;
  /// NaN when either damage is zero.
  double cr1 = 0.0;
  double epsilon_lru_star = 0.0;
  double damage_lru_star = 0.0;
  double damage_online_lru_star = 0.0;
  double cr2 = 0.0;
};

std::vector<OfflineTradeoffRow> run_offline_tradeoff(const ExperimentSpec& spec);
std::vector<DeltaSweepRow> run_delta_sweep(const ExperimentSpec& spec);
std::vector<OnlineCompareRow> run_online_compare(const ExperimentSpec& spec);
std::vector<StarTradeoffRow> run_star_tradeoff(const ExperimentSpec& spec);
std::vector<CompetitiveRatioRow> run_competitive_ratio(const ExperimentSpec& spec);

/// Runs spec.id and renders its table. With `plot_data`, the table is emitted
/// in long format (figure, series, x, y).
std::string run_experiment_csv(const ExperimentSpec& spec, bool plot_data = false);

}  // namespace dare
