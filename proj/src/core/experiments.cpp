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

#include "experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "csv.hpp"
#include "error.hpp"
#include "offline.hpp"
#include "online.hpp"
#include "retention.hpp"
#include "rng.hpp"
#include "workload.hpp"

namespace dare {

const char* experiment_name(ExperimentId id) {
  switch (id) {
    case ExperimentId::OfflineTradeoff: return "offline-tradeoff";
    case ExperimentId::DeltaSweep: return "delta-sweep";
    case ExperimentId::OnlineCompare: return "online-compare";
    case ExperimentId::StarTradeoff: return "star-tradeoff";
    case ExperimentId::CompetitiveRatio: return "competitive-ratio";
  }
  return "unknown";
}

ExperimentId parse_experiment(std::string_view name) {
  for (auto id : {ExperimentId::OfflineTradeoff, ExperimentId::DeltaSweep,
                  ExperimentId::OnlineCompare, ExperimentId::StarTradeoff,
                  ExperimentId::CompetitiveRatio}) {
    if (name == experiment_name(id)) return id;
  }
  fail(ErrorCode::InvalidArgument, "unknown experiment '" + std::string(name) + "'");
}

std::vector<double> default_tau_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 80; ++i) grid.push_back(0.25 * i);
  return grid;
}

ExperimentSpec ExperimentSpec::defaults(ExperimentId id) {
  ExperimentSpec spec;
  spec.id = id;
  switch (id) {
    case ExperimentId::OfflineTradeoff:
      break;
    case ExperimentId::DeltaSweep:
      spec.alphas = {0.85};
      spec.file_counts = {50, 100, 200};
      break;
    case ExperimentId::OnlineCompare:
      spec.alphas = {0.95};
      spec.capacities = {100};
      spec.cost_mode = CostMode::DamageOnly;
      break;
    case ExperimentId::StarTradeoff:
    case ExperimentId::CompetitiveRatio:
      spec.cost_mode = CostMode::DamageOnly;
      break;
  }
  return spec;
}

void ExperimentSpec::validate() const {
  require(replications >= 1, "experiment.replications must be >= 1");
  require(!file_counts.empty(), "experiment.files must not be empty");
  for (auto m : file_counts) require(m >= 1, "experiment.files entries must be >= 1");
  DamagePolynomial check(damage);
  (void)check;
  switch (id) {
    case ExperimentId::OfflineTradeoff:
    case ExperimentId::StarTradeoff:
    case ExperimentId::CompetitiveRatio:
      require(!capacities.empty(), "experiment.capacities must not be empty");
      require(!alphas.empty(), "experiment.alphas must not be empty");
      require(slots >= 1, "experiment.slots must be >= 1");
      for (auto b : capacities) require(b >= 1, "experiment.capacities entries must be >= 1");
      break;
    case ExperimentId::DeltaSweep:
      require(!degrees.empty(), "experiment.degrees must not be empty");
      require(!epsilons.empty(), "experiment.epsilons must not be empty");
      for (double e : epsilons) require(e > 0.0, "experiment.epsilons entries must be > 0");
      for (unsigned d : degrees) require(d >= 1, "experiment.degrees entries must be >= 1");
      break;
    case ExperimentId::OnlineCompare:
      require(!policies.empty(), "experiment.policies must not be empty");
      require(!alphas.empty(), "experiment.alphas must not be empty");
      require(!capacities.empty(), "experiment.capacities must not be empty");
      require(delta > 0.0, "experiment.delta must be > 0");
      require(events >= 1, "experiment.events must be >= 1");
      for (const auto& p : policies) parse_eviction_rule(p);
      break;
  }
}

namespace {

// Runs job(i) for i in [0, n) on up to `threads` workers. Results are written
// by index, so the output never depends on scheduling.
template <typename Job>
void parallel_for(std::size_t n, unsigned threads, Job job) {
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::uint64_t replication_seed(std::uint64_t root, std::size_t group, std::uint32_t rep) {
  return derive_seed(root, Stream::Instance, group * 1000003ULL + rep);
}

double ratio_or_nan(double num, double den) {
  if (num <= 0.0 || den <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return num / den;
}

StarTradeoffRow star_cell(const ExperimentSpec& spec, std::size_t alpha_index,
                          std::uint32_t capacity) {
  const double alpha = spec.alphas[alpha_index];
  const Catalog catalog = Catalog::zipf(spec.file_counts.front(), alpha);
  // One request per slot offline corresponds to unit total arrival rate online.
  const Catalog online_catalog = catalog.normalized();
  const DamagePolynomial f(spec.damage);
  StarTradeoffRow row;
  row.capacity = capacity;
  row.alpha = alpha;
  const auto reps = static_cast<double>(spec.replications);
  std::vector<std::uint64_t> seeds;
  for (std::uint32_t rep = 0; rep < spec.replications; ++rep) {
    const std::uint64_t seed = replication_seed(spec.seed, alpha_index, rep);
    seeds.push_back(seed);
    const RequestTrace trace = generate_trace(catalog, spec.slots, seed);
    const OfflineResult dare_star =
        simulate_offline_star(trace, capacity, OfflinePolicy::DareStar, f);
    const OfflineResult lru_star = simulate_offline_star(trace, capacity, OfflinePolicy::LruStar, f);
    const OfflineResult dare = simulate_offline(trace, capacity, OfflinePolicy::Dare, f);
    row.damage_dare_star += dare_star.damage / reps;
    row.miss_dare_star += dare_star.miss_fraction / reps;
    row.writes_dare_star += static_cast<double>(dare_star.writes.size()) / reps;
    row.writes_dare += static_cast<double>(dare.writes.size()) / reps;
    row.damage_lru_star += lru_star.damage / reps;
    row.miss_lru_star += lru_star.miss_fraction / reps;
  }
  auto online = [&](double epsilon, double& damage, double& miss) {
    if (!(epsilon > 0.0)) {
      damage = miss = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    for (std::uint64_t seed : seeds) {
      const PipelineResult r = dare_delta_pipeline(online_catalog, f, capacity, epsilon,
                                                   spec.cost_mode, spec.slots, seed);
      damage += r.report.total_damage / reps;
      miss += r.report.miss_fraction / reps;
    }
  };
  online(row.miss_dare_star, row.damage_online_dare_star, row.miss_online_dare_star);
  online(row.miss_lru_star, row.damage_online_lru_star, row.miss_online_lru_star);
  return row;
}

}  // namespace

std::vector<OfflineTradeoffRow> run_offline_tradeoff(const ExperimentSpec& spec) {
  spec.validate();
  const DamagePolynomial f(spec.damage);
  const std::size_t nb = spec.capacities.size();
  std::vector<OfflineTradeoffRow> rows(spec.alphas.size() * nb);
  parallel_for(rows.size(), spec.threads, [&](std::size_t cell) {
    const std::size_t ai = cell / nb;
    const std::uint32_t capacity = spec.capacities[cell % nb];
    const Catalog catalog = Catalog::zipf(spec.file_counts.front(), spec.alphas[ai]);
    OfflineTradeoffRow row;
    row.capacity = capacity;
    row.alpha = spec.alphas[ai];
    const auto reps = static_cast<double>(spec.replications);
    for (std::uint32_t rep = 0; rep < spec.replications; ++rep) {
      const RequestTrace trace =
          generate_trace(catalog, spec.slots, replication_seed(spec.seed, ai, rep));
      const OfflineResult fif = simulate_offline(trace, capacity, OfflinePolicy::Fif, f);
      const OfflineResult dare = dare_retentions(trace, fif, f);
      row.damage_fif += fif.damage / reps;
      row.damage_dare += dare.damage / reps;
      row.miss_fraction += fif.miss_fraction / reps;
    }
    row.savings = ratio_or_nan(row.damage_fif, row.damage_dare);
    rows[cell] = row;
  });
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.alpha != b.alpha ? a.alpha < b.alpha : a.capacity < b.capacity;
  });
  return rows;
}

std::vector<DeltaSweepRow> run_delta_sweep(const ExperimentSpec& spec) {
  spec.validate();
  require(!spec.alphas.empty(), "experiment.alphas must not be empty");
  const double alpha = spec.alphas.front();
  const std::size_t ne = spec.epsilons.size();
  const std::size_t nm = spec.file_counts.size();
  std::vector<DeltaSweepRow> rows(spec.degrees.size() * nm * ne);
  parallel_for(rows.size(), spec.threads, [&](std::size_t cell) {
    const unsigned degree = spec.degrees[cell / (nm * ne)];
    const std::uint32_t files = spec.file_counts[(cell / ne) % nm];
    const double epsilon = spec.epsilons[cell % ne];
    RetentionProblem problem{Catalog::zipf(files, alpha), DamagePolynomial::monomial(degree),
                             epsilon};
    rows[cell] = {degree, files, epsilon, solve_retention(problem).objective};
  });
  return rows;
}

std::vector<OnlineCompareRow> run_online_compare(const ExperimentSpec& spec) {
  spec.validate();
  const DamagePolynomial f(spec.damage);
  const std::vector<double> grid = spec.tau_grid.empty() ? default_tau_grid() : spec.tau_grid;
  const std::uint32_t capacity = spec.capacities.front();
  const std::size_t np = spec.policies.size();
  std::vector<OnlineCompareRow> rows(spec.alphas.size() * np);
  parallel_for(rows.size(), spec.threads, [&](std::size_t cell) {
    const std::size_t ai = cell / np;
    const EvictionRule rule = parse_eviction_rule(spec.policies[cell % np]);
    const Catalog catalog = Catalog::zipf(spec.file_counts.front(), spec.alphas[ai]);
    std::vector<std::uint64_t> seeds;
    for (std::uint32_t rep = 0; rep < spec.replications; ++rep) {
      seeds.push_back(replication_seed(spec.seed, ai, rep));
    }
    OnlineCompareRow row;
    row.policy = eviction_rule_name(rule);
    row.alpha = spec.alphas[ai];
    if (rule == EvictionRule::DareDelta) {
      row.tau = std::numeric_limits<double>::quiet_NaN();
      const auto reps = static_cast<double>(seeds.size());
      for (std::uint64_t seed : seeds) {
        const PipelineResult r = dare_delta_pipeline(catalog, f, capacity, spec.delta,
                                                     spec.cost_mode, spec.events, seed);
        row.damage += r.report.total_damage / reps;
        row.miss_fraction += r.report.miss_fraction / reps;
      }
    } else {
      const SweepResult s = sweep_deterministic_retention(catalog, f, capacity, rule, grid,
                                                          spec.events, seeds, spec.delta);
      row.tau = s.best_tau;
      row.damage = s.best_damage;
      row.miss_fraction = s.best_miss_fraction;
    }
    rows[cell] = row;
  });
  return rows;
}

std::vector<StarTradeoffRow> run_star_tradeoff(const ExperimentSpec& spec) {
  spec.validate();
  const std::size_t nb = spec.capacities.size();
  std::vector<StarTradeoffRow> rows(spec.alphas.size() * nb);
  parallel_for(rows.size(), spec.threads, [&](std::size_t cell) {
    rows[cell] = star_cell(spec, cell / nb, spec.capacities[cell % nb]);
  });
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.alpha != b.alpha ? a.alpha < b.alpha : a.capacity < b.capacity;
  });
  return rows;
}

std::vector<CompetitiveRatioRow> run_competitive_ratio(const ExperimentSpec& spec) {
  const std::vector<StarTradeoffRow> star = run_star_tradeoff(spec);
  std::vector<CompetitiveRatioRow> rows;
  rows.reserve(star.size());
  for (const auto& s : star) {
    CompetitiveRatioRow r;
    r.capacity = s.capacity;
    r.alpha = s.alpha;
    r.epsilon_dare_star = s.miss_dare_star;
    r.damage_dare_star = s.damage_dare_star;
    r.damage_online_dare_star = s.damage_online_dare_star;
    r.cr1 = ratio_or_nan(s.damage_dare_star, s.damage_online_dare_star);
    r.epsilon_lru_star = s.miss_lru_star;
    r.damage_lru_star = s.damage_lru_star;
    r.damage_online_lru_star = s.damage_online_lru_star;
    r.cr2 = ratio_or_nan(s.damage_lru_star, s.damage_online_lru_star);
    rows.push_back(r);
  }
  return rows;
}

namespace {

class LongFormat {
 public:
  LongFormat() : csv_({"figure", "series", "x", "y"}) {}
  void add(const std::string& figure, const std::string& series, double x, double y) {
    csv_.row({figure, series, csv_real(x), csv_real(y)});
  }
  std::string str() const { return csv_.str(); }

 private:
  CsvWriter csv_;
};

std::string alpha_tag(double alpha) { return "alpha=" + csv_real(alpha); }

}  // namespace

std::string run_experiment_csv(const ExperimentSpec& spec, bool plot_data) {
  switch (spec.id) {
    case ExperimentId::OfflineTradeoff: {
      const auto rows = run_offline_tradeoff(spec);
      if (plot_data) {
        LongFormat out;
        for (const auto& r : rows) {
          const double b = r.capacity;
          out.add("damage", "fif " + alpha_tag(r.alpha), b, r.damage_fif);
          out.add("damage", "dare " + alpha_tag(r.alpha), b, r.damage_dare);
          out.add("miss_fraction", alpha_tag(r.alpha), b, r.miss_fraction);
        }
        return out.str();
      }
      CsvWriter csv({"capacity", "alpha", "damage_fif", "damage_dare", "miss_fraction",
                     "savings"});
      for (const auto& r : rows) {
        csv.row({csv_int(r.capacity), csv_real(r.alpha), csv_real(r.damage_fif),
                 csv_real(r.damage_dare), csv_real(r.miss_fraction), csv_real(r.savings)});
      }
      return csv.str();
    }
    case ExperimentId::DeltaSweep: {
      const auto rows = run_delta_sweep(spec);
      if (plot_data) {
        LongFormat out;
        for (const auto& r : rows) {
          out.add("objective", "degree=" + std::to_string(r.degree) + " M=" +
                                   std::to_string(r.files), r.epsilon, r.objective);
        }
        return out.str();
      }
      CsvWriter csv({"degree", "files", "epsilon", "objective"});
      for (const auto& r : rows) {
        csv.row({csv_int(r.degree), csv_int(r.files), csv_real(r.epsilon),
                 csv_real(r.objective)});
      }
      return csv.str();
    }
    case ExperimentId::OnlineCompare: {
      const auto rows = run_online_compare(spec);
      if (plot_data) {
        LongFormat out;
        for (const auto& r : rows) out.add("damage", r.policy, r.alpha, r.damage);
        return out.str();
      }
      CsvWriter csv({"policy", "alpha", "tau", "damage", "miss_fraction"});
      for (const auto& r : rows) {
        csv.row({r.policy, csv_real(r.alpha), std::isnan(r.tau) ? "" : csv_real(r.tau),
                 csv_real(r.damage), csv_real(r.miss_fraction)});
      }
      return csv.str();
    }
    case ExperimentId::StarTradeoff: {
      const auto rows = run_star_tradeoff(spec);
      if (plot_data) {
        LongFormat out;
        for (const auto& r : rows) {
          const double b = r.capacity;
          const std::string a = " " + alpha_tag(r.alpha);
          out.add("offline", "dare* damage" + a, b, r.damage_dare_star);
          out.add("offline", "dare* miss" + a, b, r.miss_dare_star);
          out.add("offline", "lru* damage" + a, b, r.damage_lru_star);
          out.add("offline", "lru* miss" + a, b, r.miss_lru_star);
          out.add("online", "dare-delta(dare*) damage" + a, b, r.damage_online_dare_star);
          out.add("online", "dare-delta(dare*) miss" + a, b, r.miss_online_dare_star);
          out.add("online", "dare-delta(lru*) damage" + a, b, r.damage_online_lru_star);
          out.add("online", "dare-delta(lru*) miss" + a, b, r.miss_online_lru_star);
        }
        return out.str();
      }
      CsvWriter csv({"capacity", "alpha", "damage_dare_star", "miss_dare_star",
                     "writes_dare_star", "writes_dare", "damage_lru_star", "miss_lru_star",
                     "damage_online_dare_star", "miss_online_dare_star",
                     "damage_online_lru_star", "miss_online_lru_star"});
      for (const auto& r : rows) {
        csv.row({csv_int(r.capacity), csv_real(r.alpha), csv_real(r.damage_dare_star),
                 csv_real(r.miss_dare_star), csv_real(r.writes_dare_star),
                 csv_real(r.writes_dare), csv_real(r.damage_lru_star), csv_real(r.miss_lru_star),
                 csv_real(r.damage_online_dare_star), csv_real(r.miss_online_dare_star),
                 csv_real(r.damage_online_lru_star), csv_real(r.miss_online_lru_star)});
      }
      return csv.str();
    }
    case ExperimentId::CompetitiveRatio: {
      const auto rows = run_competitive_ratio(spec);
      if (plot_data) {
        LongFormat out;
        for (const auto& r : rows) {
          out.add("competitive_ratio", "cr1 " + alpha_tag(r.alpha), r.capacity, r.cr1);
          out.add("competitive_ratio", "cr2 " + alpha_tag(r.alpha), r.capacity, r.cr2);
        }
        return out.str();
      }
      CsvWriter csv({"capacity", "alpha", "epsilon_dare_star", "damage_dare_star",
                     "damage_online_dare_star", "cr1", "epsilon_lru_star", "damage_lru_star",
                     "damage_online_lru_star", "cr2"});
      for (const auto& r : rows) {
        csv.row({csv_int(r.capacity), csv_real(r.alpha), csv_real(r.epsilon_dare_star),
                 csv_real(r.damage_dare_star), csv_real(r.damage_online_dare_star),
                 csv_real(r.cr1), csv_real(r.epsilon_lru_star), csv_real(r.damage_lru_star),
                 csv_real(r.damage_online_lru_star), csv_real(r.cr2)});
      }
      return csv.str();
    }
  }
  return {};
}

}  // namespace dare
