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

#include "online.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "json.hpp"

#include "csv.hpp"
#include "error.hpp"
#include "rng.hpp"
#include "workload.hpp"

namespace dare {

const char* eviction_rule_name(EvictionRule rule) {
  switch (rule) {
    case EvictionRule::DareDelta: return "dare-delta";
    case EvictionRule::Lru: return "lru";
    case EvictionRule::Fifo: return "fifo";
    case EvictionRule::Random: return "rnd";
  }
  return "unknown";
}

EvictionRule parse_eviction_rule(std::string_view name) {
  if (name == "dare-delta" || name == "dare") return EvictionRule::DareDelta;
  if (name == "lru") return EvictionRule::Lru;
  if (name == "fifo") return EvictionRule::Fifo;
  if (name == "rnd" || name == "random") return EvictionRule::Random;
  fail(ErrorCode::InvalidArgument, "unknown eviction rule '" + std::string(name) + "'");
}

FileId dare_delta_victim(std::span<const double> scores, std::span<const FileId> cache,
                         FileId request) {
  FileId best = request;
  for (FileId u : cache) {
    const double su = scores[u - 1];
    const double sb = scores[best - 1];
    if (su < sb || (su == sb && best != request && u < best)) best = u;
  }
  return best;
}

std::vector<double> dare_delta_scores(const Catalog& catalog, const DamagePolynomial& damage,
                                      const RetentionSpec& retention, const CostModel& cost) {
  std::vector<double> scores(catalog.size());
  for (FileId m = 1; m <= catalog.size(); ++m) {
    double damage_term = 0.0;
    if (const auto* s = std::get_if<StochasticRetention>(&retention)) {
      damage_term = damage.expected_exponential(s->mu[m - 1]);
    } else {
      damage_term = damage(std::get<DeterministicRetention>(retention).tau);
    }
    scores[m - 1] = catalog.probability(m) * cost.cost(catalog, m, damage_term);
  }
  return scores;
}

namespace {

struct Expiry {
  double time;
  FileId file;
  std::uint64_t write_id;

  bool operator>(const Expiry& o) const {
    if (time != o.time) return time > o.time;
    return write_id > o.write_id;
  }
};

struct Slot {
  bool resident = false;
  double expiry = 0.0;
  double last_use = 0.0;
  std::uint64_t write_id = 0;
  std::size_t position = 0;
};

class OnlineSim {
 public:
  OnlineSim(const Catalog& catalog, const DamagePolynomial& damage, const OnlineConfig& config)
      : catalog_(catalog),
        damage_(damage),
        config_(config),
        slots_(catalog.size() + 1),
        retention_rng_(derive_seed(config.seed, Stream::Retention)),
        eviction_rng_(derive_seed(config.seed, Stream::Eviction)) {
    require(config.events >= 1, "online horizon must be >= 1 event");
    require(!config.capacity || *config.capacity >= 1, "cache capacity B must be >= 1");
    if (const auto* s = std::get_if<StochasticRetention>(&config.retention)) {
      require(s->mu.size() == catalog.size(),
              "retention rate vector has " + std::to_string(s->mu.size()) + " entries, expected " +
                  std::to_string(catalog.size()));
      for (double mu : s->mu) require(mu > 0.0, "retention rates must be > 0 (inf = never write)");
    } else {
      const double tau = std::get<DeterministicRetention>(config.retention).tau;
      require(std::isfinite(tau) && tau > 0.0, "deterministic retention tau must be > 0");
    }
    if (config.rule == EvictionRule::DareDelta) {
      scores_ = dare_delta_scores(catalog, damage, config.retention, config.cost);
    }
    report_.per_file.resize(catalog.size());
    report_.seed = config.seed;
  }

  SimReport run() {
    ArrivalStream arrivals(catalog_, config_.seed);
    for (std::uint64_t i = 0; i < config_.events; ++i) {
      const ArrivalEvent e = arrivals.next();
      expire_until(e.time);
      arrive(e);
      if (config_.capacity && cache_.size() > *config_.capacity) {
        throw std::logic_error("online cache exceeded its capacity");
      }
      report_.end_time = e.time;
    }
    report_.miss_fraction =
        static_cast<double>(report_.misses) / static_cast<double>(report_.requests);
    double delay = 0.0;
    for (FileId m = 1; m <= catalog_.size(); ++m) {
      delay += catalog_.delay(m) * static_cast<double>(report_.per_file[m - 1].misses);
    }
    report_.delay = delay / static_cast<double>(report_.requests);
    return std::move(report_);
  }

 private:
  void expire_until(double now) {
    while (!expiries_.empty() && expiries_.top().time <= now) {
      const Expiry x = expiries_.top();
      expiries_.pop();
      Slot& s = slots_[x.file];
      if (!s.resident || s.write_id != x.write_id) continue;
      remove(x.file);
      if (config_.record_events) {
        report_.log.push_back({x.time, EventKind::Expiry, x.file, false, 0, 0.0});
      }
    }
  }

  void remove(FileId f) {
    Slot& s = slots_[f];
    const std::size_t pos = s.position;
    cache_[pos] = cache_.back();
    slots_[cache_[pos]].position = pos;
    cache_.pop_back();
    s.resident = false;
  }

  std::optional<double> draw_retention(FileId f) {
    if (const auto* s = std::get_if<StochasticRetention>(&config_.retention)) {
      const double mu = s->mu[f - 1];
      if (std::isinf(mu)) return std::nullopt;
      return retention_rng_.exponential(mu);
    }
    return std::get<DeterministicRetention>(config_.retention).tau;
  }

  bool never_written(FileId f) const {
    if (const auto* s = std::get_if<StochasticRetention>(&config_.retention)) {
      return std::isinf(s->mu[f - 1]);
    }
    return false;
  }

  std::size_t pick_victim() {
    std::size_t best = 0;
    switch (config_.rule) {
      case EvictionRule::Lru:
        for (std::size_t i = 1; i < cache_.size(); ++i) {
          const Slot& a = slots_[cache_[i]];
          const Slot& b = slots_[cache_[best]];
          if (a.last_use < b.last_use || (a.last_use == b.last_use && cache_[i] < cache_[best])) {
            best = i;
          }
        }
        break;
      case EvictionRule::Fifo:
        for (std::size_t i = 1; i < cache_.size(); ++i) {
          if (slots_[cache_[i]].write_id < slots_[cache_[best]].write_id) best = i;
        }
        break;
      case EvictionRule::Random:
        best = static_cast<std::size_t>(eviction_rng_.index(cache_.size()));
        break;
      case EvictionRule::DareDelta:
        break;
    }
    return best;
  }

  void arrive(const ArrivalEvent& e) {
    const FileId r = e.file;
    FileStats& stats = report_.per_file[r - 1];
    ++report_.requests;
    ++stats.requests;
    Slot& s = slots_[r];
    if (s.resident) {
      s.last_use = e.time;
      if (config_.record_events) {
        report_.log.push_back({e.time, EventKind::Arrival, r, true, 0, 0.0});
      }
      return;
    }
    ++report_.misses;
    ++stats.misses;

    FileId victim = 0;
    if (never_written(r)) {
      victim = r;
    } else if (config_.capacity && cache_.size() >= *config_.capacity) {
      if (config_.rule == EvictionRule::DareDelta) {
        victim = dare_delta_victim(scores_, cache_, r);
      } else {
        victim = cache_[pick_victim()];
      }
    }
    if (victim == r) {
      ++report_.declined;
      if (config_.record_events) {
        report_.log.push_back({e.time, EventKind::Arrival, r, false, r, 0.0});
      }
      return;
    }
    if (victim != 0) {
      remove(victim);
      ++report_.evictions;
    }
    const double retention = *draw_retention(r);
    const double cost = damage_(retention);
    report_.total_damage += cost;
    stats.damage += cost;
    ++stats.writes;
    ++report_.writes;

    s.resident = true;
    s.expiry = e.time + retention;
    s.last_use = e.time;
    s.write_id = ++write_counter_;
    s.position = cache_.size();
    cache_.push_back(r);
    expiries_.push({s.expiry, r, s.write_id});
    if (config_.record_events) {
      report_.log.push_back({e.time, EventKind::Arrival, r, false, victim, cost});
    }
  }

  const Catalog& catalog_;
  const DamagePolynomial& damage_;
  const OnlineConfig& config_;
  std::vector<Slot> slots_;
  std::vector<FileId> cache_;
  std::vector<double> scores_;
  std::priority_queue<Expiry, std::vector<Expiry>, std::greater<>> expiries_;
  std::uint64_t write_counter_ = 0;
  Rng retention_rng_;
  Rng eviction_rng_;
  SimReport report_;
};

}  // namespace

SimReport run_online(const Catalog& catalog, const DamagePolynomial& damage,
                     const OnlineConfig& config) {
  return OnlineSim(catalog, damage, config).run();
}

std::string sim_report_csv(const SimReport& report) {
  CsvWriter csv({"kind", "file", "requests", "misses", "writes", "damage", "miss_fraction",
                 "evictions", "declined", "delay", "seed"});
  for (std::size_t i = 0; i < report.per_file.size(); ++i) {
    const FileStats& s = report.per_file[i];
    const double mf = s.requests ? static_cast<double>(s.misses) / static_cast<double>(s.requests)
                                 : 0.0;
    csv.row({"file", csv_int(i + 1), csv_int(s.requests), csv_int(s.misses), csv_int(s.writes),
             csv_real(s.damage), csv_real(mf), "", "", "", ""});
  }
  csv.row({"summary", "", csv_int(report.requests), csv_int(report.misses),
           csv_int(report.writes), csv_real(report.total_damage), csv_real(report.miss_fraction),
           csv_int(report.evictions), csv_int(report.declined), csv_real(report.delay),
           csv_int(report.seed)});
  return csv.str();
}

std::string sim_report_json(const SimReport& report) {
  nlohmann::ordered_json j;
  j["total_damage"] = report.total_damage;
  j["requests"] = report.requests;
  j["misses"] = report.misses;
  j["miss_fraction"] = report.miss_fraction;
  j["writes"] = report.writes;
  j["evictions"] = report.evictions;
  j["declined"] = report.declined;
  j["delay"] = report.delay;
  j["seed"] = report.seed;
  j["config"] = report.config_echo;
  auto& files = j["per_file"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < report.per_file.size(); ++i) {
    const FileStats& s = report.per_file[i];
    files.push_back({{"file", i + 1},
                     {"requests", s.requests},
                     {"misses", s.misses},
                     {"writes", s.writes},
                     {"damage", s.damage}});
  }
  return j.dump(2) + "\n";
}

std::string event_log_csv(const SimReport& report) {
  CsvWriter csv({"time", "event", "file", "hit", "victim", "damage"});
  for (const auto& e : report.log) {
    const bool arrival = e.kind == EventKind::Arrival;
    csv.row({csv_real(e.time), arrival ? "arrival" : "expiry", csv_int(e.file),
             arrival ? (e.hit ? "hit" : "miss") : "", e.victim ? csv_int(e.victim) : "",
             csv_real(e.damage)});
  }
  return csv.str();
}

SweepResult sweep_deterministic_retention(const Catalog& catalog, const DamagePolynomial& damage,
                                          std::optional<std::uint32_t> capacity,
                                          EvictionRule rule, std::span<const double> taus,
                                          std::uint64_t events,
                                          std::span<const std::uint64_t> seeds,
                                          std::optional<double> delay_budget) {
  require(!taus.empty(), "retention grid must not be empty");
  require(!seeds.empty(), "sweep needs at least one seed");
  require(rule != EvictionRule::DareDelta, "sweeps apply to LRU, FIFO and RND only");
  SweepResult out;
  for (double tau : taus) {
    SweepPoint point;
    point.tau = tau;
    for (std::uint64_t seed : seeds) {
      OnlineConfig cfg;
      cfg.capacity = capacity;
      cfg.rule = rule;
      cfg.retention = DeterministicRetention{tau};
      cfg.events = events;
      cfg.seed = seed;
      const SimReport r = run_online(catalog, damage, cfg);
      point.mean_damage += r.total_damage;
      point.mean_miss_fraction += r.miss_fraction;
      point.mean_delay += r.delay;
    }
    const auto n = static_cast<double>(seeds.size());
    point.mean_damage /= n;
    point.mean_miss_fraction /= n;
    point.mean_delay /= n;
    point.feasible = !delay_budget || point.mean_delay <= *delay_budget;
    out.grid.push_back(point);
  }
  const SweepPoint* best = nullptr;
  for (const auto& p : out.grid) {
    if (!p.feasible) continue;
    if (!best || p.mean_damage < best->mean_damage ||
        (p.mean_damage == best->mean_damage && p.tau < best->tau)) {
      best = &p;
    }
  }
  if (!best) {
    fail(ErrorCode::Infeasible, "no retention in the grid meets the delay budget " +
                                    csv_real(delay_budget.value_or(0.0)));
  }
  out.best_tau = best->tau;
  out.best_damage = best->mean_damage;
  out.best_miss_fraction = best->mean_miss_fraction;
  return out;
}

std::string sweep_csv(const SweepResult& result, EvictionRule rule) {
  CsvWriter csv({"rule", "tau", "mean_damage", "mean_miss_fraction", "mean_delay", "feasible",
                 "best"});
  for (const auto& p : result.grid) {
    csv.row({eviction_rule_name(rule), csv_real(p.tau), csv_real(p.mean_damage),
             csv_real(p.mean_miss_fraction), csv_real(p.mean_delay), p.feasible ? "1" : "0",
             p.tau == result.best_tau ? "1" : "0"});
  }
  return csv.str();
}

PipelineResult dare_delta_pipeline(const Catalog& catalog, const DamagePolynomial& damage,
                                   std::optional<std::uint32_t> capacity, double delay_budget,
                                   CostMode cost_mode, std::uint64_t events, std::uint64_t seed,
                                   double tolerance) {
  RetentionProblem problem{catalog, damage, delay_budget};
  PipelineResult out;
  out.solution = solve_retention(problem, tolerance);
  OnlineConfig cfg;
  cfg.capacity = capacity;
  cfg.rule = EvictionRule::DareDelta;
  cfg.retention = StochasticRetention{out.solution.mu};
  cfg.cost.mode = cost_mode;
  cfg.events = events;
  cfg.seed = seed;
  out.report = run_online(catalog, damage, cfg);
  return out;
}

SimulationCheck verify_by_simulation(const RetentionSolution& solution,
                                     const RetentionProblem& problem, std::uint64_t events,
                                     std::uint64_t seed) {
  OnlineConfig cfg;
  cfg.rule = EvictionRule::DareDelta;
  cfg.retention = StochasticRetention{solution.mu};
  cfg.events = events;
  cfg.seed = seed;
  const SimReport r = run_online(problem.catalog, problem.damage, cfg);
  return {r.miss_fraction, r.total_damage / static_cast<double>(r.requests)};
}

}  // namespace dare
