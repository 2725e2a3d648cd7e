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

#include "offline.hpp"

#include <algorithm>
#include <limits>

#include "csv.hpp"
#include "error.hpp"
#include "rng.hpp"

namespace dare {

const char* offline_policy_name(OfflinePolicy policy) {
  switch (policy) {
    case OfflinePolicy::Lru: return "lru";
    case OfflinePolicy::Fifo: return "fifo";
    case OfflinePolicy::Random: return "rnd";
    case OfflinePolicy::Fif: return "fif";
    case OfflinePolicy::Dare: return "dare";
    case OfflinePolicy::DareStar: return "dare*";
    case OfflinePolicy::FifStar: return "fif*";
    case OfflinePolicy::LruStar: return "lru*";
  }
  return "unknown";
}

OfflinePolicy parse_offline_policy(std::string_view name) {
  for (auto p : {OfflinePolicy::Lru, OfflinePolicy::Fifo, OfflinePolicy::Random,
                 OfflinePolicy::Fif, OfflinePolicy::Dare, OfflinePolicy::DareStar,
                 OfflinePolicy::FifStar, OfflinePolicy::LruStar}) {
    if (name == offline_policy_name(p)) return p;
  }
  if (name == "random") return OfflinePolicy::Random;
  if (name == "dare-star") return OfflinePolicy::DareStar;
  if (name == "fif-star") return OfflinePolicy::FifStar;
  if (name == "lru-star") return OfflinePolicy::LruStar;
  fail(ErrorCode::InvalidArgument, "unknown offline policy '" + std::string(name) + "'");
}

bool is_star_policy(OfflinePolicy policy) {
  return policy == OfflinePolicy::DareStar || policy == OfflinePolicy::FifStar ||
         policy == OfflinePolicy::LruStar;
}

std::uint64_t trace_digest(const RequestTrace& trace) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xFF;
      h *= 0x100000001b3ULL;
    }
  };
  mix(trace.files);
  mix(trace.requests.size());
  for (FileId id : trace.requests) mix(id);
  mix(trace.initial_cache.size());
  for (FileId id : trace.initial_cache) mix(id);
  return h;
}

namespace {

constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

struct Resident {
  FileId file;
  std::uint64_t last_use;
  std::uint64_t order;
  std::size_t record;
};

enum class Victim { Fif, Lru, Fifo, Random };

class SlottedEngine {
 public:
  SlottedEngine(const RequestTrace& trace, std::uint32_t capacity, OfflinePolicy policy,
                bool optional_allocation, Victim rule, std::optional<std::uint64_t> seed)
      : trace_(trace),
        capacity_(capacity),
        optional_(optional_allocation),
        rule_(rule),
        slot_of_(trace.files + 1, kAbsent),
        next_req_(trace.files + 1, kNever),
        prev_req_(trace.files + 1, 0),
        rng_(seed ? derive_seed(*seed, Stream::Eviction) : 0) {
    result_.policy = policy;
    result_.capacity = capacity;
    result_.horizon = trace.horizon();
    result_.trace_digest = trace_digest(trace);
    result_.hits.assign(trace.horizon(), 0);

    const std::uint64_t T = trace.horizon();
    next_pos_.assign(T + 1, kNever);
    std::vector<std::uint64_t> upcoming(trace.files + 1, kNever);
    for (std::uint64_t t = T; t >= 1; --t) {
      const FileId r = trace.at(t);
      next_pos_[t] = upcoming[r];
      upcoming[r] = t;
    }
    next_req_ = upcoming;
  }

  OfflineResult run() {
    require(trace_.initial_cache.size() <= capacity_,
            "initial cache holds more files than the capacity");
    for (FileId f : trace_.initial_cache) insert(f, 0);
    const std::uint64_t T = trace_.horizon();
    for (std::uint64_t t = 1; t <= T; ++t) step(t);
    for (const Resident& res : residents_) {
      WriteRecord& w = result_.writes[res.record];
      w.retention = T + 1 - w.write_slot;
    }
    result_.miss_fraction = static_cast<double>(result_.misses) / static_cast<double>(T);
    return std::move(result_);
  }

 private:
  static constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();

  void insert(FileId f, std::uint64_t t) {
    result_.writes.push_back({f, t, 1, std::nullopt});
    slot_of_[f] = residents_.size();
    residents_.push_back({f, t, order_++, result_.writes.size() - 1});
  }

  void evict(std::size_t idx, std::uint64_t t) {
    Resident victim = residents_[idx];
    WriteRecord& w = result_.writes[victim.record];
    w.evicted_slot = t;
    w.retention = t - w.write_slot;
    result_.evictions.push_back({t, victim.file});
    slot_of_[victim.file] = kAbsent;
    residents_[idx] = residents_.back();
    residents_.pop_back();
    if (idx < residents_.size()) slot_of_[residents_[idx].file] = idx;
  }

  // Key to maximize when choosing a victim; ties go to the smaller file id.
  std::uint64_t fif_key(FileId f) const { return next_req_[f]; }

  bool better_victim(std::uint64_t key_a, FileId a, std::uint64_t key_b, FileId b,
                     bool maximize) const {
    if (key_a != key_b) return maximize ? key_a > key_b : key_a < key_b;
    return a < b;
  }

  void step(std::uint64_t t) {
    const FileId r = trace_.at(t);
    const std::uint64_t request_next = next_pos_[t];
    next_req_[r] = request_next;
    const std::uint64_t request_prev = prev_req_[r];
    prev_req_[r] = t;

    if (slot_of_[r] != kAbsent) {
      residents_[slot_of_[r]].last_use = t;
      result_.hits[t - 1] = 1;
      return;
    }
    ++result_.misses;
    if (residents_.size() < capacity_) {
      insert(r, t);
      return;
    }

    std::size_t best = 0;
    switch (rule_) {
      case Victim::Fif:
        for (std::size_t i = 1; i < residents_.size(); ++i) {
          const auto& a = residents_[i];
          const auto& b = residents_[best];
          if (better_victim(fif_key(a.file), a.file, fif_key(b.file), b.file, true)) best = i;
        }
        if (optional_ && request_next >= fif_key(residents_[best].file)) return;
        break;
      case Victim::Lru:
        for (std::size_t i = 1; i < residents_.size(); ++i) {
          const auto& a = residents_[i];
          const auto& b = residents_[best];
          if (better_victim(a.last_use, a.file, b.last_use, b.file, false)) best = i;
        }
        if (optional_ && request_prev <= residents_[best].last_use) return;
        break;
      case Victim::Fifo:
        for (std::size_t i = 1; i < residents_.size(); ++i) {
          if (residents_[i].order < residents_[best].order) best = i;
        }
        break;
      case Victim::Random:
        best = static_cast<std::size_t>(rng_.index(residents_.size()));
        break;
    }
    evict(best, t);
    insert(r, t);
  }

  const RequestTrace& trace_;
  std::uint32_t capacity_;
  bool optional_;
  Victim rule_;
  std::vector<Resident> residents_;
  std::vector<std::size_t> slot_of_;
  std::vector<std::uint64_t> next_pos_;
  std::vector<std::uint64_t> next_req_;
  std::vector<std::uint64_t> prev_req_;
  std::uint64_t order_ = 0;
  Rng rng_;
  OfflineResult result_;
};

double total_damage(const std::vector<WriteRecord>& writes, const DamagePolynomial& damage) {
  double sum = 0.0;
  for (const auto& w : writes) sum += damage(static_cast<double>(w.retention));
  return sum;
}

OfflineResult apply_useful_retentions(const RequestTrace& trace, OfflineResult base,
                                      OfflinePolicy tag, const DamagePolynomial& damage) {
  const auto retentions = useful_retentions(trace, base.writes);
  for (std::size_t i = 0; i < base.writes.size(); ++i) base.writes[i].retention = retentions[i];
  base.policy = tag;
  base.damage = total_damage(base.writes, damage);
  return base;
}

}  // namespace

std::vector<std::uint64_t> useful_retentions(const RequestTrace& trace,
                                             const std::vector<WriteRecord>& writes) {
  std::vector<std::vector<std::uint64_t>> occurrences(trace.files + 1);
  for (std::uint64_t t = 1; t <= trace.horizon(); ++t) occurrences[trace.at(t)].push_back(t);

  std::vector<std::uint64_t> out;
  out.reserve(writes.size());
  for (const auto& w : writes) {
    const std::uint64_t end = w.evicted_slot ? *w.evicted_slot : trace.horizon() + 1;
    const auto& occ = occurrences[w.file];
    // Last request strictly before `end`; it falls inside the resident window
    // only if it is not earlier than the write itself.
    auto it = std::lower_bound(occ.begin(), occ.end(), end);
    std::uint64_t retention = 1;
    if (it != occ.begin()) {
      const std::uint64_t last = *std::prev(it);
      if (last >= w.write_slot) retention = std::max<std::uint64_t>(1, last - w.write_slot + 1);
    }
    out.push_back(retention);
  }
  return out;
}

OfflineResult simulate_offline(const RequestTrace& trace, std::uint32_t capacity,
                               OfflinePolicy policy, const DamagePolynomial& damage,
                               std::optional<std::uint64_t> seed) {
  require(capacity >= 1, "cache capacity B must be >= 1");
  if (is_star_policy(policy)) return simulate_offline_star(trace, capacity, policy, damage, seed);
  Victim rule = Victim::Fif;
  switch (policy) {
    case OfflinePolicy::Lru: rule = Victim::Lru; break;
    case OfflinePolicy::Fifo: rule = Victim::Fifo; break;
    case OfflinePolicy::Random:
      require(seed.has_value(), "RND eviction needs an explicit seed");
      rule = Victim::Random;
      break;
    case OfflinePolicy::Fif:
    case OfflinePolicy::Dare: rule = Victim::Fif; break;
    default: break;
  }
  OfflineResult fif =
      SlottedEngine(trace, capacity, OfflinePolicy::Fif, false, rule, seed).run();
  fif.policy = policy == OfflinePolicy::Dare ? OfflinePolicy::Fif : policy;
  fif.damage = total_damage(fif.writes, damage);
  if (policy == OfflinePolicy::Dare) return dare_retentions(trace, fif, damage);
  return fif;
}

OfflineResult dare_retentions(const RequestTrace& trace, const OfflineResult& fif,
                              const DamagePolynomial& damage) {
  require(fif.policy == OfflinePolicy::Fif,
          std::string("DARE needs a FiF result, got ") + offline_policy_name(fif.policy));
  require(fif.trace_digest == trace_digest(trace) && fif.horizon == trace.horizon(),
          "FiF result was produced from a different trace");
  return apply_useful_retentions(trace, fif, OfflinePolicy::Dare, damage);
}

OfflineResult simulate_offline_star(const RequestTrace& trace, std::uint32_t capacity,
                                    OfflinePolicy policy, const DamagePolynomial& damage,
                                    std::optional<std::uint64_t> seed) {
  require(capacity >= 1, "cache capacity B must be >= 1");
  require(is_star_policy(policy), std::string("not a star policy: ") + offline_policy_name(policy));
  const Victim rule = policy == OfflinePolicy::LruStar ? Victim::Lru : Victim::Fif;
  OfflineResult base = SlottedEngine(trace, capacity, policy, true, rule, seed).run();
  if (policy == OfflinePolicy::DareStar) {
    return apply_useful_retentions(trace, std::move(base), OfflinePolicy::DareStar, damage);
  }
  base.damage = total_damage(base.writes, damage);
  return base;
}

std::string offline_result_csv(const OfflineResult& result, const DamagePolynomial& damage) {
  CsvWriter csv({"kind", "file", "write_slot", "retention", "evicted_slot", "damage", "misses",
                 "miss_fraction"});
  for (const auto& w : result.writes) {
    csv.row({"write", csv_int(w.file), csv_int(w.write_slot), csv_int(w.retention),
             w.evicted_slot ? csv_int(*w.evicted_slot) : std::string(),
             csv_real(damage(static_cast<double>(w.retention))), "", ""});
  }
  csv.row({"summary", "", "", "", "", csv_real(result.damage), csv_int(result.misses),
           csv_real(result.miss_fraction)});
  return csv.str();
}

}  // namespace dare
