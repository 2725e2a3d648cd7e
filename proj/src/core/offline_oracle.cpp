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

#include "offline_oracle.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <limits>
#include <unordered_map>

#include "error.hpp"

namespace dare {

namespace {

// Residents are stored per local file index as (write slot + 1); 0 = absent.
using Residency = std::array<std::uint8_t, kOracleMaxFiles>;

struct Value {
  std::uint64_t misses = std::numeric_limits<std::uint64_t>::max();
  double damage = 0.0;

  bool operator<(const Value& o) const {
    if (misses != o.misses) return misses < o.misses;
    return damage < o.damage;
  }
};

struct Choice {
  int victim = -1;
  unsigned drop_mask = 0;
};

class Search {
 public:
  Search(const RequestTrace& trace, std::uint32_t capacity, const DamagePolynomial& damage)
      : trace_(trace), capacity_(capacity), damage_(damage) {
    for (FileId f : trace.initial_cache) local(f);
    for (FileId f : trace.requests) local(f);
  }

  BruteForceResult run() {
    require(trace_.initial_cache.size() <= capacity_,
            "initial cache holds more files than the capacity");
    Residency start{};
    for (FileId f : trace_.initial_cache) start[local(f)] = 1;
    Choice first;
    const Value best = drop_step(0, start, &first);

    BruteForceResult out;
    out.min_misses = best.misses;
    out.min_damage = best.damage;
    replay(start, first);
    out.assignment = std::move(assignment_);
    return out;
  }

 private:
  std::size_t local(FileId f) {
    auto it = std::find(files_.begin(), files_.end(), f);
    if (it != files_.end()) return static_cast<std::size_t>(it - files_.begin());
    if (files_.size() == kOracleMaxFiles) {
      fail(ErrorCode::TooLarge, "oracle instance has more than " +
                                    std::to_string(kOracleMaxFiles) + " distinct files");
    }
    files_.push_back(f);
    return files_.size() - 1;
  }

  double f(std::uint64_t retention) const { return damage_(static_cast<double>(retention)); }

  static std::uint64_t key(std::uint64_t t, const Residency& s) {
    std::uint64_t k = t;
    for (std::uint8_t v : s) k = k * 16 + v;
    return k;
  }

  std::size_t count(const Residency& s) const {
    return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](auto v) { return v; }));
  }

  // Residents after the drop decision at the end of slot t.
  Value after_drop(std::uint64_t t, const Residency& s) {
    const std::uint64_t T = trace_.horizon();
    if (t == T) {
      Value v{0, 0.0};
      for (std::uint8_t w : s) {
        if (w) v.damage += f(T + 1 - (w - 1u));
      }
      return v;
    }
    const std::uint64_t k = key(t, s);
    if (auto it = memo_.find(k); it != memo_.end()) return it->second.first;

    const std::uint64_t slot = t + 1;
    const std::size_t r = index_of(trace_.at(slot));
    Value best;
    Choice choice;
    if (s[r]) {
      Choice inner;
      best = drop_step(slot, s, &inner);
      choice.drop_mask = inner.drop_mask;
    } else if (count(s) < capacity_) {
      Residency next = s;
      next[r] = static_cast<std::uint8_t>(slot + 1);
      Choice inner;
      best = drop_step(slot, next, &inner);
      best.misses += 1;
      choice.drop_mask = inner.drop_mask;
    } else {
      for (std::size_t v = 0; v < files_.size(); ++v) {
        if (!s[v]) continue;
        Residency next = s;
        const double evict_cost = f(slot - (s[v] - 1u));
        next[v] = 0;
        next[r] = static_cast<std::uint8_t>(slot + 1);
        Choice inner;
        Value candidate = drop_step(slot, next, &inner);
        candidate.misses += 1;
        candidate.damage += evict_cost;
        if (candidate < best) {
          best = candidate;
          choice.victim = static_cast<int>(v);
          choice.drop_mask = inner.drop_mask;
        }
      }
    }
    memo_.emplace(k, std::make_pair(best, choice));
    return best;
  }

  // Drop any subset of residents at the end of slot t.
  Value drop_step(std::uint64_t t, const Residency& s, Choice* choice) {
    std::vector<std::size_t> present;
    for (std::size_t i = 0; i < files_.size(); ++i) {
      if (s[i]) present.push_back(i);
    }
    Value best;
    for (unsigned mask = 0; mask < (1u << present.size()); ++mask) {
      Residency next = s;
      double cost = 0.0;
      for (std::size_t b = 0; b < present.size(); ++b) {
        if (mask & (1u << b)) {
          cost += f(t - (s[present[b]] - 1u) + 1);
          next[present[b]] = 0;
        }
      }
      Value candidate = after_drop(t, next);
      candidate.damage += cost;
      if (candidate < best) {
        best = candidate;
        choice->drop_mask = mask;
      }
    }
    return best;
  }

  std::size_t index_of(FileId f) const {
    return static_cast<std::size_t>(std::find(files_.begin(), files_.end(), f) - files_.begin());
  }

  void close(std::size_t i, std::uint64_t write_slot, std::uint64_t retention,
             std::optional<std::uint64_t> evicted) {
    assignment_.push_back({files_[i], write_slot, retention, evicted});
  }

  void apply_drops(std::uint64_t t, Residency& s, unsigned mask) {
    std::size_t b = 0;
    for (std::size_t i = 0; i < files_.size(); ++i) {
      if (!s[i]) continue;
      if (mask & (1u << b)) {
        const std::uint64_t w = s[i] - 1u;
        close(i, w, t - w + 1, std::nullopt);
        s[i] = 0;
      }
      ++b;
    }
  }

  void replay(Residency s, Choice first) {
    apply_drops(0, s, first.drop_mask);
    const std::uint64_t T = trace_.horizon();
    for (std::uint64_t t = 0; t < T; ++t) {
      after_drop(t, s);
      const Choice c = memo_.at(key(t, s)).second;
      const std::uint64_t slot = t + 1;
      const std::size_t r = index_of(trace_.at(slot));
      if (!s[r]) {
        if (c.victim >= 0) {
          const auto v = static_cast<std::size_t>(c.victim);
          const std::uint64_t w = s[v] - 1u;
          close(v, w, slot - w, slot);
          s[v] = 0;
        }
        s[r] = static_cast<std::uint8_t>(slot + 1);
      }
      apply_drops(slot, s, c.drop_mask);
    }
    for (std::size_t i = 0; i < files_.size(); ++i) {
      if (s[i]) close(i, s[i] - 1u, T + 1 - (s[i] - 1u), std::nullopt);
    }
    std::sort(assignment_.begin(), assignment_.end(), [](const auto& a, const auto& b) {
      return a.write_slot != b.write_slot ? a.write_slot < b.write_slot : a.file < b.file;
    });
  }

  const RequestTrace& trace_;
  std::uint32_t capacity_;
  const DamagePolynomial& damage_;
  std::vector<FileId> files_;
  std::unordered_map<std::uint64_t, std::pair<Value, Choice>> memo_;
  std::vector<WriteRecord> assignment_;
};

void check_bounds(const RequestTrace& trace, std::uint32_t capacity) {
  require(capacity >= 1, "cache capacity B must be >= 1");
  if (trace.horizon() > kOracleMaxSlots) {
    fail(ErrorCode::TooLarge, "oracle instance has T=" + std::to_string(trace.horizon()) +
                                  " > " + std::to_string(kOracleMaxSlots) + " slots");
  }
}

std::uint64_t min_misses_dfs(const RequestTrace& trace, std::uint32_t capacity,
                             std::uint64_t slot, std::vector<FileId>& cache) {
  if (slot > trace.horizon()) return 0;
  const FileId r = trace.at(slot);
  if (std::find(cache.begin(), cache.end(), r) != cache.end()) {
    return min_misses_dfs(trace, capacity, slot + 1, cache);
  }
  if (cache.size() < capacity) {
    cache.push_back(r);
    const std::uint64_t v = 1 + min_misses_dfs(trace, capacity, slot + 1, cache);
    cache.pop_back();
    return v;
  }
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t i = 0; i < cache.size(); ++i) {
    const FileId evicted = cache[i];
    cache[i] = r;
    best = std::min(best, 1 + min_misses_dfs(trace, capacity, slot + 1, cache));
    cache[i] = evicted;
  }
  return best;
}

}  // namespace

BruteForceResult brute_force_min_damage(const RequestTrace& trace, std::uint32_t capacity,
                                        const DamagePolynomial& damage) {
  check_bounds(trace, capacity);
  return Search(trace, capacity, damage).run();
}

std::uint64_t brute_force_min_misses(const RequestTrace& trace, std::uint32_t capacity) {
  check_bounds(trace, capacity);
  require(trace.initial_cache.size() <= capacity,
          "initial cache holds more files than the capacity");
  std::vector<FileId> cache = trace.initial_cache;
  return min_misses_dfs(trace, capacity, 1, cache);
}

}  // namespace dare
