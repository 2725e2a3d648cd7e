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
#include <string>
#include <string_view>
#include <vector>

#include "model.hpp"
#include "workload.hpp"

namespace dare {

enum class OfflinePolicy {
  Lru,
  Fifo,
  Random,
  Fif,
  Dare,
  DareStar,
  FifStar,
  LruStar,
};

const char* offline_policy_name(OfflinePolicy policy);
OfflinePolicy parse_offline_policy(std::string_view name);
bool is_star_policy(OfflinePolicy policy);

/// One write of `file` at `write_slot`; resident over
/// [write_slot, write_slot + retention - 1].
struct WriteRecord {
  FileId file = 0;
  std::uint64_t write_slot = 0;
  std::uint64_t retention = 1;
  /// Slot of the miss that evicted it; nullopt if it survives the horizon.
  std::optional<std::uint64_t> evicted_slot;
};

struct Eviction {
  std::uint64_t slot = 0;
  FileId file = 0;

  friend bool operator==(const Eviction&, const Eviction&) = default;
};

struct OfflineResult {
  OfflinePolicy policy = OfflinePolicy::Fif;
  std::uint32_t capacity = 0;
  std::uint64_t horizon = 0;
  std::uint64_t trace_digest = 0;
  std::uint64_t misses = 0;
  std::vector<Eviction> evictions;
  std::vector<WriteRecord> writes;
  /// hits[t-1] != 0 iff slot t was a hit.
  std::vector<std::uint8_t> hits;
  double damage = 0.0;
  double miss_fraction = 0.0;
};

/// FNV-1a over the request string and the initial cache.
std::uint64_t trace_digest(const RequestTrace& trace);

/// Slotted simulation with cache-miss allocation. Baseline retention is the
/// time a write stays resident: eviction slot minus write slot, or up to the
/// end of the horizon. `seed` is required for Random.
OfflineResult simulate_offline(const RequestTrace& trace, std::uint32_t capacity,
                               OfflinePolicy policy, const DamagePolynomial& damage,
                               std::optional<std::uint64_t> seed = std::nullopt);

/// DARE: keeps FiF's eviction sequence and shrinks every write to end at the
/// last slot in which that write served a request.
OfflineResult dare_retentions(const RequestTrace& trace, const OfflineResult& fif,
                              const DamagePolynomial& damage);

/// Variants that may decline to cache the request on a full-cache miss:
/// FiF* and DARE* when the request is the farthest-in-future candidate, LRU*
/// when it is the least recently used one.
OfflineResult simulate_offline_star(const RequestTrace& trace, std::uint32_t capacity,
                                    OfflinePolicy policy, const DamagePolynomial& damage,
                                    std::optional<std::uint64_t> seed = std::nullopt);

/// Retention for every write, i.e. the shortest window covering each hit.
std::vector<std::uint64_t> useful_retentions(const RequestTrace& trace,
                                             const std::vector<WriteRecord>& writes);

/// One row per write, then a summary row.
std::string offline_result_csv(const OfflineResult& result, const DamagePolynomial& damage);

}  // namespace dare
