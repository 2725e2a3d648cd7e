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
#include <vector>

#include "model.hpp"
#include "offline.hpp"
#include "workload.hpp"

namespace dare {

/// Enumeration bounds for the exhaustive offline searches.
inline constexpr std::uint64_t kOracleMaxSlots = 10;
inline constexpr std::size_t kOracleMaxFiles = 6;

struct BruteForceResult {
  std::uint64_t min_misses = 0;
  double min_damage = 0.0;
  /// One feasible assignment attaining (min_misses, min_damage).
  std::vector<WriteRecord> assignment;
};

/// Exhaustive search over every miss-allocating schedule: at each full-cache
/// miss any resident may be evicted, and at the end of every slot any subset
/// of residents may be dropped (a write's retention ends when it leaves).
/// Minimizes misses first, then total damage. Throws TooLarge beyond
/// kOracleMaxSlots slots or kOracleMaxFiles distinct files.
BruteForceResult brute_force_min_damage(const RequestTrace& trace, std::uint32_t capacity,
                                        const DamagePolynomial& damage);

/// Minimum miss count over all demand-paging eviction sequences, by plain
/// depth-first enumeration of every victim choice.
std::uint64_t brute_force_min_misses(const RequestTrace& trace, std::uint32_t capacity);

}  // namespace dare
