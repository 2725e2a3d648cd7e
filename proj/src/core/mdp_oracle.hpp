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
#include <span>
#include <string>
#include <vector>

#include "model.hpp"

namespace dare {

inline constexpr std::uint32_t kMdpMaxFiles = 4;
inline constexpr std::uint32_t kMdpMaxCapacity = 2;

/// Discrete-time chain obtained by uniformizing arrivals (rates lambda) and
/// retention expiries (rates mu) with the total rate sum(lambda + mu).
struct UniformizedChain {
  std::vector<double> lambda;
  std::vector<double> mu;
  std::uint32_t capacity = 0;
  /// lambda_r / sum(lambda + mu)
  std::vector<double> arrival_prob;
  /// mu_d / sum(lambda + mu)
  std::vector<double> departure_prob;

  static UniformizedChain build(std::span<const double> lambda, std::span<const double> mu,
                                std::uint32_t capacity);

  std::uint32_t files() const { return static_cast<std::uint32_t>(lambda.size()); }
};

/// One full-cache miss state and the victims that attain the minimum
/// expected cost-to-go there.
struct VictimDecision {
  std::uint32_t steps_to_go = 0;
  std::vector<FileId> cache;
  FileId request = 0;
  std::vector<FileId> optimal_victims;
  /// argmin over S + r of p_u c(u).
  FileId rule_victim = 0;
  bool rule_is_optimal = false;
};

struct MdpOracleResult {
  std::vector<VictimDecision> decisions;

  bool all_agree() const;
};

/// Finite-horizon value iteration over arrival states (S, r) and departure
/// states (S, d). A departure of a file that is not cached leaves the state
/// unchanged. Terminal values: c(r) for a missed request, 0 otherwise.
/// Returns the optimal victim sets at every full-cache miss state for every
/// step 1..horizon. Throws TooLarge beyond kMdpMaxFiles / kMdpMaxCapacity.
MdpOracleResult value_iteration_oracle(const UniformizedChain& chain, std::span<const double> cost,
                                       std::uint32_t horizon);

std::string mdp_oracle_csv(const MdpOracleResult& result);

}  // namespace dare
