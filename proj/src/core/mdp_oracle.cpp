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

#include "mdp_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csv.hpp"
#include "error.hpp"
#include "online.hpp"

namespace dare {

UniformizedChain UniformizedChain::build(std::span<const double> lambda,
                                         std::span<const double> mu, std::uint32_t capacity) {
  require(!lambda.empty() && lambda.size() == mu.size(),
          "chain needs matching, non-empty arrival and retention rate vectors");
  require(capacity >= 1, "cache capacity B must be >= 1");
  UniformizedChain c;
  c.lambda.assign(lambda.begin(), lambda.end());
  c.mu.assign(mu.begin(), mu.end());
  c.capacity = capacity;
  double total = 0.0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    require(lambda[i] > 0.0 && std::isfinite(lambda[i]), "arrival rates must be positive");
    require(mu[i] > 0.0 && std::isfinite(mu[i]), "retention rates must be positive and finite");
    total += lambda[i] + mu[i];
  }
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    c.arrival_prob.push_back(lambda[i] / total);
    c.departure_prob.push_back(mu[i] / total);
  }
  return c;
}

bool MdpOracleResult::all_agree() const {
  return std::all_of(decisions.begin(), decisions.end(),
                     [](const VictimDecision& d) { return d.rule_is_optimal; });
}

MdpOracleResult value_iteration_oracle(const UniformizedChain& chain, std::span<const double> cost,
                                       std::uint32_t horizon) {
  const std::uint32_t M = chain.files();
  if (M > kMdpMaxFiles || chain.capacity > kMdpMaxCapacity) {
    fail(ErrorCode::TooLarge, "value iteration oracle supports M <= " +
                                  std::to_string(kMdpMaxFiles) + " and B <= " +
                                  std::to_string(kMdpMaxCapacity));
  }
  require(cost.size() == M, "cost vector length must equal the number of files");
  require(horizon >= 1, "oracle horizon must be >= 1");

  const unsigned masks = 1u << M;
  auto in = [](unsigned S, std::uint32_t f) { return (S >> f) & 1u; };
  auto size = [](unsigned S) { return static_cast<std::uint32_t>(__builtin_popcount(S)); };

  // arrival[S * M + r], departure[S * M + d]
  std::vector<double> arrival(masks * M, 0.0);
  std::vector<double> departure(masks * M, 0.0);
  for (unsigned S = 0; S < masks; ++S) {
    for (std::uint32_t r = 0; r < M; ++r) arrival[S * M + r] = in(S, r) ? 0.0 : cost[r];
  }

  std::vector<double> scores(M);
  for (std::uint32_t u = 0; u < M; ++u) scores[u] = chain.arrival_prob[u] * cost[u];

  MdpOracleResult result;
  std::vector<double> next_arrival(arrival.size());
  std::vector<double> next_departure(departure.size());
  for (std::uint32_t step = 1; step <= horizon; ++step) {
    auto continuation = [&](unsigned S) {
      double v = 0.0;
      for (std::uint32_t f = 0; f < M; ++f) {
        v += chain.arrival_prob[f] * arrival[S * M + f];
        v += chain.departure_prob[f] * departure[S * M + f];
      }
      return v;
    };
    for (unsigned S = 0; S < masks; ++S) {
      if (size(S) > chain.capacity) continue;
      for (std::uint32_t r = 0; r < M; ++r) {
        double value = 0.0;
        if (in(S, r)) {
          value = continuation(S);
        } else if (size(S) < chain.capacity) {
          value = cost[r] + continuation(S | (1u << r));
        } else {
          const unsigned with_request = S | (1u << r);
          std::vector<std::pair<std::uint32_t, double>> options;
          double best = std::numeric_limits<double>::infinity();
          for (std::uint32_t u = 0; u < M; ++u) {
            if (!in(with_request, u)) continue;
            const double v = continuation(with_request & ~(1u << u));
            options.emplace_back(u, v);
            best = std::min(best, v);
          }
          value = cost[r] + best;

          VictimDecision d;
          d.steps_to_go = step;
          d.request = r + 1;
          for (std::uint32_t f = 0; f < M; ++f) {
            if (in(S, f)) d.cache.push_back(f + 1);
          }
          const double tie = 1e-12 * std::max(1.0, std::abs(best));
          for (const auto& [u, v] : options) {
            if (v - best <= tie) d.optimal_victims.push_back(u + 1);
          }
          d.rule_victim = dare_delta_victim(scores, d.cache, d.request);
          d.rule_is_optimal = std::find(d.optimal_victims.begin(), d.optimal_victims.end(),
                                        d.rule_victim) != d.optimal_victims.end();
          result.decisions.push_back(std::move(d));
        }
        next_arrival[S * M + r] = value;
      }
      for (std::uint32_t d = 0; d < M; ++d) {
        next_departure[S * M + d] = continuation(S & ~(1u << d));
      }
    }
    arrival.swap(next_arrival);
    departure.swap(next_departure);
  }
  return result;
}

std::string mdp_oracle_csv(const MdpOracleResult& result) {
  auto join = [](const std::vector<FileId>& ids) {
    std::string s;
    for (FileId f : ids) {
      if (!s.empty()) s += ' ';
      s += std::to_string(f);
    }
    return s;
  };
  CsvWriter csv({"steps_to_go", "cache", "request", "optimal_victims", "rule_victim",
                 "rule_is_optimal"});
  for (const auto& d : result.decisions) {
    csv.row({csv_int(d.steps_to_go), join(d.cache), csv_int(d.request), join(d.optimal_victims),
             csv_int(d.rule_victim), d.rule_is_optimal ? "1" : "0"});
  }
  return csv.str();
}

}  // namespace dare
