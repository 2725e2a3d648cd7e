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

#include <algorithm>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "error.hpp"
#include "mdp_oracle.hpp"

using namespace dare;

TEST_SUITE("mdp") {
  TEST_CASE("uniformized probabilities sum to one") {
    const std::vector<double> lambda{3.0, 2.0, 1.0};
    const std::vector<double> mu{0.5, 1.5, 4.0};
    const auto chain = UniformizedChain::build(lambda, mu, 2);
    const double total =
        std::accumulate(chain.arrival_prob.begin(), chain.arrival_prob.end(), 0.0) +
        std::accumulate(chain.departure_prob.begin(), chain.departure_prob.end(), 0.0);
    CHECK(total == doctest::Approx(1.0));
    CHECK(chain.arrival_prob[0] == doctest::Approx(3.0 / 12.0));
    CHECK(chain.departure_prob[2] == doctest::Approx(4.0 / 12.0));
  }

  TEST_CASE("equal retention rates: unique victim is the rule's") {
    const std::vector<double> lambda{3.0, 2.0, 1.0};
    const std::vector<double> mu{1.0, 1.0, 1.0};
    const std::vector<double> cost{1.0, 1.0, 1.0};
    const auto result = value_iteration_oracle(UniformizedChain::build(lambda, mu, 2), cost, 6);
    // Three two-file caches, each missing the third file, over six steps.
    CHECK(result.decisions.size() == 3 * 6);
    for (const auto& d : result.decisions) {
      CHECK(d.optimal_victims.size() == 1);
      CHECK(d.rule_is_optimal);
    }
  }

  TEST_CASE("symmetric files: both victims optimal") {
    const std::vector<double> lambda{1.0, 1.0, 3.0};
    const std::vector<double> mu{2.0, 2.0, 2.0};
    const std::vector<double> cost{1.0, 1.0, 1.0};
    const auto result = value_iteration_oracle(UniformizedChain::build(lambda, mu, 2), cost, 4);
    bool saw_tie = false;
    for (const auto& d : result.decisions) {
      if (d.request == 3 && d.cache == std::vector<FileId>{1, 2}) {
        CHECK(d.optimal_victims == std::vector<FileId>{1, 2});
        saw_tie = true;
      }
    }
    CHECK(saw_tie);
    CHECK(result.all_agree());
  }

  TEST_CASE("capacity covering the catalog has no full-cache misses") {
    const std::vector<double> lambda{1.0, 2.0};
    const std::vector<double> mu{1.0, 1.0};
    const std::vector<double> cost{1.0, 1.0};
    CHECK(value_iteration_oracle(UniformizedChain::build(lambda, mu, 2), cost, 5).decisions.empty());
  }

  TEST_CASE("size limits and argument checks") {
    const std::vector<double> five(5, 1.0);
    CHECK_THROWS_AS(value_iteration_oracle(UniformizedChain::build(five, five, 2), five, 3), Error);
    const std::vector<double> three(3, 1.0);
    CHECK_THROWS_AS(value_iteration_oracle(UniformizedChain::build(three, three, 3), three, 3),
                    Error);
    CHECK_THROWS_AS(UniformizedChain::build(three, std::vector<double>{1.0, 0.0, 1.0}, 2), Error);
    const std::vector<double> two(2, 1.0);
    CHECK_THROWS_AS(value_iteration_oracle(UniformizedChain::build(three, three, 2), two, 3),
                    Error);
  }

  TEST_CASE("heterogeneous retention rates can break the p*c rule") {
    // The rule ignores how soon a resident expires on its own. File 3 leaves
    // at rate 7, so keeping it is cheap even though p_3 c(3) > p_1 c(1).
    const std::vector<double> lambda{2.0, 2.0, 1.0};
    const std::vector<double> mu{1.0, 6.0, 7.0};
    const std::vector<double> cost{2.0, 9.0, 7.0};
    const auto result = value_iteration_oracle(UniformizedChain::build(lambda, mu, 2), cost, 6);
    CHECK_FALSE(result.all_agree());
    for (const auto& d : result.decisions) {
      if (d.steps_to_go == 6 && d.cache == std::vector<FileId>{1, 2} && d.request == 3) {
        CHECK(d.rule_victim == 1);
        CHECK(d.optimal_victims == std::vector<FileId>{3});
      }
    }
  }

  TEST_CASE("CSV has a row per decision") {
    const std::vector<double> lambda{3.0, 2.0, 1.0};
    const std::vector<double> mu{1.0, 1.0, 1.0};
    const auto result = value_iteration_oracle(UniformizedChain::build(lambda, mu, 2), lambda, 2);
    const std::string csv = mdp_oracle_csv(result);
    CHECK(std::count(csv.begin(), csv.end(), '\n') ==
          static_cast<long>(result.decisions.size()) + 1);
  }
}
