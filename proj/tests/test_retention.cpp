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
#include <cmath>
#include <vector>

#include "doctest.h"
#include "error.hpp"
#include "model.hpp"
#include "online.hpp"
#include "retention.hpp"
#include "rng.hpp"

using namespace dare;

namespace {

RetentionProblem problem_of(std::vector<double> rates, DamagePolynomial f, double budget) {
  return RetentionProblem{Catalog::from_rates(rates), std::move(f), budget};
}

const DamagePolynomial kLinear = DamagePolynomial::monomial(1);
const DamagePolynomial kSquare = DamagePolynomial::monomial(2);

}  // namespace

TEST_SUITE("retention") {
  TEST_CASE("objective hand values") {
    const auto p1 = problem_of({1.0}, kLinear, 0.5);
    CHECK(retention_objective(p1, std::vector<double>{0.0}) == 0.0);
    CHECK(retention_objective(p1, std::vector<double>{0.5}) == doctest::Approx(0.5));
    // Each file: 2! * 0.5^3 / 0.5^2 = 1; averaged over sum lambda = 2.
    const auto p2 = problem_of({1.0, 1.0}, kSquare, 0.5);
    CHECK(retention_objective(p2, std::vector<double>{0.5, 0.5}) == doctest::Approx(1.0));
  }

  TEST_CASE("objective domain") {
    const auto p = problem_of({1.0, 2.0}, kSquare, 0.5);
    CHECK_THROWS_AS(retention_objective(p, std::vector<double>{1.0, 0.2}), Error);
    CHECK_THROWS_AS(retention_objective(p, std::vector<double>{-0.1, 0.2}), Error);
    try {
      retention_objective(p, std::vector<double>{0.2, 1.0});
      FAIL("expected a domain error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Domain);
    }
  }

  TEST_CASE("delay hand values") {
    const auto p = problem_of({2.0, 1.0}, kSquare, 0.5);
    CHECK(retention_delay(p, std::vector<double>{1.0, 1.0}) == 0.0);
    CHECK(retention_delay(p, std::vector<double>{0.0, 0.0}) == doctest::Approx(1.0));
    CHECK(retention_delay(p, std::vector<double>{0.5, 0.0}) == doctest::Approx(2.0 / 3.0));
  }

  TEST_CASE("analytic single-file solve") {
    const auto p = problem_of({1.0}, kLinear, 0.5);
    const RetentionSolution s = solve_retention(p);
    CHECK(s.q[0] == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(s.mu[0] == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(s.objective == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(s.achieved_delay == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(s.theta > 0.0);
  }

  TEST_CASE("slack budget: never write") {
    const auto p = problem_of({3.0, 1.0, 0.5}, kSquare, 1.0);
    const RetentionSolution s = solve_retention(p);
    for (std::uint32_t m = 1; m <= 3; ++m) {
      CHECK(s.never_write(m));
      CHECK(std::isinf(s.mu[m - 1]));
    }
    CHECK(s.objective == 0.0);
    CHECK(s.theta == 0.0);
  }

  TEST_CASE("non-positive budget is infeasible") {
    for (double budget : {0.0, -0.2}) {
      try {
        solve_retention(problem_of({1.0}, kLinear, budget));
        FAIL("expected an infeasible error");
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Infeasible);
      }
    }
  }

  TEST_CASE("two-file solve matches a 1e-3 grid") {
    const auto p = problem_of({1.0, 0.5}, kSquare, 0.4);
    const RetentionSolution s = solve_retention(p);
    double best = INFINITY;
    for (int i = 0; i < 1000; ++i) {
      for (int j = 0; j < 1000; ++j) {
        const std::vector<double> q{i * 1e-3, j * 1e-3};
        if (retention_delay(p, q) > p.delay_budget) continue;
        best = std::min(best, retention_objective(p, q));
      }
    }
    CHECK(std::abs(s.objective - best) <= 1e-2);
    CHECK(s.objective <= best + 1e-12);
  }

  TEST_CASE("partial derivative matches finite differences") {
    const auto p = problem_of({2.0, 0.7, 0.3}, DamagePolynomial({0.5, 1.0, 0.25}), 0.5);
    std::vector<double> q{0.3, 0.6, 0.1};
    for (std::uint32_t m = 1; m <= 3; ++m) {
      const double h = 1e-6;
      auto up = q;
      auto down = q;
      up[m - 1] += h;
      down[m - 1] -= h;
      const double fd = (retention_objective(p, up) - retention_objective(p, down)) / (2 * h);
      CHECK(objective_partial(p, m, q[m - 1]) == doctest::Approx(fd).epsilon(1e-6));
    }
  }

  TEST_CASE("KKT certificate on Zipf catalogs") {
    for (double budget : {0.2, 0.5, 0.8}) {
      for (unsigned degree : {1u, 2u, 3u}) {
        const RetentionProblem p{Catalog::zipf(50, 0.85), DamagePolynomial::monomial(degree),
                                 budget};
        const RetentionSolution s = solve_retention(p);
        CHECK(s.kkt.stationarity < 1e-6);
        CHECK(s.kkt.primal < 1e-6);
        CHECK(s.kkt.dual < 1e-6);
        CHECK(s.kkt.complementary < 1e-6);
        CHECK(s.achieved_delay <= budget + 1e-9);
        for (std::uint32_t m = 1; m <= 50; ++m) {
          const double q = s.q[m - 1];
          CHECK(q >= 0.0);
          CHECK(q < 1.0);
          if (q > 0.0) {
            CHECK(s.mu[m - 1] == doctest::Approx(p.catalog.rate(m) * (1 - q) / q));
          }
        }
      }
    }
  }

  TEST_CASE("objective is non-increasing in the budget") {
    double previous = INFINITY;
    for (int i = 1; i <= 9; ++i) {
      const RetentionProblem p{Catalog::zipf(100, 0.85), kSquare, 0.1 * i};
      const double obj = solve_retention(p).objective;
      CHECK(obj <= previous * (1 + 1e-9));
      previous = obj;
    }
  }

  TEST_CASE("objective is non-decreasing in the number of files") {
    double previous = 0.0;
    for (std::uint32_t files : {50u, 100u, 200u, 400u}) {
      const RetentionProblem p{Catalog::zipf(files, 0.85), kSquare, 0.5};
      const double obj = solve_retention(p).objective;
      CHECK(obj >= previous * (1 - 1e-9));
      previous = obj;
    }
  }

  TEST_CASE("heterogeneous delays enter the constraint") {
    const std::vector<double> rates{1.0, 1.0};
    const std::vector<double> delays{1.0, 3.0};
    const RetentionProblem p{Catalog::from_rates(rates, delays), kSquare, 1.0};
    const RetentionSolution s = solve_retention(p);
    CHECK(s.achieved_delay == doctest::Approx(1.0).epsilon(1e-8));
    // The costlier miss is worth keeping more often.
    CHECK(s.q[1] > s.q[0]);
  }

  TEST_CASE("simulation: mu = lambda gives miss fraction 0.5") {
    RetentionSolution s;
    s.q = {0.5};
    s.mu = {1.0};
    const auto p = problem_of({1.0}, kLinear, 0.5);
    const SimulationCheck c = verify_by_simulation(s, p, 400000, 3);
    CHECK(std::abs(c.miss_fraction - 0.5) <= 0.01);
  }

  TEST_CASE("simulation: never-write misses every request") {
    const auto p = problem_of({3.0, 1.0}, kSquare, 1.0);
    const RetentionSolution s = solve_retention(p);
    const SimulationCheck c = verify_by_simulation(s, p, 20000, 4);
    CHECK(c.miss_fraction == 1.0);
    CHECK(c.damage_per_request == 0.0);
  }

  TEST_CASE("simulation: damage rate within 5 percent of the expectation") {
    const RetentionProblem p{Catalog::zipf(10, 0.85), kSquare, 0.6};
    const RetentionSolution s = solve_retention(p);
    const SimulationCheck c = verify_by_simulation(s, p, 100000, 5);
    const double expected = expected_damage_per_request(p, s.q);
    CHECK(std::abs(c.damage_per_request / expected - 1.0) <= 0.05);
    CHECK(std::abs(c.miss_fraction - s.achieved_delay) <= 0.01);
  }

  TEST_CASE("CSV rows and summary") {
    const RetentionProblem p{Catalog::zipf(4, 0.85), kSquare, 0.5};
    const RetentionSolution s = solve_retention(p);
    const std::string csv = retention_solution_csv(s, p);
    CHECK(std::count(csv.begin(), csv.end(), '\n') >= 1 + 4 + 1);
    CHECK(csv.find("theta") != std::string::npos);
  }
}
