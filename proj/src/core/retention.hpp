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

/// Minimize expected damage over per-file hit probabilities q_m subject to an
/// expected-delay budget, for exponential interarrivals and retentions.
struct RetentionProblem {
  Catalog catalog;
  DamagePolynomial damage;
  double delay_budget = 0.0;
};

/// Clamp for q near the pole at 1, and the threshold below which q is
/// reported as exactly zero (never write).
inline constexpr double kRetentionUpperGap = 1e-9;
inline constexpr double kNeverWriteThreshold = 1e-12;

/// (1/sum lambda) * sum_m sum_k a_k k! q_m^(k+1) / (lambda_m^k (1 - q_m)^k).
/// Throws Domain if some q_m >= 1, InvalidArgument if q_m < 0.
double retention_objective(const RetentionProblem& problem, std::span<const double> q);

/// (1/sum lambda) * sum_m lambda_m delta(m) (1 - q_m).
double retention_delay(const RetentionProblem& problem, std::span<const double> q);

/// Expected one-shot damage per request: sum_m p_m (1 - q_m) E[f(Exp(mu_m))].
double expected_damage_per_request(const RetentionProblem& problem, std::span<const double> q);

/// Partial derivative of retention_objective with respect to q_m.
double objective_partial(const RetentionProblem& problem, std::uint32_t m, double q);

struct KktResiduals {
  double stationarity = 0.0;
  double primal = 0.0;
  double dual = 0.0;
  double complementary = 0.0;

  double max() const;
};

struct RetentionSolution {
  std::vector<double> q;
  /// Retention rates; +infinity marks a never-written file.
  std::vector<double> mu;
  double objective = 0.0;
  double achieved_delay = 0.0;
  double theta = 0.0;
  KktResiduals kkt;
  unsigned dual_iterations = 0;

  bool never_write(std::uint32_t m) const { return q[m - 1] == 0.0; }
  double kkt_residual() const { return kkt.max(); }
};

/// Dual bisection on the delay multiplier with a safeguarded Newton solve per
/// coordinate. `tolerance` bounds |achieved delay - budget| when the budget
/// binds. Throws Infeasible for a non-positive budget and Convergence when the
/// iteration budget runs out.
RetentionSolution solve_retention(const RetentionProblem& problem, double tolerance = 1e-10);

/// Rows (file, lambda, q, mu, damage contribution) and a summary row.
std::string retention_solution_csv(const RetentionSolution& solution,
                                   const RetentionProblem& problem);

}  // namespace dare
