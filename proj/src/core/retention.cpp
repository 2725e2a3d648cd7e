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

#include "retention.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csv.hpp"
#include "error.hpp"

namespace dare {

namespace {

// Work in the odds x = q / (1 - q) = lambda / mu. In these terms the scaled
// marginal damage of file m is a polynomial,
//   h_m(x) = sum_k a_k k! lambda^-k x^k (k + 1 + k x),
// and the objective term is q * sum_k a_k k! (x / lambda)^k.

double odds(double q) { return q / (1.0 - q); }

double marginal(const DamagePolynomial& f, double lambda, double x) {
  double sum = 0.0;
  double term = 1.0;  // k! (x / lambda)^k
  for (unsigned k = 1; k <= f.degree(); ++k) {
    term *= static_cast<double>(k) * x / lambda;
    sum += f.coefficient(k) * term * (k + 1.0 + k * x);
  }
  return sum;
}

double marginal_slope(const DamagePolynomial& f, double lambda, double x) {
  // d/dx of x^k (k+1+kx) = k(k+1) x^(k-1) (1 + x)
  double sum = 0.0;
  double term = 1.0;  // k! x^(k-1) / lambda^k
  for (unsigned k = 1; k <= f.degree(); ++k) {
    term *= static_cast<double>(k) / lambda;
    if (k > 1) term *= x;
    sum += f.coefficient(k) * term * k * (k + 1.0) * (1.0 + x);
  }
  return sum;
}

double expected_over_mean(const DamagePolynomial& f, double mean) {
  double sum = 0.0;
  double term = 1.0;
  for (unsigned k = 1; k <= f.degree(); ++k) {
    term *= static_cast<double>(k) * mean;
    sum += f.coefficient(k) * term;
  }
  return sum;
}

void check_q(std::span<const double> q, std::uint32_t files, bool allow_one) {
  require(q.size() == files, "q has " + std::to_string(q.size()) + " entries, expected " +
                                 std::to_string(files));
  for (double v : q) {
    require(v >= 0.0, "q entries must be >= 0");
    if (allow_one) {
      require(v <= 1.0, "q entries must be <= 1");
    } else if (!(v < 1.0)) {
      fail(ErrorCode::Domain, "objective diverges at q >= 1");
    }
  }
}

// Largest odds allowed by the clamp q <= 1 - gap.
const double kMaxOdds = (1.0 - kRetentionUpperGap) / kRetentionUpperGap;

// Solves h(x) = target on [0, kMaxOdds] by Newton steps kept inside a
// shrinking bracket. Returns the odds.
double solve_coordinate(const DamagePolynomial& f, double lambda, double target, bool* ok) {
  *ok = true;
  if (target <= 0.0) return 0.0;
  if (marginal(f, lambda, kMaxOdds) <= target) return kMaxOdds;
  double lo = 0.0;
  double hi = kMaxOdds;
  // Start from the linear-term root, which is exact for f = a_1 x near 0.
  double x = std::min(hi, std::max(target * lambda / (2.0 * std::max(f.coefficient(1), 1e-300)),
                                   1e-300));
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    const double h = marginal(f, lambda, x) - target;
    if (h == 0.0) return x;
    if (h < 0.0) lo = x; else hi = x;
    if (std::abs(h) <= 1e-14 * target || hi - lo <= 4 * std::numeric_limits<double>::epsilon() * hi) {
      return x;
    }
    const double slope = marginal_slope(f, lambda, x);
    double next = x - h / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
  }
  const double h = marginal(f, lambda, x) - target;
  *ok = std::abs(h) <= 1e-10 * target;
  return x;
}

struct Primal {
  std::vector<double> q;
  double delay = 0.0;
};

Primal primal_for(const RetentionProblem& p, double theta) {
  const Catalog& c = p.catalog;
  Primal out;
  out.q.resize(c.size());
  for (std::uint32_t m = 1; m <= c.size(); ++m) {
    bool ok = true;
    const double x = solve_coordinate(p.damage, c.rate(m), theta * c.rate(m) * c.delay(m), &ok);
    if (!ok) {
      fail(ErrorCode::Convergence, "Newton solve for file " + std::to_string(m) +
                                       " did not converge at theta=" + csv_real(theta));
    }
    double q = x / (1.0 + x);
    if (q < kNeverWriteThreshold) q = 0.0;
    out.q[m - 1] = q;
  }
  out.delay = retention_delay(p, out.q);
  return out;
}

}  // namespace

double retention_objective(const RetentionProblem& problem, std::span<const double> q) {
  const Catalog& c = problem.catalog;
  check_q(q, c.size(), false);
  double sum = 0.0;
  for (std::uint32_t m = 1; m <= c.size(); ++m) {
    const double qm = q[m - 1];
    if (qm == 0.0) continue;
    double inner = 0.0;
    double term = 1.0;  // k! q^k / (lambda^k (1-q)^k)
    for (unsigned k = 1; k <= problem.damage.degree(); ++k) {
      term *= static_cast<double>(k) * qm / (c.rate(m) * (1.0 - qm));
      inner += problem.damage.coefficient(k) * term;
    }
    sum += qm * inner;
  }
  return sum / c.total_rate();
}

double retention_delay(const RetentionProblem& problem, std::span<const double> q) {
  const Catalog& c = problem.catalog;
  check_q(q, c.size(), true);
  double sum = 0.0;
  for (std::uint32_t m = 1; m <= c.size(); ++m) {
    sum += c.rate(m) * c.delay(m) * (1.0 - q[m - 1]);
  }
  return sum / c.total_rate();
}

double expected_damage_per_request(const RetentionProblem& problem, std::span<const double> q) {
  const Catalog& c = problem.catalog;
  check_q(q, c.size(), false);
  double sum = 0.0;
  for (std::uint32_t m = 1; m <= c.size(); ++m) {
    const double qm = q[m - 1];
    if (qm == 0.0) continue;
    // mean retention 1/mu = q / (lambda (1 - q))
    sum += c.probability(m) * (1.0 - qm) *
           expected_over_mean(problem.damage, odds(qm) / c.rate(m));
  }
  return sum;
}

double objective_partial(const RetentionProblem& problem, std::uint32_t m, double q) {
  require(m >= 1 && m <= problem.catalog.size(), "file id out of range");
  if (!(q >= 0.0 && q < 1.0)) fail(ErrorCode::Domain, "objective diverges at q >= 1");
  return marginal(problem.damage, problem.catalog.rate(m), odds(q)) /
         problem.catalog.total_rate();
}

double KktResiduals::max() const {
  return std::max({stationarity, primal, dual, complementary});
}

RetentionSolution solve_retention(const RetentionProblem& problem, double tolerance) {
  const Catalog& c = problem.catalog;
  if (!(problem.delay_budget > 0.0)) {
    fail(ErrorCode::Infeasible, "delay budget must be > 0, got " + csv_real(problem.delay_budget));
  }
  require(tolerance > 0.0, "solver tolerance must be > 0");

  double theta = 0.0;
  unsigned iterations = 0;
  Primal best = primal_for(problem, 0.0);
  // The q = 0 delay is a rounded ratio; a budget equal to it is slack.
  const double slack_limit = problem.delay_budget + tolerance * std::max(1.0, problem.delay_budget);
  if (best.delay > slack_limit) {
    double lo = 0.0;
    double hi = 1.0;
    Primal at_hi = primal_for(problem, hi);
    for (int grow = 0; at_hi.delay > problem.delay_budget; ++grow) {
      if (grow > 2000) {
        fail(ErrorCode::Infeasible, "delay budget " + csv_real(problem.delay_budget) +
                                        " is below the smallest delay reachable with q <= 1-" +
                                        csv_real(kRetentionUpperGap));
      }
      lo = hi;
      hi *= 2.0;
      at_hi = primal_for(problem, hi);
    }
    for (; iterations < 200; ++iterations) {
      const double mid = 0.5 * (lo + hi);
      if (!(mid > lo && mid < hi)) break;
      Primal at_mid = primal_for(problem, mid);
      if (at_mid.delay > problem.delay_budget) {
        lo = mid;
      } else {
        hi = mid;
        at_hi = std::move(at_mid);
      }
      if (problem.delay_budget - at_hi.delay <= 0.25 * tolerance * problem.delay_budget &&
          hi - lo <= 1e-15 * hi) {
        break;
      }
    }
    theta = hi;
    best = std::move(at_hi);
    if (problem.delay_budget - best.delay > tolerance * std::max(1.0, problem.delay_budget)) {
      fail(ErrorCode::Convergence,
           "dual bisection stopped with delay " + csv_real(best.delay) + " vs budget " +
               csv_real(problem.delay_budget) + " (theta=" + csv_real(theta) + ")");
    }
  }

  RetentionSolution sol;
  sol.q = best.q;
  sol.mu.resize(c.size());
  for (std::uint32_t m = 1; m <= c.size(); ++m) {
    const double q = sol.q[m - 1];
    sol.mu[m - 1] = q == 0.0 ? std::numeric_limits<double>::infinity()
                             : c.rate(m) * (1.0 - q) / q;
  }
  sol.objective = retention_objective(problem, sol.q);
  sol.achieved_delay = best.delay;
  sol.theta = theta;
  sol.dual_iterations = iterations;

  const double upper_q = 1.0 - kRetentionUpperGap;
  for (std::uint32_t m = 1; m <= c.size(); ++m) {
    const double q = sol.q[m - 1];
    const double target = theta * c.rate(m) * c.delay(m) / c.total_rate();
    const double grad = objective_partial(problem, m, std::min(q, upper_q));
    double r = 0.0;
    if (q == 0.0) {
      r = std::max(0.0, target - grad);
    } else if (q >= upper_q * (1 - 1e-15)) {
      r = std::max(0.0, grad - target);
    } else {
      r = std::abs(grad - target);
    }
    sol.kkt.stationarity = std::max(sol.kkt.stationarity, r / std::max(1.0, target));
  }
  sol.kkt.primal = std::max(0.0, sol.achieved_delay - problem.delay_budget);
  sol.kkt.dual = std::max(0.0, -theta);
  sol.kkt.complementary = theta * std::abs(sol.achieved_delay - problem.delay_budget);
  return sol;
}

std::string retention_solution_csv(const RetentionSolution& solution,
                                   const RetentionProblem& problem) {
  const Catalog& c = problem.catalog;
  CsvWriter csv({"kind", "file", "lambda", "q", "mu", "damage_contribution", "delta", "theta",
                 "objective", "achieved_delay"});
  for (std::uint32_t m = 1; m <= c.size(); ++m) {
    const double q = solution.q[m - 1];
    double contribution = 0.0;
    if (q > 0.0) {
      double term = 1.0;
      for (unsigned k = 1; k <= problem.damage.degree(); ++k) {
        term *= static_cast<double>(k) * q / (c.rate(m) * (1.0 - q));
        contribution += problem.damage.coefficient(k) * term;
      }
      contribution *= q / c.total_rate();
    }
    csv.row({"file", csv_int(m), csv_real(c.rate(m)), csv_real(q), csv_real(solution.mu[m - 1]),
             csv_real(contribution), "", "", "", ""});
  }
  csv.row({"summary", "", "", "", "", "", csv_real(problem.delay_budget), csv_real(solution.theta),
           csv_real(solution.objective), csv_real(solution.achieved_delay)});
  return csv.str();
}

}  // namespace dare
