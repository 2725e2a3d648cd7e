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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace dare {

/// 1-based file identifier; valid ids are 1..M for a catalog of M files.
using FileId = std::uint32_t;

/// File population: arrival rates, request probabilities and fetch delays.
/// Immutable after construction.
class Catalog {
 public:
  /// Zipf rates lambda_m = 1/m^alpha. `delays` is empty (all 1), a single
  /// uniform value, or one value per file.
  static Catalog zipf(std::uint32_t files, double alpha,
                      std::span<const double> delays = {});

  /// Arbitrary positive rates; delays as for zipf().
  static Catalog from_rates(std::span<const double> rates,
                            std::span<const double> delays = {});

  std::uint32_t size() const { return static_cast<std::uint32_t>(rates_.size()); }
  double alpha() const { return alpha_; }

  double rate(FileId m) const { return rates_[m - 1]; }
  double probability(FileId m) const { return probs_[m - 1]; }
  double delay(FileId m) const { return delays_[m - 1]; }
  double total_rate() const { return total_rate_; }

  const std::vector<double>& rates() const { return rates_; }
  const std::vector<double>& probabilities() const { return probs_; }
  const std::vector<double>& delays() const { return delays_; }

  /// Same popularity profile with rates rescaled so that they sum to one.
  Catalog normalized() const;

 private:
  Catalog(std::vector<double> rates, std::span<const double> delays, double alpha);

  double alpha_ = 0.0;
  double total_rate_ = 0.0;
  std::vector<double> rates_;
  std::vector<double> probs_;
  std::vector<double> delays_;
};

/// One-shot damage f(Z) = sum_k a_k Z^k with a_0 = 0 and a_k >= 0.
class DamagePolynomial {
 public:
  /// coefficients[k-1] = a_k.
  explicit DamagePolynomial(std::vector<double> coefficients);

  static DamagePolynomial monomial(unsigned degree, double scale = 1.0);

  unsigned degree() const { return static_cast<unsigned>(coeffs_.size()); }
  double coefficient(unsigned k) const { return k == 0 || k > degree() ? 0.0 : coeffs_[k - 1]; }
  const std::vector<double>& coefficients() const { return coeffs_; }

  double operator()(double z) const { return eval(z); }
  double eval(double z) const;

  /// E[f(R)] for R ~ Exp(mu): sum_k a_k k! / mu^k.
  double expected_exponential(double mu) const;

 private:
  std::vector<double> coeffs_;
};

enum class CostMode {
  DelayPlusDamage,
  DamageOnly,
  DelayOnly,
};

const char* cost_mode_name(CostMode mode);
CostMode parse_cost_mode(std::string_view name);

/// Per-miss cost c(m) = delay term + damage term, where the damage term is
/// supplied by the caller (expected damage for stochastic retention, f(tau)
/// for deterministic retention).
struct CostModel {
  CostMode mode = CostMode::DelayPlusDamage;

  double cost(const Catalog& catalog, FileId m, double damage_term) const {
    switch (mode) {
      case CostMode::DamageOnly: return damage_term;
      case CostMode::DelayOnly: return catalog.delay(m);
      case CostMode::DelayPlusDamage: break;
    }
    return catalog.delay(m) + damage_term;
  }
};

}  // namespace dare
