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

#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>

#include "error.hpp"

namespace dare {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::Infeasible: return "infeasible";
    case ErrorCode::Convergence: return "convergence";
    case ErrorCode::TooLarge: return "too-large";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

namespace {

std::vector<double> expand_delays(std::size_t files, std::span<const double> delays) {
  std::vector<double> out;
  if (delays.empty()) {
    out.assign(files, 1.0);
  } else if (delays.size() == 1) {
    out.assign(files, delays[0]);
  } else {
    require(delays.size() == files,
            "delay list has " + std::to_string(delays.size()) + " entries, expected 1 or " +
                std::to_string(files));
    out.assign(delays.begin(), delays.end());
  }
  for (double d : out) {
    require(std::isfinite(d) && d > 0.0, "delays must be positive, got " + std::to_string(d));
  }
  return out;
}

}  // namespace

Catalog::Catalog(std::vector<double> rates, std::span<const double> delays, double alpha)
    : alpha_(alpha), rates_(std::move(rates)) {
  require(!rates_.empty(), "catalog must contain at least one file");
  for (double r : rates_) {
    require(std::isfinite(r) && r > 0.0, "arrival rates must be positive");
  }
  delays_ = expand_delays(rates_.size(), delays);
  // Sum smallest-first so that the normalization is as tight as possible.
  std::vector<double> sorted = rates_;
  std::sort(sorted.begin(), sorted.end());
  total_rate_ = std::accumulate(sorted.begin(), sorted.end(), 0.0);
  probs_.reserve(rates_.size());
  for (double r : rates_) probs_.push_back(r / total_rate_);
}

Catalog Catalog::zipf(std::uint32_t files, double alpha, std::span<const double> delays) {
  require(files >= 1, "catalog needs M >= 1 files");
  require(std::isfinite(alpha) && alpha >= 0.0, "Zipf exponent alpha must be >= 0");
  std::vector<double> rates(files);
  for (std::uint32_t m = 1; m <= files; ++m) {
    rates[m - 1] = alpha == 0.0 ? 1.0 : std::pow(static_cast<double>(m), -alpha);
  }
  return Catalog(std::move(rates), delays, alpha);
}

Catalog Catalog::from_rates(std::span<const double> rates, std::span<const double> delays) {
  return Catalog(std::vector<double>(rates.begin(), rates.end()), delays,
                 std::numeric_limits<double>::quiet_NaN());
}

Catalog Catalog::normalized() const {
  Catalog out = *this;
  out.rates_ = probs_;
  out.total_rate_ = 1.0;
  return out;
}

DamagePolynomial::DamagePolynomial(std::vector<double> coefficients)
    : coeffs_(std::move(coefficients)) {
  require(!coeffs_.empty(), "damage polynomial needs degree >= 1");
  bool any_positive = false;
  for (double a : coeffs_) {
    require(std::isfinite(a) && a >= 0.0, "damage coefficients must be finite and >= 0");
    any_positive = any_positive || a > 0.0;
  }
  require(any_positive, "damage polynomial needs at least one positive coefficient");
  while (coeffs_.back() == 0.0) coeffs_.pop_back();
}

DamagePolynomial DamagePolynomial::monomial(unsigned degree, double scale) {
  require(degree >= 1, "damage degree must be >= 1");
  std::vector<double> c(degree, 0.0);
  c.back() = scale;
  return DamagePolynomial(std::move(c));
}

double DamagePolynomial::eval(double z) const {
  if (!(z >= 0.0)) fail(ErrorCode::InvalidArgument, "damage argument must be >= 0");
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = (acc + *it) * z;
  return acc;
}

double DamagePolynomial::expected_exponential(double mu) const {
  if (!(mu > 0.0)) fail(ErrorCode::InvalidArgument, "retention rate mu must be > 0");
  if (std::isinf(mu)) return 0.0;
  double sum = 0.0;
  double term = 1.0;  // k! / mu^k
  for (unsigned k = 1; k <= degree(); ++k) {
    term *= static_cast<double>(k) / mu;
    sum += coeffs_[k - 1] * term;
  }
  return sum;
}

const char* cost_mode_name(CostMode mode) {
  switch (mode) {
    case CostMode::DelayPlusDamage: return "delay-plus-damage";
    case CostMode::DamageOnly: return "damage-only";
    case CostMode::DelayOnly: return "delay-only";
  }
  return "unknown";
}

CostMode parse_cost_mode(std::string_view name) {
  if (name == "delay-plus-damage") return CostMode::DelayPlusDamage;
  if (name == "damage-only") return CostMode::DamageOnly;
  if (name == "delay-only") return CostMode::DelayOnly;
  fail(ErrorCode::InvalidArgument, "unknown cost mode '" + std::string(name) + "'");
}

}  // namespace dare
