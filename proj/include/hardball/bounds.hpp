// Copyright 2026 The hardball Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Closed-form collision bounds, evaluated in log space so that none of them
// overflows. Natural logarithms are used internally; reports carry log10.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "hardball/error.hpp"

namespace hardball {

struct BoundReport {
  std::string formula;
  int n = 0;
  std::optional<double> delta;
  std::optional<double> rho;
  std::optional<double> epsilon;
  std::optional<double> mass_ratio;
  std::optional<double> radius_ratio;
  double log10_value = 0.0;
  std::optional<std::string> exact;  // decimal integer when the value is one and small enough to print
};

namespace detail {

inline constexpr double kLn10 = 2.302585092994045684;

inline void require_n(int n, int min) {
  if (n < min) throw InvalidInput("n must be at least " + std::to_string(min));
}

inline void require_ratio(double r, const char* what) {
  if (!(r >= 1.0) || !std::isfinite(r)) throw InvalidInput(std::string(what) + " must be a finite value >= 1");
}

/// ln of c^n (n!)^{3/2} (ln 5n)^n / scale, shared by the two factorial bounds.
inline double ln_factorial_bound(double c, int n, double scale) {
  return n * std::log(c) + 1.5 * std::lgamma(n + 1.0) + n * std::log(std::log(5.0 * n)) - std::log(scale);
}

}  // namespace detail

/// (32 sqrt(m) r n^{3/2})^{n^2} for mass ratio m and radius ratio r.
inline double ln_bfk_radius(int n, double mass_ratio, double radius_ratio) {
  return double(n) * n * (std::log(32.0) + 0.5 * std::log(mass_ratio) + std::log(radius_ratio) + 1.5 * std::log(n));
}

/// (400 m n^2)^{2 n^4}.
inline double ln_bfk_mass(int n, double mass_ratio) {
  const double n2 = double(n) * n;
  return 2.0 * n2 * n2 * (std::log(400.0) + std::log(mass_ratio) + 2.0 * std::log(n));
}

/// 73^n (n!)^{3/2} (ln 5n)^n / delta. Defined for every n >= 1 so the
/// recursion can reach down to n - 1.
inline double ln_phi_delta(int n, double delta) { return detail::ln_factorial_bound(73.0, n, delta); }

/// 38^n (n!)^{3/2} (ln 5n)^n / rho.
inline double ln_phi_rho(int n, double rho) { return detail::ln_factorial_bound(38.0, n, rho); }

inline BoundReport bfk_radius_bound(int n, double mass_ratio = 1.0, double radius_ratio = 1.0) {
  detail::require_n(n, 2);
  detail::require_ratio(mass_ratio, "mass ratio");
  detail::require_ratio(radius_ratio, "radius ratio");
  BoundReport r;
  r.formula = "bfk_radius";
  r.n = n;
  r.mass_ratio = mass_ratio;
  r.radius_ratio = radius_ratio;
  r.log10_value = ln_bfk_radius(n, mass_ratio, radius_ratio) / detail::kLn10;
  return r;
}

inline BoundReport bfk_mass_bound(int n, double mass_ratio = 1.0) {
  detail::require_n(n, 2);
  detail::require_ratio(mass_ratio, "mass ratio");
  BoundReport r;
  r.formula = "bfk_mass";
  r.n = n;
  r.mass_ratio = mass_ratio;
  r.log10_value = ln_bfk_mass(n, mass_ratio) / detail::kLn10;
  return r;
}

inline double lower_bound_cubic(int n) {
  detail::require_n(n, 3);
  return double(n) * n * n / 27.0;
}

inline void require_delta(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw InvalidInput("delta must lie in (0, 1]");
}

inline BoundReport thm_nf_bound(int n, double delta) {
  detail::require_n(n, 3);
  require_delta(delta);
  BoundReport r;
  r.formula = "phi_delta";
  r.n = n;
  r.delta = delta;
  r.log10_value = ln_phi_delta(n, delta) / detail::kLn10;
  return r;
}

/// ln of 4 phi(n-1) + 72 n^{3/2} max(34 n^3 / delta, ln(5n) phi(n-1)).
inline double ln_phi_delta_recursion(int n, double delta) {
  const double prev = ln_phi_delta(n - 1, delta);
  const double a = std::log(34.0) + 3.0 * std::log(n) - std::log(delta);
  const double b = std::log(std::log(5.0 * n)) + prev;
  const double big = std::log(72.0) + 1.5 * std::log(n) + std::max(a, b);
  const double small = std::log(4.0) + prev;
  const double hi = std::max(big, small);
  return hi + std::log1p(std::exp(std::min(big, small) - hi));
}

/// True when phi_delta(n) dominates the one-step recursion at this n.
inline bool phi_delta_recursion_holds(int n, double delta) {
  detail::require_n(n, 3);
  require_delta(delta);
  return ln_phi_delta(n, delta) >= ln_phi_delta_recursion(n, delta);
}

inline BoundReport phi_rho_bound(int n, double rho) {
  detail::require_n(n, 2);
  if (!(rho > 0.0) || !std::isfinite(rho)) throw InvalidInput("rho must be positive");
  BoundReport r;
  r.formula = "phi_rho";
  r.n = n;
  r.rho = rho;
  r.log10_value = ln_phi_rho(n, rho) / detail::kLn10;
  return r;
}

/// phi_rho(n) - (n+1)^2/2 as a double (inf when it overflows).
inline double upcrossing_budget(int n, double rho) {
  return std::exp(ln_phi_rho(n, rho)) - 0.5 * (n + 1.0) * (n + 1.0);
}

struct NcBound {
  BoundReport report;
  double min_valid_n = 0.0;  // ceil(exp(36 / eps^2)); may be inf
};

inline double nc_min_valid_n(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidInput("epsilon must be positive");
  return std::ceil(std::exp(36.0 / (epsilon * epsilon)));
}

/// n^{5n/2 + eps n}, with the smallest n the estimate is claimed for.
inline NcBound thm_nc_bound(double n, double epsilon) {
  if (!(n >= 2.0) || n != std::floor(n)) throw InvalidInput("n must be an integer >= 2");
  NcBound out;
  out.min_valid_n = nc_min_valid_n(epsilon);
  out.report.formula = "thm_nc";
  out.report.n = n < 2147483647.0 ? static_cast<int>(n) : 0;
  out.report.epsilon = epsilon;
  out.report.log10_value = (2.5 + epsilon) * n * std::log10(n);
  return out;
}

/// ln phi_delta(n) at delta = n^{-n}, for n beyond int range.
inline double ln_phi_at_n_pow_minus_n(double n) {
  return n * std::log(73.0) + 1.5 * std::lgamma(n + 1.0) + n * std::log(std::log(5.0 * n)) + n * std::log(n);
}

/// phi at delta = n^{-n} stays below n^{3n/2 + eps n} n^n, compared in log space.
inline bool nc_consistency_holds(double n, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
  if (!(n >= 3.0)) throw InvalidInput("n must be at least 3");
  return ln_phi_at_n_pow_minus_n(n) <= (1.5 + epsilon) * n * std::log(n) + n * std::log(n);
}

struct PartitionTimes {
  double T = 0.0;
  double T_star = 0.0;
};

inline constexpr double kSpreadConstant = 1.61;

inline PartitionTimes partition_times(int n, double x0_norm) {
  detail::require_n(n, 2);
  if (!(x0_norm >= std::sqrt(2.0) / 2.0) || !std::isfinite(x0_norm))
    throw InvalidInput("|x(0)| below the no-overlap floor sqrt(2)/2");
  const double spread = std::sqrt(double(n)) * (n - 1);
  PartitionTimes p{18.0 * spread * x0_norm, 100.0 * double(n) * n * n * x0_norm};
  if (!(p.T_star >= p.T * (1.0 + 3.0 * kSpreadConstant * spread)))
    throw InvalidState("T* does not dominate the spreading time at n = " + std::to_string(n));
  return p;
}

}  // namespace hardball
