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

// Second evaluation path for the bounds: build the value itself in
// arbitrary precision (integer factors exactly) and take its logarithm at
// the end. Used to cross-check the log-space formulas.

#include <string>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "hardball/bounds.hpp"

namespace hardball::exact {

using BigInt = boost::multiprecision::cpp_int;
using BigFloat = boost::multiprecision::cpp_bin_float_50;

inline BigInt factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline BigInt ipow(int base, unsigned exponent) { return boost::multiprecision::pow(BigInt(base), exponent); }

inline BigFloat bfk_radius(int n, double mass_ratio = 1.0, double radius_ratio = 1.0) {
  using boost::multiprecision::pow;
  using boost::multiprecision::sqrt;
  const BigFloat base = BigFloat(32) * sqrt(BigFloat(mass_ratio)) * BigFloat(radius_ratio) * pow(BigFloat(n), BigFloat(1.5));
  return pow(base, n * n);
}

/// Integer value of the radius bound at unit ratios and even n, where
/// 32^{n^2} n^{3n^2/2} is a whole number.
inline std::string bfk_radius_integer(int n) {
  if (n % 2 != 0) throw InvalidInput("integer form needs even n");
  const unsigned n2 = static_cast<unsigned>(n * n);
  return (ipow(32, n2) * ipow(n, 3 * n2 / 2)).str();
}

inline BigFloat bfk_mass(int n, double mass_ratio = 1.0) {
  const BigFloat base = BigFloat(400) * BigFloat(mass_ratio) * BigFloat(n) * n;
  return boost::multiprecision::pow(base, 2 * n * n * n * n);
}

inline BigFloat factorial_bound(int c, int n, double scale) {
  using boost::multiprecision::log;
  using boost::multiprecision::pow;
  const BigFloat fact(factorial(n));
  return BigFloat(ipow(c, n)) * fact * boost::multiprecision::sqrt(fact) * pow(log(BigFloat(5 * n)), n) / BigFloat(scale);
}

inline BigFloat phi_delta(int n, double delta) { return factorial_bound(73, n, delta); }
inline BigFloat phi_rho(int n, double rho) { return factorial_bound(38, n, rho); }

inline BigFloat phi_delta_recursion(int n, double delta) {
  using boost::multiprecision::log;
  const BigFloat prev = phi_delta(n - 1, delta);
  const BigFloat nn(n);
  const BigFloat a = BigFloat(34) * nn * nn * nn / BigFloat(delta);
  const BigFloat b = log(BigFloat(5 * n)) * prev;
  return 4 * prev + 72 * nn * boost::multiprecision::sqrt(nn) * (a > b ? a : b);
}

inline double log10_of(const BigFloat& v) { return static_cast<double>(boost::multiprecision::log10(v)); }

/// ln phi_delta(n) at delta = n^{-n}, via the multiprecision log-gamma.
inline BigFloat ln_phi_at_n_pow_minus_n(const BigFloat& n) {
  using boost::multiprecision::log;
  return n * log(BigFloat(73)) + BigFloat(1.5) * boost::math::lgamma(n + 1) + n * log(log(5 * n)) + n * log(n);
}

inline bool nc_consistency_holds(const BigFloat& n, double epsilon) {
  return ln_phi_at_n_pow_minus_n(n) <= (BigFloat(1.5) + epsilon) * n * boost::multiprecision::log(n) +
                                           n * boost::multiprecision::log(n);
}

}  // namespace hardball::exact
