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

// Phase-space types and the equal-mass, unit-radius collision law.
//
// A configuration of n balls in R^d is stored as two d x n matrices: column
// k holds the center (resp. velocity) of ball k. Read column-major, each
// matrix is the phase vector x in R^{dn} (resp. v), so phase-space dot
// products and norms are plain Frobenius operations on the matrices.
// Ball indices are 0-based throughout the library and its file formats.

#include <cmath>
#include <utility>

#include <Eigen/Dense>

#include "hardball/error.hpp"
#include "hardball/tolerances.hpp"

namespace hardball {

using SpatialVector = Eigen::VectorXd;
using PhaseMatrix = Eigen::MatrixXd;

inline constexpr double kContactDistance = 2.0;

struct BallState {
  int index = 0;
  SpatialVector center;
  SpatialVector velocity;
};

struct SystemState {
  double time = 0.0;
  PhaseMatrix positions;   // d x n
  PhaseMatrix velocities;  // d x n

  int dimension() const { return static_cast<int>(positions.rows()); }
  int size() const { return static_cast<int>(positions.cols()); }

  BallState ball(int k) const { return {k, positions.col(k), velocities.col(k)}; }
};

struct ContactFrame {
  int j = 0;
  int k = 0;
  SpatialVector unit_axis;  // (x^j - x^k) / |x^j - x^k|
};

template <class A, class B>
double phase_dot(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return a.cwiseProduct(b).sum();
}

inline double pair_distance(const SystemState& s, int j, int k) {
  return (s.positions.col(j) - s.positions.col(k)).norm();
}

inline double min_pair_distance(const PhaseMatrix& x) {
  double best = INFINITY;
  for (int j = 0; j < x.cols(); ++j)
    for (int k = j + 1; k < x.cols(); ++k) best = std::min(best, (x.col(j) - x.col(k)).norm());
  return best;
}

/// Shape, finiteness and no-overlap checks for a state handed in from outside.
inline void validate_state(const SystemState& s, const Tolerances& tol = default_tolerances) {
  if (s.positions.rows() != s.velocities.rows() || s.positions.cols() != s.velocities.cols())
    throw InvalidInput("positions and velocities must have the same shape");
  if (s.dimension() < 2) throw InvalidInput("dimension must be at least 2");
  if (s.size() < 2) throw InvalidInput("at least two balls are required");
  if (!s.positions.allFinite() || !s.velocities.allFinite() || !std::isfinite(s.time))
    throw InvalidInput("state contains non-finite values");
  for (int j = 0; j < s.size(); ++j)
    for (int k = j + 1; k < s.size(); ++k)
      if (pair_distance(s, j, k) < kContactDistance - tol.overlap)
        throw InvalidState("balls " + std::to_string(j) + " and " + std::to_string(k) + " overlap");
}

inline bool is_normalized(const SystemState& s, const Tolerances& tol = default_tolerances) {
  return s.velocities.rowwise().sum().norm() <= tol.conserve &&
         s.positions.rowwise().sum().norm() <= tol.conserve &&
         std::abs(s.velocities.squaredNorm() - 1.0) <= tol.conserve;
}

/// Moves to the zero-momentum frame with the center of mass at the origin
/// and rescales all speeds so that |v|^2 = 1. Pairwise distances are only
/// translated, and the trajectories are traversed at a different rate, so
/// the collision sequence is unchanged.
inline SystemState normalize_frame(const SystemState& state, const Tolerances& tol = default_tolerances) {
  SystemState out = state;
  const Eigen::VectorXd mean_v = state.velocities.rowwise().mean();
  const Eigen::VectorXd mean_x = state.positions.rowwise().mean();
  out.velocities.colwise() -= mean_v;
  out.positions.colwise() -= mean_x;
  const double speed = out.velocities.norm();
  if (!(speed > tol.zero * (1.0 + state.velocities.norm())))
    throw ZeroEnergy("no relative motion: all velocities are equal");
  out.velocities /= speed;
  return out;
}

inline ContactFrame contact_frame(const SystemState& s, int j, int k) {
  SpatialVector axis = s.positions.col(j) - s.positions.col(k);
  axis /= axis.norm();
  return {j, k, std::move(axis)};
}

/// True iff balls j and k touch and are moving towards each other. Relative
/// normal speeds inside [-tol.zero, 0] count as tangential, i.e. no impact.
inline bool approach_check(const SystemState& s, int j, int k, const Tolerances& tol = default_tolerances) {
  const double d = pair_distance(s, j, k);
  if (std::abs(d - kContactDistance) > tol.contact)
    throw NotInContact("balls " + std::to_string(j) + " and " + std::to_string(k) +
                       " are at distance " + std::to_string(d));
  const double closing = (s.velocities.col(j) - s.velocities.col(k)).dot(s.positions.col(j) - s.positions.col(k));
  return closing < -tol.zero * d;
}

/// Swaps the components of two velocities along a unit axis; the orthogonal
/// components are untouched. This is the whole equal-mass collision law.
inline std::pair<SpatialVector, SpatialVector> exchange_normal_components(const SpatialVector& vj,
                                                                          const SpatialVector& vk,
                                                                          const SpatialVector& unit_axis) {
  const double nj = vj.dot(unit_axis);
  const double nk = vk.dot(unit_axis);
  return {vj + (nk - nj) * unit_axis, vk + (nj - nk) * unit_axis};
}

/// Post-collision velocities (v^j(t+), v^k(t+)) of a touching, approaching pair.
inline std::pair<SpatialVector, SpatialVector> resolve_collision(const SystemState& s, int j, int k,
                                                                 const Tolerances& tol = default_tolerances) {
  if (!approach_check(s, j, k, tol))
    throw NotApproaching("balls " + std::to_string(j) + " and " + std::to_string(k) + " are not approaching");
  const ContactFrame frame = contact_frame(s, j, k);
  return exchange_normal_components(s.velocities.col(j), s.velocities.col(k), frame.unit_axis);
}

inline SystemState time_reverse(const SystemState& state) {
  SystemState out = state;
  out.velocities = -state.velocities;
  return out;
}

/// Unsigned angle in [0, pi] between two nonzero vectors of equal shape
/// (spatial vectors or whole phase matrices).
///
/// Evaluated as 2 atan2(|a^ - b^|, |a^ + b^|) on the normalized inputs, which
/// equals arccos(a^ . b^) but keeps full relative accuracy near 0 and pi.
template <class A, class B>
double angle_between(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b,
                     const Tolerances& tol = default_tolerances) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na < tol.zero || nb < tol.zero) throw ZeroVector("angle of a zero vector is undefined");
  const auto ua = (a / na).eval();
  const auto ub = (b / nb).eval();
  return 2.0 * std::atan2((ua - ub).norm(), (ua + ub).norm());
}

}  // namespace hardball
