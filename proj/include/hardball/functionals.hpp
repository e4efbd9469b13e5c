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

// Monotone functionals of an evolution and sampled checks of their claims.
//
// Everything here is read-only over a Trajectory. The central quantity is
// alpha(t) = angle(x(t), v(t+)) in phase space together with its "cut"
// variants, where the evolution is frozen into straight-line motion after a
// cut time u.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "hardball/engine.hpp"

namespace hardball {

/// x_u(t): the true evolution up to u, straight-line motion with v(u+) after.
class CutTrajectory {
 public:
  CutTrajectory(const Trajectory& base, double cut)
      : base_(&base), cut_(cut), x_cut_(base.position(cut)), v_cut_(base.velocity(cut, Side::right)) {}

  double cut_time() const { return cut_; }
  const PhaseMatrix& frozen_velocity() const { return v_cut_; }
  const Trajectory& base() const { return *base_; }

  PhaseMatrix position(double t) const { return t < cut_ ? base_->position(t) : x_cut_ + (t - cut_) * v_cut_; }

  /// Right derivative v_u(t+).
  PhaseMatrix velocity(double t) const { return t < cut_ ? base_->velocity(t, Side::right) : v_cut_; }

  /// Left derivative v_u(t-).
  PhaseMatrix velocity_left(double t) const { return t <= cut_ ? base_->velocity(t, Side::left) : v_cut_; }

 private:
  const Trajectory* base_;
  double cut_;
  PhaseMatrix x_cut_;
  PhaseMatrix v_cut_;
};

inline double alpha(const Trajectory& traj, double t, Side side = Side::right,
                    const Tolerances& tol = default_tolerances) {
  return angle_between(traj.position(t), traj.velocity(t, side), tol);
}

inline double alpha_cut(const CutTrajectory& cut, double t, Side side = Side::right,
                        const Tolerances& tol = default_tolerances) {
  return angle_between(cut.position(t), side == Side::right ? cut.velocity(t) : cut.velocity_left(t), tol);
}

/// The unique time where alpha crosses pi/2, i.e. where g(t) = x(t).v(t+)
/// changes sign. g has slope |v|^2 > 0 between events and jumps upward at
/// every collision, so the crossing is located exactly: either inside a
/// segment (linear root) or at the event where g jumps over zero.
inline double find_t0(const Trajectory& traj) {
  const auto& segs = traj.segments();
  const auto& times = traj.event_times();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const double lo = i == 0 ? traj.start_time() : times[i - 1];
    const double hi = i + 1 < segs.size() ? times[i] : traj.end_time();
    const auto& s = segs[i];
    const double speed2 = s.v.squaredNorm();
    const double g_anchor = phase_dot(s.x, s.v);
    if (std::isfinite(lo)) {
      const double g_lo = g_anchor + (lo - s.anchor) * speed2;
      if (g_lo >= 0.0) {
        if (i == 0 && g_lo > 0.0) throw NotBracketed("x.v is already positive at the start of the span");
        return lo;
      }
    }
    if (speed2 > 0.0) {
      const double root = s.anchor - g_anchor / speed2;
      if (root < hi && (!std::isfinite(lo) || root >= lo)) return root;
    }
  }
  throw NotBracketed("x.v stays negative over the simulated span");
}

/// Shifts the clock so that the pi/2 crossing of alpha sits at t = 0.
inline Trajectory normalize_time_origin(const Trajectory& traj) { return traj.shifted(-find_t0(traj)); }

struct OrderStatisticsFrame {
  int axis = 0;
  double time = 0.0;
  std::vector<double> sorted_positions;  // y^1 <= ... <= y^n
  std::vector<int> permutation;          // rank -> ball index, ties by index
  PhaseMatrix rank_velocities;           // column r = w^r
  std::vector<double> partial_sums;      // F^r, r = 1..n
};

inline OrderStatisticsFrame order_frame(const Trajectory& traj, int axis, double t, Side side = Side::right) {
  if (axis < 0 || axis >= traj.dimension()) throw InvalidInput("axis out of range");
  const PhaseMatrix x = traj.position(t);
  const PhaseMatrix& v = traj.velocity(t, side);
  OrderStatisticsFrame f;
  f.axis = axis;
  f.time = t;
  f.permutation.resize(x.cols());
  std::iota(f.permutation.begin(), f.permutation.end(), 0);
  std::stable_sort(f.permutation.begin(), f.permutation.end(),
                   [&](int a, int b) { return x(axis, a) < x(axis, b); });
  f.rank_velocities.resize(v.rows(), v.cols());
  double sum = 0.0;
  for (std::size_t r = 0; r < f.permutation.size(); ++r) {
    const int ball = f.permutation[r];
    f.sorted_positions.push_back(x(axis, ball));
    f.rank_velocities.col(static_cast<Eigen::Index>(r)) = v.col(ball);
    sum += v(axis, ball);
    f.partial_sums.push_back(sum);
  }
  return f;
}

struct MonotonicityReport {
  std::string claim;
  std::vector<double> times;    // where the representative series was sampled
  std::vector<double> values;   // representative series
  double worst_violation = 0.0; // largest observed excess over the claim
  std::size_t checks = 0;
  std::size_t failures = 0;
  bool pass = true;
  std::vector<std::string> notes;

  void record(double excess, double slack) {
    ++checks;
    worst_violation = std::max(worst_violation, excess);
    if (excess > slack) {
      ++failures;
      pass = false;
    }
  }
};

struct GridPoint {
  double time;
  Side side;
};

/// Sampling grid for piecewise-linear functionals: both sides of every
/// event, one midpoint per inter-event gap, a point beyond each end of the
/// event list, and any extra samples, in time order (left before right).
inline std::vector<GridPoint> sampling_grid(const Trajectory& traj, const std::vector<double>& extra = {}) {
  std::vector<GridPoint> grid;
  const auto& times = traj.event_times();
  auto add = [&](double t, Side side) {
    if (traj.contains(t)) grid.push_back({t, side});
  };
  const double first = times.empty() ? traj.reference().time : times.front();
  const double last = times.empty() ? traj.reference().time : times.back();
  add(std::isfinite(traj.start_time()) ? traj.start_time() : first - 1.0, Side::right);
  for (std::size_t i = 0; i < times.size(); ++i) {
    add(times[i], Side::left);
    add(times[i], Side::right);
    if (i + 1 < times.size()) add(0.5 * (times[i] + times[i + 1]), Side::right);
  }
  add(std::isfinite(traj.end_time()) ? traj.end_time() : last + 1.0, Side::right);
  for (double t : extra) add(t, Side::right);
  std::stable_sort(grid.begin(), grid.end(), [](const GridPoint& a, const GridPoint& b) {
    return a.time < b.time || (a.time == b.time && a.side == Side::left && b.side == Side::right);
  });
  return grid;
}

/// Order-statistic sums F^r(t) along one axis must be non-increasing in t
/// for every rank r.
inline MonotonicityReport check_F_monotone(const Trajectory& traj, int axis, const std::vector<double>& samples,
                                           const Tolerances& tol = default_tolerances) {
  MonotonicityReport rep;
  rep.claim = "F_monotone";
  const auto grid = sampling_grid(traj, samples);
  const int n = traj.size();
  std::vector<std::vector<double>> series(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g)
    series[g] = order_frame(traj, axis, grid[g].time, grid[g].side).partial_sums;

  int worst_rank = 0;
  double worst = -kInf;
  for (std::size_t g = 1; g < grid.size(); ++g)
    for (int r = 0; r < n; ++r) {
      const double inc = series[g][r] - series[g - 1][r];
      rep.record(inc, tol.mono);
      if (inc > worst) {
        worst = inc;
        worst_rank = r;
      }
    }
  for (std::size_t g = 0; g < grid.size(); ++g) {
    rep.times.push_back(grid[g].time);
    rep.values.push_back(series[g][worst_rank]);
  }

  // Rank ties coinciding with a collision are a case the monotonicity
  // argument does not settle; report them rather than guess.
  for (const auto& ev : traj.events()) {
    const PhaseMatrix x = traj.position(ev.time);
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (std::abs(x(axis, a) - x(axis, b)) <= 2.0 * tol.simultaneous)
          rep.notes.push_back("rank tie between balls " + std::to_string(a) + " and " + std::to_string(b) +
                              " at collision time " + std::to_string(ev.time));
  }
  return rep;
}

inline MonotonicityReport check_F_monotone_all_axes(const Trajectory& traj, const std::vector<double>& samples,
                                                    const Tolerances& tol = default_tolerances) {
  MonotonicityReport all;
  all.claim = "F_monotone";
  for (int axis = 0; axis < traj.dimension(); ++axis) {
    MonotonicityReport r = check_F_monotone(traj, axis, samples, tol);
    all.checks += r.checks;
    all.failures += r.failures;
    all.pass = all.pass && r.pass;
    if (axis == 0 || r.worst_violation > all.worst_violation) {
      all.times = r.times;
      all.values = r.values;
    }
    all.worst_violation = std::max(all.worst_violation, r.worst_violation);
    for (auto& note : r.notes) all.notes.push_back("axis " + std::to_string(axis) + ": " + note);
  }
  return all;
}

/// Jump of alpha at a collision must be at least this negative.
inline constexpr double kStrictJump = 1e-12;

/// Sampled verification of the angle and norm claims for the evolution and
/// its cut versions. `traj` must have its time origin at the pi/2 crossing
/// of alpha; cut times must be >= 0.
///
/// Reports, in order:
///   lemma_angle_dwn        alpha and every alpha_u non-increasing on the grid,
///                          strictly dropping across every collision
///   lemma_angle_cut        angle(x_w, v_w) <= angle(x_u, v_u) for u < w, and
///                          angle(x, v) <= angle(x_u, v_u)
///   lemma_norm_bound       |x_u| <= |x_w| <= |x|
///   lemma_angle_x          angle(x_w(s), x_w(t)) <= angle(x_u(s), x_u(t)) for
///                          s, t >= u, also with x in place of x_w
///   lemma_norm_increasing  |x| non-decreasing on [0, inf), non-increasing on (-inf, 0]
inline std::vector<MonotonicityReport> check_lemma_suite(const Trajectory& traj, std::vector<double> cut_times,
                                                         std::vector<double> samples,
                                                         const Tolerances& tol = default_tolerances) {
  std::sort(cut_times.begin(), cut_times.end());
  cut_times.erase(std::unique(cut_times.begin(), cut_times.end()), cut_times.end());
  std::sort(samples.begin(), samples.end());
  if (!cut_times.empty() && cut_times.front() < 0.0) throw InvalidInput("cut times must be non-negative");

  std::vector<CutTrajectory> cuts;
  for (double u : cut_times) cuts.emplace_back(traj, u);

  MonotonicityReport dwn;
  dwn.claim = "lemma_angle_dwn";
  MonotonicityReport cut;
  cut.claim = "lemma_angle_cut";
  MonotonicityReport norm;
  norm.claim = "lemma_norm_bound";
  MonotonicityReport ax;
  ax.claim = "lemma_angle_x";
  MonotonicityReport inc;
  inc.claim = "lemma_norm_increasing";

  // (a) alpha along the full grid for x, and across the strict jumps.
  const auto grid = sampling_grid(traj, samples);
  std::vector<double> a(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) a[g] = alpha(traj, grid[g].time, grid[g].side, tol);
  for (std::size_t g = 1; g < grid.size(); ++g) dwn.record(a[g] - a[g - 1], tol.mono);
  for (const auto& ev : traj.events()) {
    const double jump = alpha(traj, ev.time, Side::right, tol) - alpha(traj, ev.time, Side::left, tol);
    dwn.record(jump + kStrictJump, 0.0);
  }
  for (std::size_t g = 0; g < grid.size(); ++g) {
    dwn.times.push_back(grid[g].time);
    dwn.values.push_back(a[g]);
  }
  for (const auto& c : cuts) {
    std::vector<double> extra = samples;
    extra.push_back(c.cut_time());
    extra.push_back(c.cut_time() + 1.0);
    const auto cg = sampling_grid(traj, extra);
    double prev = kInf;
    for (const auto& p : cg) {
      const double cur = alpha_cut(c, p.time, p.side, tol);
      if (std::isfinite(prev)) dwn.record(cur - prev, tol.mono);
      prev = cur;
    }
    for (const auto& ev : traj.events())
      if (ev.time <= c.cut_time())
        dwn.record(alpha_cut(c, ev.time, Side::right, tol) - alpha_cut(c, ev.time, Side::left, tol) + kStrictJump,
                   0.0);
  }

  // (b), (c): pointwise dominance over ordered cut pairs; the plain
  // evolution plays the role of the cut at +inf.
  auto angle_of = [&](const CutTrajectory* c, double t) {
    return c ? alpha_cut(*c, t, Side::right, tol) : alpha(traj, t, Side::right, tol);
  };
  auto norm_of = [&](const CutTrajectory* c, double t) { return c ? c->position(t).norm() : traj.position(t).norm(); };
  auto pos_of = [&](const CutTrajectory* c, double t) { return c ? c->position(t) : traj.position(t); };

  for (std::size_t i = 0; i < cuts.size(); ++i) {
    std::vector<const CutTrajectory*> later;
    for (std::size_t k = i + 1; k < cuts.size(); ++k) later.push_back(&cuts[k]);
    later.push_back(nullptr);
    const CutTrajectory* u = &cuts[i];
    for (const CutTrajectory* w : later) {
      for (double t : samples) {
        if (!traj.contains(t)) continue;
        cut.record(angle_of(w, t) - angle_of(u, t), tol.mono);
        norm.record(norm_of(u, t) - norm_of(w, t), tol.mono);
        if (w) norm.record(norm_of(w, t) - norm_of(nullptr, t), tol.mono);
      }
      // (d) pairs of sample times at or after u.
      for (std::size_t p = 0; p < samples.size(); ++p) {
        const double s = samples[p];
        if (s < u->cut_time() || !traj.contains(s)) continue;
        for (std::size_t q = p + 1; q < samples.size(); ++q) {
          const double t = samples[q];
          if (!traj.contains(t)) continue;
          ax.record(angle_between(pos_of(w, s), pos_of(w, t), tol) - angle_between(pos_of(u, s), pos_of(u, t), tol),
                    tol.mono);
        }
      }
    }
  }

  // (e) |x| along the grid on each side of the origin.
  double prev_pos = kInf;
  double prev_neg = kInf;
  for (const auto& p : grid) {
    const double r = traj.position(p.time).norm();
    if (p.time >= 0.0) {
      if (std::isfinite(prev_pos)) inc.record(prev_pos - r, tol.mono);
      prev_pos = r;
    }
    if (p.time <= 0.0) {
      if (std::isfinite(prev_neg)) inc.record(r - prev_neg, tol.mono);
      prev_neg = r;
    }
    inc.times.push_back(p.time);
    inc.values.push_back(r);
  }

  return {dwn, cut, norm, ax, inc};
}

}  // namespace hardball
