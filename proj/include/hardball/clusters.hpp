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

// Contact graphs, band upcrossings and the partition / cluster procedures
// built on top of them. Pairwise squared distances are convex quadratics on
// every inter-event segment, so all threshold crossings and minima used
// below are computed in closed form rather than by sampling.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "hardball/engine.hpp"
#include "hardball/functionals.hpp"

namespace hardball {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

  int find(int i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  bool same(int a, int b) { return find(a) == find(b); }
  int component_size(int i) { return size_[find(i)]; }

  /// Dense labels 0..c-1, numbered in order of first appearance.
  std::vector<int> labels() {
    std::vector<int> out(parent_.size());
    std::map<int, int> ids;
    for (int i = 0; i < static_cast<int>(parent_.size()); ++i) {
      const auto [it, inserted] = ids.try_emplace(find(i), static_cast<int>(ids.size()));
      out[i] = it->second;
    }
    return out;
  }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

/// Relative motion of one pair on one segment: d(t) = |dx + (t - anchor) dv|.
struct PairMotion {
  double anchor = 0.0;
  SpatialVector dx;
  SpatialVector dv;

  static PairMotion on(const Trajectory::Segment& s, int i, int j) {
    return {s.anchor, s.x.col(i) - s.x.col(j), s.v.col(i) - s.v.col(j)};
  }

  double distance2(double t) const { return (dx + (t - anchor) * dv).squaredNorm(); }

  /// Ordered times where d(t) = level, if the pair reaches it.
  std::optional<std::pair<double, double>> crossings(double level) const {
    const double a = dv.squaredNorm();
    if (a == 0.0) return std::nullopt;
    const double b = dx.dot(dv);
    const double c = dx.squaredNorm() - level * level;
    const double disc = b * b - a * c;
    if (disc < 0.0) return std::nullopt;
    const double q = -(b + std::copysign(std::sqrt(disc), b));
    double r1 = q / a;
    double r2 = q != 0.0 ? c / q : r1;
    if (r1 > r2) std::swap(r1, r2);
    return std::make_pair(anchor + r1, anchor + r2);
  }

  /// Minimum of d over [lo, hi] (hi may be +inf).
  double min_distance(double lo, double hi) const {
    const double a = dv.squaredNorm();
    double t = lo;
    if (a > 0.0) t = std::clamp(anchor - dx.dot(dv) / a, lo, hi);
    return std::sqrt(distance2(t));
  }
};

inline std::pair<double, double> segment_bounds(const Trajectory& traj, std::size_t i) {
  const auto& times = traj.event_times();
  return {i == 0 ? traj.start_time() : times[i - 1], i + 1 < traj.segments().size() ? times[i] : traj.end_time()};
}

struct ContactGraph {
  double time = 0.0;
  double rho = 0.0;
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> component;  // label per ball

  bool has_edge(int j, int k) const {
    if (j > k) std::swap(j, k);
    return std::find(edges.begin(), edges.end(), std::make_pair(j, k)) != edges.end();
  }

  int component_count() const {
    return component.empty() ? 0 : *std::max_element(component.begin(), component.end()) + 1;
  }

  bool same_component(const std::vector<int>& balls) const {
    return std::all_of(balls.begin(), balls.end(), [&](int b) { return component[b] == component[balls.front()]; });
  }
};

/// Edges join balls whose centers are at most 2 + rho (+ slack) apart.
inline ContactGraph contact_graph_of(const PhaseMatrix& x, double time, double rho, double slack = 0.0) {
  ContactGraph g;
  g.time = time;
  g.rho = rho;
  g.n = static_cast<int>(x.cols());
  UnionFind uf(g.n);
  for (int j = 0; j < g.n; ++j)
    for (int k = j + 1; k < g.n; ++k)
      if ((x.col(j) - x.col(k)).norm() <= kContactDistance + rho + slack) {
        g.edges.push_back({j, k});
        uf.unite(j, k);
      }
  g.component = uf.labels();
  return g;
}

inline ContactGraph contact_graph(const Trajectory& traj, double t, double rho) {
  if (!(rho > 0.0)) throw InvalidInput("rho must be positive");
  return contact_graph_of(traj.position(t), t, rho);
}

enum class IntervalKind { closed, right_open, left_open };

/// True iff `balls` lie in one component of the contact graph at every time
/// of the interval. The edge set can only change where a pair distance
/// crosses 2 + rho, so the graph is checked at those crossings (with
/// tol.contact slack, since the distance equals the threshold there) and at
/// one interior point of every piece between them.
inline bool is_rho_connected(const Trajectory& traj, std::vector<int> balls, double s, double u, double rho,
                             IntervalKind kind = IntervalKind::closed, const Tolerances& tol = default_tolerances) {
  if (!(rho > 0.0)) throw InvalidInput("rho must be positive");
  if (s > u) throw InvalidInput("interval is reversed");
  if (!traj.contains(s) || u > traj.end_time()) throw OutOfSpan("interval outside the simulated span");
  std::sort(balls.begin(), balls.end());
  balls.erase(std::unique(balls.begin(), balls.end()), balls.end());
  if (balls.size() <= 1) return true;

  const double level = kContactDistance + rho;
  std::vector<double> critical{s};
  if (std::isfinite(u)) critical.push_back(u);
  for (double t : traj.event_times())
    if (t > s && t < u) critical.push_back(t);
  const int n = traj.size();
  for (std::size_t i = 0; i < traj.segments().size(); ++i) {
    const auto [lo, hi] = segment_bounds(traj, i);
    if (hi < s || lo > u) continue;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        const auto r = PairMotion::on(traj.segments()[i], a, b).crossings(level);
        if (!r) continue;
        for (double t : {r->first, r->second})
          if (t > std::max(lo, s) && t < std::min(hi, u)) critical.push_back(t);
      }
  }
  std::sort(critical.begin(), critical.end());
  critical.erase(std::unique(critical.begin(), critical.end()), critical.end());

  auto connected_at = [&](double t, double slack) {
    return contact_graph_of(traj.position(t), t, rho, slack).same_component(balls);
  };
  for (std::size_t c = 0; c < critical.size(); ++c) {
    const double t = critical[c];
    const bool excluded = (kind == IntervalKind::right_open && t == u) || (kind == IntervalKind::left_open && t == s);
    if (!excluded && !connected_at(t, tol.contact)) return false;
    if (c + 1 < critical.size() && !connected_at(0.5 * (t + critical[c + 1]), 0.0)) return false;
  }
  if (!std::isfinite(u) && !connected_at(critical.back() + 1.0, 0.0)) return false;
  return true;
}

/// Stopping times of the band [2 + rho/2, 2 + rho] for every pair: odd
/// entries are first entries below 2 + rho/2, even entries first exits
/// above 2 + rho. sigma counts completed upcrossings by time t.
struct UpcrossingLedger {
  double rho = 0.0;
  double s = 0.0;
  double t = 0.0;
  int n = 0;
  std::vector<std::vector<double>> taus;  // per pair: tau_1, tau_2, ... (tau_0 = s)
  std::vector<long> sigma;
  long total = 0;

  std::size_t pair_index(int i, int j) const {
    if (i > j) std::swap(i, j);
    return static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i + 1) / 2 + (j - i - 1);
  }

  const std::vector<double>& stopping_times(int i, int j) const { return taus[pair_index(i, j)]; }
  long sigma_of(int i, int j) const { return sigma[pair_index(i, j)]; }

  /// tau_2, tau_4, ... that are finite.
  std::vector<double> even_times(int i, int j) const {
    std::vector<double> out;
    const auto& ts = stopping_times(i, j);
    for (std::size_t k = 1; k < ts.size(); k += 2) out.push_back(ts[k]);
    return out;
  }
};

inline UpcrossingLedger upcrossings(const Trajectory& traj, double s, double t, double rho) {
  if (!(rho > 0.0)) throw InvalidInput("rho must be positive");
  if (!(s < t)) throw InvalidInput("upcrossings need s < t");
  if (!traj.contains(s) || t > traj.end_time()) throw OutOfSpan("upcrossing window outside the simulated span");
  UpcrossingLedger led;
  led.rho = rho;
  led.s = s;
  led.t = t;
  led.n = traj.size();
  const double low = kContactDistance + 0.5 * rho;
  const double high = kContactDistance + rho;
  const std::size_t pairs = static_cast<std::size_t>(led.n) * (led.n - 1) / 2;
  led.taus.assign(pairs, {});
  led.sigma.assign(pairs, 0);

  for (int i = 0; i < led.n; ++i)
    for (int j = i + 1; j < led.n; ++j) {
      auto& taus = led.taus[led.pair_index(i, j)];
      bool want_dip = true;
      double cursor = s;
      for (std::size_t g = 0; g < traj.segments().size(); ++g) {
        const auto [seg_lo, seg_hi] = segment_bounds(traj, g);
        const double hi = std::min(seg_hi, t);
        if (seg_hi < cursor || seg_lo > hi) continue;
        const PairMotion m = PairMotion::on(traj.segments()[g], i, j);
        double lo = std::max(seg_lo, cursor);
        while (true) {
          std::optional<double> hit;
          if (want_dip) {
            if (m.distance2(lo) <= low * low) {
              hit = lo;
            } else if (auto r = m.crossings(low); r && r->first >= lo && r->first <= hi) {
              hit = r->first;
            }
          } else {
            if (m.distance2(lo) > high * high) {
              hit = lo;
            } else if (auto r = m.crossings(high); r && r->second >= lo && r->second <= hi) {
              hit = r->second;
            }
          }
          if (!hit) break;
          taus.push_back(*hit);
          want_dip = !want_dip;
          lo = cursor = *hit;
        }
      }
      long count = 0;
      for (std::size_t k = 1; k < taus.size(); k += 2)
        if (taus[k] <= t) ++count;
      led.sigma[led.pair_index(i, j)] = count;
      led.total += count;
    }
  return led;
}

enum class GapKind { velocity, position };

struct Partition {
  std::vector<int> first;   // N1
  std::vector<int> second;  // N2
  double separation_time = 0.0;
  GapKind gap_kind = GapKind::velocity;
  double threshold = 0.0;
};

/// Single-linkage clusters of the columns of `points`: two points are linked
/// when closer than `threshold`.
inline std::vector<int> single_linkage(const PhaseMatrix& points, double threshold) {
  const int n = static_cast<int>(points.cols());
  UnionFind uf(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if ((points.col(a) - points.col(b)).norm() < threshold) uf.unite(a, b);
  return uf.labels();
}

inline Partition split_by_label(const std::vector<int>& labels, int chosen) {
  Partition p;
  for (int k = 0; k < static_cast<int>(labels.size()); ++k) (labels[k] == chosen ? p.first : p.second).push_back(k);
  return p;
}

/// Splits the balls so that every velocity in one family differs from every
/// velocity in the other by at least 1/(sqrt(n)(n-1)) at time T+.
inline Partition velocity_gap_partition(const Trajectory& traj, double T) {
  const int n = traj.size();
  const PhaseMatrix& v = traj.velocity(T, Side::right);
  const double threshold = 1.0 / (std::sqrt(double(n)) * (n - 1));
  const auto labels = single_linkage(v, threshold);
  if (std::all_of(labels.begin(), labels.end(), [](int l) { return l == 0; }))
    throw NoGap("velocities form a single chain at threshold " + std::to_string(threshold));
  Eigen::Index fastest = 0;
  v.colwise().norm().maxCoeff(&fastest);
  Partition p = split_by_label(labels, labels[fastest]);
  p.separation_time = T;
  p.gap_kind = GapKind::velocity;
  p.threshold = threshold;
  return p;
}

/// Splits the balls at time s by positions, with inter-family distances at
/// least |x_0(s)| n^{-3/2}, where x_0 is the evolution cut at time 0.
/// Empty when all centers chain together at that scale.
inline std::optional<Partition> position_gap_partition(const Trajectory& traj, double s) {
  const int n = traj.size();
  const PhaseMatrix x = traj.position(s);
  const double threshold = CutTrajectory(traj, 0.0).position(s).norm() * std::pow(double(n), -1.5);
  const auto labels = single_linkage(x, threshold);
  if (std::all_of(labels.begin(), labels.end(), [](int l) { return l == 0; })) return std::nullopt;
  int far = 0;
  double diameter = -1.0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (const double d = (x.col(a) - x.col(b)).norm(); d > diameter) {
        diameter = d;
        far = a;
      }
  Partition p = split_by_label(labels, labels[far]);
  p.separation_time = s;
  p.gap_kind = GapKind::position;
  p.threshold = threshold;
  return p;
}

struct SeparationCheck {
  bool separated = false;
  double min_distance = kInf;           // over cross pairs and t >= T*
  std::size_t cross_collisions_after = 0;
};

inline constexpr double kSeparationDistance = 2.5;

/// Exact minimum of every cross-family distance over [T*, end of span].
inline SeparationCheck separation_check(const Trajectory& traj, const Partition& p, double t_star) {
  if (t_star > traj.end_time() || t_star < traj.start_time())
    throw OutOfSpan("trajectory does not reach T*");
  SeparationCheck out;
  for (std::size_t g = 0; g < traj.segments().size(); ++g) {
    const auto [lo, hi] = segment_bounds(traj, g);
    if (hi < t_star) continue;
    for (int l : p.first)
      for (int k : p.second)
        out.min_distance =
            std::min(out.min_distance, PairMotion::on(traj.segments()[g], l, k).min_distance(std::max(lo, t_star), hi));
  }
  auto in = [](const std::vector<int>& set, int b) { return std::find(set.begin(), set.end(), b) != set.end(); };
  for (const auto& ev : traj.events())
    if (ev.time >= t_star && in(p.first, ev.j) != in(p.first, ev.k)) ++out.cross_collisions_after;
  out.separated = out.min_distance > kSeparationDistance && out.cross_collisions_after == 0;
  return out;
}

inline bool verify_separation(const Trajectory& traj, const Partition& p, double t_star) {
  return separation_check(traj, p, t_star).separated;
}

struct DenseCluster {
  std::vector<int> balls;
  double t1 = 0.0;
  double t2 = 0.0;
  IntervalKind interval_kind = IntervalKind::right_open;
  std::size_t count = 0;           // collisions inside `balls` on the interval
  double rho = 0.0;
  std::size_t intervals = 0;       // M: pieces of the split at the even stopping times
  std::size_t total = 0;           // all collisions of the evolution
  bool time_reversed = false;      // searched on the reflected evolution
  double pigeonhole_floor = 0.0;   // total / (2 M n^4)
};

namespace detail {

inline DenseCluster dense_cluster_forward(const Trajectory& traj, double rho, double origin) {
  const int n = traj.size();
  const UpcrossingLedger led = upcrossings(traj, origin, traj.end_time(), rho);

  // 1. split [origin, inf) at every finite exit time of the band.
  std::vector<double> cuts{origin};
  for (const auto& ts : led.taus)
    for (std::size_t k = 1; k < ts.size(); k += 2)
      if (std::isfinite(ts[k])) cuts.push_back(ts[k]);
  std::sort(cuts.begin() + 1, cuts.end());
  cuts.push_back(kInf);
  const std::size_t pieces = cuts.size() - 1;

  // 2. the piece holding the most collisions.
  std::size_t best = 0;
  std::size_t best_count = 0;
  for (std::size_t m = 0; m < pieces; ++m)
    if (const std::size_t c = traj.count_events(cuts[m], cuts[m + 1]); c > best_count) {
      best = m;
      best_count = c;
    }
  const double lo = cuts[best];
  const double hi = cuts[best + 1];

  // 3. first-contact times of new pairs inside that piece, and the densest gap between them.
  const auto& events = traj.events();
  std::vector<double> firsts;
  std::set<std::pair<int, int>> seen;
  for (const auto& ev : events)
    if (ev.time >= lo && ev.time < hi && seen.insert({ev.j, ev.k}).second) firsts.push_back(ev.time);
  firsts.push_back(hi);
  std::size_t gap = 0;
  std::size_t gap_count = 0;
  for (std::size_t i = 0; i + 1 < firsts.size(); ++i)
    if (const std::size_t c = traj.count_events(firsts[i], firsts[i + 1]); c > gap_count) {
      gap = i;
      gap_count = c;
    }
  const double u_lo = firsts[gap];
  const double u_hi = firsts[gap + 1];

  // 4. pairs that collided in [lo, u_lo], grouped by chains of shared balls.
  UnionFind uf(n);
  std::vector<std::pair<int, int>> pairs;
  for (const auto& ev : events)
    if (ev.time >= lo && ev.time <= u_lo) {
      uf.unite(ev.j, ev.k);
      pairs.push_back({ev.j, ev.k});
    }
  std::map<int, std::size_t> per_class;
  for (const auto& ev : events)
    if (ev.time >= u_lo && ev.time < u_hi) ++per_class[uf.find(ev.j)];
  int chosen = -1;
  std::size_t chosen_count = 0;
  for (const auto& [root, c] : per_class)
    if (c > chosen_count) {
      chosen = root;
      chosen_count = c;
    }

  DenseCluster out;
  std::set<int> balls;
  for (auto [a, b] : pairs)
    if (uf.find(a) == chosen) {
      balls.insert(a);
      balls.insert(b);
    }
  out.balls.assign(balls.begin(), balls.end());
  out.t1 = u_lo;
  out.t2 = u_hi;
  out.interval_kind = IntervalKind::right_open;
  out.count = chosen_count;
  out.rho = rho;
  out.intervals = pieces;
  return out;
}

}  // namespace detail

/// Finds a ball family that stays rho-connected over a time interval holding
/// a guaranteed share of the collisions: split time at the band exit times,
/// take the busiest piece, split it at first contacts of new pairs, take the
/// busiest gap, and keep the chain-connected class of earlier colliding
/// pairs with the most collisions in that gap.
///
/// The search runs on [origin, inf); if more collisions happen before
/// `origin`, it runs on the evolution reflected about `origin` instead and
/// the interval is reported back in the original clock (as (t1, t2]).
inline DenseCluster dense_cluster_search(const Trajectory& traj, double rho, double origin = 0.0) {
  if (!(rho > 0.0)) throw InvalidInput("rho must be positive");
  const std::size_t after = traj.count_events(origin, kInf);
  const std::size_t before = traj.events().size() - after;
  if (traj.events().empty()) throw NoCollisions("the evolution has no collisions");
  DenseCluster out;
  if (after >= before) {
    out = detail::dense_cluster_forward(traj, rho, origin);
  } else {
    const Trajectory mirrored = traj.shifted(-origin).reversed().shifted(origin);
    out = detail::dense_cluster_forward(mirrored, rho, origin);
    const double t1 = out.t1;
    out.t1 = 2.0 * origin - out.t2;
    out.t2 = 2.0 * origin - t1;
    out.interval_kind = IntervalKind::left_open;
    out.time_reversed = true;
  }
  out.total = traj.events().size();
  out.pigeonhole_floor = double(out.total) / (2.0 * double(out.intervals) * std::pow(double(traj.size()), 4));
  return out;
}

}  // namespace hardball
