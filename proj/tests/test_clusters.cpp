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


#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "hardball/bounds.hpp"
#include "hardball/clusters.hpp"
#include "hardball/scenarios.hpp"

namespace hardball {
namespace {

Trajectory frozen(const SystemState& s) {
  Trajectory t(s);
  t.finish(false, s.time);
  return t;
}

SystemState placed(const std::vector<std::pair<double, double>>& centers,
                   const std::vector<std::pair<double, double>>& velocities = {}) {
  const int n = static_cast<int>(centers.size());
  SystemState s{0.0, PhaseMatrix::Zero(2, n), PhaseMatrix::Zero(2, n)};
  for (int k = 0; k < n; ++k) {
    s.positions.col(k) << centers[k].first, centers[k].second;
    if (!velocities.empty()) s.velocities.col(k) << velocities[k].first, velocities[k].second;
  }
  return s;
}

/// Oracle for sigma: stepping through time on a fine grid, apply the same
/// alternating entry / exit rule to the sampled distances.
long sampled_sigma(const Trajectory& t, int i, int j, double rho, double from, double to, double step) {
  const double low = 2.0 + 0.5 * rho;
  const double high = 2.0 + rho;
  bool want_dip = true;
  long count = 0;
  std::size_t seg = t.segment_index(from, Side::right);
  const auto& times = t.event_times();
  for (double s = from; s <= to; s += step) {
    while (seg < times.size() && times[seg] <= s) ++seg;
    const auto& g = t.segments()[seg];
    const double d = (g.x.col(i) - g.x.col(j) + (s - g.anchor) * (g.v.col(i) - g.v.col(j))).norm();
    if (want_dip && d <= low) {
      want_dip = false;
    } else if (!want_dip && d > high) {
      want_dip = true;
      ++count;
    }
  }
  return count;
}

TEST(ContactGraph, BoundaryIsInclusive) {
  const double rho = 0.25;
  EXPECT_TRUE(contact_graph(frozen(placed({{0, 0}, {2 + rho, 0}})), 0.0, rho).has_edge(0, 1));
  EXPECT_FALSE(contact_graph(frozen(placed({{0, 0}, {2 + rho + 1e-9, 0}})), 0.0, rho).has_edge(0, 1));
  EXPECT_THROW(contact_graph(frozen(placed({{0, 0}, {3, 0}})), 1.0, rho), OutOfSpan);
}

TEST(ContactGraph, ChainIsOneComponent) {
  const auto g = contact_graph(frozen(placed({{0, 0}, {2.1, 0}, {4.2, 0}})), 0.0, 0.2);
  EXPECT_EQ(g.component_count(), 1);
  // Direct adjacency: only neighbours are linked.
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(1, 2));
  EXPECT_FALSE(g.has_edge(0, 2));
  EXPECT_TRUE(g.same_component({0, 1, 2}));
}

TEST(RhoConnected, SingletonAndSeparatingPair) {
  // d(t) = 2.1 + 0.2 t crosses 2 + rho = 2.2 at t = 0.5.
  SystemState s = placed({{-1.05, 0}, {1.05, 0}}, {{-0.1, 0}, {0.1, 0}});
  const Trajectory t = simulate_evolution(s);
  const double rho = 0.2;
  EXPECT_TRUE(is_rho_connected(t, {1}, 0.0, 10.0, rho));
  EXPECT_TRUE(is_rho_connected(t, {0, 1}, 0.0, 0.4, rho));
  EXPECT_TRUE(is_rho_connected(t, {0, 1}, 0.0, 0.5, rho));
  EXPECT_TRUE(is_rho_connected(t, {0, 1}, 0.0, 0.5, rho, IntervalKind::right_open));
  EXPECT_FALSE(is_rho_connected(t, {0, 1}, 0.0, 0.6, rho));
  EXPECT_FALSE(is_rho_connected(t, {0, 1}, 0.0, kInf, rho));
  EXPECT_FALSE(is_rho_connected(t, {0, 1}, 0.50001, 0.6, rho));
}

TEST(RhoConnected, BridgeWindowInsideOneSegment) {
  // Balls 0 and 2 are 3.5 apart; ball 1 sweeps past at height 2.05 and
  // links both (within 2 + rho = 3) only while its x lies in [1.31, 2.19].
  SystemState s = placed({{0, 0}, {-10, 2.05}, {3.5, 0}}, {{0, 0}, {1, 0}, {0, 0}});
  const Trajectory t = simulate_evolution(s);
  ASSERT_TRUE(t.events().empty());
  const double half = std::sqrt(9.0 - 2.05 * 2.05);
  EXPECT_TRUE(is_rho_connected(t, {0, 2}, 10.0 + 3.5 - half + 1e-6, 10.0 + half - 1e-6, 1.0));
  EXPECT_FALSE(is_rho_connected(t, {0, 2}, 11.0, 12.0, 1.0));
  EXPECT_FALSE(is_rho_connected(t, {0, 2}, 0.0, 20.0, 1.0));
  EXPECT_FALSE(is_rho_connected(t, {0, 2}, 12.0, 13.0, 1.0));
}

TEST(RhoConnected, LineOfBallsDuringTheBurst) {
  const Scenario sc = line_of_balls(5, 2, 3.0);
  const Trajectory t = simulate_evolution(sc.state);
  EXPECT_TRUE(is_rho_connected(t, {0, 1, 2, 3, 4}, t.event_times().front(), t.event_times().back(), 1.0));
}

TEST(Upcrossings, NeverCloseAndOneRoundTrip) {
  const Trajectory far = simulate_evolution(placed({{0, 0}, {0, 10}}, {{0.5, 0}, {-0.5, 0}}));
  const auto a = upcrossings(far, -100.0, kInf, 0.2);
  EXPECT_EQ(a.sigma_of(0, 1), 0);
  EXPECT_EQ(a.total, 0);

  const Trajectory head = simulate_evolution(normalize_frame(placed({{-3, 0}, {3, 0}}, {{1, 0}, {-1, 0}})));
  const auto b = upcrossings(head, 0.0, kInf, 0.2);
  EXPECT_EQ(b.sigma_of(0, 1), 1);
  ASSERT_EQ(b.stopping_times(0, 1).size(), 2u);
  // Analytic: closing / opening at speed sqrt(2) toward the collision at 2 sqrt(2).
  const double tc = 2 * std::sqrt(2.0);
  EXPECT_NEAR(b.stopping_times(0, 1)[0], tc - 0.1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(b.stopping_times(0, 1)[1], tc + 0.2 / std::sqrt(2.0), 1e-12);
  EXPECT_THROW(upcrossings(simulate(head.evaluate(0.0), {10, 1.0}), 0.0, 2.0, 0.2), OutOfSpan);
  EXPECT_THROW(upcrossings(head, 1.0, 1.0, 0.2), InvalidInput);
}

TEST(Upcrossings, ExactMatchesDenseSampling) {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 30; ++seed) {
    Trajectory t;
    try {
      t = normalize_time_origin(simulate_evolution(random_admissible(3 + seed % 2, 2, seed, 2.0).state));
    } catch (const SimultaneousCollision&) {
      continue;
    }
    ++checked;
    const double to = (t.events().empty() ? 0.0 : std::max(0.0, t.event_times().back())) + 10.0;
    for (double rho : {0.05, 0.2}) {
      const auto exact_far = upcrossings(t, 0.0, kInf, rho);
      const auto exact = upcrossings(t, 0.0, to, rho);
      for (int i = 0; i < t.size(); ++i)
        for (int j = i + 1; j < t.size(); ++j) {
          EXPECT_EQ(exact.sigma_of(i, j), sampled_sigma(t, i, j, rho, 0.0, to, 1e-4)) << seed << " " << i << j;
          EXPECT_EQ(exact.sigma_of(i, j), exact_far.sigma_of(i, j));
          const auto ev = exact.even_times(i, j);
          for (std::size_t k = 1; k < ev.size(); ++k) EXPECT_GE(ev[k] - ev[k - 1], 0.5 * rho - 1e-9);
        }
      EXPECT_LE(double(exact_far.total), upcrossing_budget(t.size(), rho));
    }
  }
}

TEST(VelocityGap, HeadOnPair) {
  const Trajectory t = normalize_time_origin(simulate_evolution(normalize_frame(placed({{-3, 0}, {3, 0}}, {{1, 0}, {-1, 0}}))));
  const Partition p = velocity_gap_partition(t, 18 * std::sqrt(2.0) * t.position(0.0).norm());
  ASSERT_EQ(p.first.size() + p.second.size(), 2u);
  ASSERT_EQ(p.first.size(), 1u);
  const PhaseMatrix& v = t.velocity(1.0);
  EXPECT_GE((v.col(0) - v.col(1)).norm(), 1 / std::sqrt(2.0));
}

TEST(VelocityGap, TwoBunchesAndNoGap) {
  const Trajectory bunches = frozen(placed({{0, 0}, {5, 0}, {10, 0}, {15, 0}}, {{0, 0}, {0.01, 0}, {0.5, 0}, {0.51, 0}}));
  const Partition p = velocity_gap_partition(bunches, 0.0);
  EXPECT_EQ(p.first, (std::vector<int>{2, 3}));
  EXPECT_EQ(p.second, (std::vector<int>{0, 1}));
  const double step = 1.0 / (2 * std::sqrt(4.0) * 3);
  const Trajectory chained =
      frozen(placed({{0, 0}, {5, 0}, {10, 0}, {15, 0}}, {{0, 0}, {step, 0}, {2 * step, 0}, {3 * step, 0}}));
  EXPECT_THROW(velocity_gap_partition(chained, 0.0), NoGap);
}

TEST(Separation, TerminalPairWrongPartitionAndMonotone) {
  const Trajectory t = normalize_time_origin(simulate_evolution(normalize_frame(placed({{-3, 0}, {3, 0}}, {{1, 0}, {-1, 0}}))));
  Partition p;
  p.first = {0};
  p.second = {1};
  EXPECT_TRUE(verify_separation(t, p, 10.0));
  EXPECT_TRUE(verify_separation(t, p, 1000.0));
  // Before the collision the pair is still at contact distance.
  EXPECT_FALSE(verify_separation(t, p, -5.0));
  const auto c = separation_check(t, p, -5.0);
  EXPECT_NEAR(c.min_distance, 2.0, 1e-9);
  EXPECT_EQ(c.cross_collisions_after, 1u);
  // Stopped by the horizon before the pair meets.
  Trajectory bounded = simulate(t.evaluate(-20.0), {10, -15.0});
  ASSERT_FALSE(bounded.terminal());
  EXPECT_THROW(separation_check(bounded, p, 50.0), OutOfSpan);
}

TEST(Separation, BulkRandom) {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 50; ++seed) {
    const int n = 3 + static_cast<int>(seed % 4);
    Trajectory t;
    try {
      t = normalize_time_origin(simulate_evolution(random_admissible(n, 2, seed, 2.5).state));
    } catch (const SimultaneousCollision&) {
      continue;
    }
    ++checked;
    const PartitionTimes pt = partition_times(n, t.position(0.0).norm());
    const Partition p = velocity_gap_partition(t, pt.T);
    EXPECT_FALSE(p.first.empty());
    EXPECT_FALSE(p.second.empty());
    EXPECT_TRUE(verify_separation(t, p, pt.T_star)) << seed;
    EXPECT_TRUE(verify_separation(t, p, 2 * pt.T_star)) << seed;
  }
}

TEST(PositionGap, FarPairSplits) {
  const Trajectory t = simulate_evolution(placed({{-40, 0}, {40, 0}}, {{-0.5, 0.1}, {0.5, -0.1}}));
  const auto p = position_gap_partition(t, 1.0);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->first.size() + p->second.size(), 2u);
  const PhaseMatrix x = t.position(1.0);
  EXPECT_GE((x.col(0) - x.col(1)).norm(), p->threshold);
}

TEST(PositionGap, CompactClusterAndThresholdMonotonicity) {
  const Trajectory t = simulate_evolution(line_of_balls(4).state);
  // Inside the starting regime: the answer may be empty, either is allowed.
  const auto p = position_gap_partition(t, 0.0);
  if (p) {
    EXPECT_EQ(p->first.size() + p->second.size(), 4u);
  }
  const PhaseMatrix x = random_admissible(6, 2, 4).state.positions;
  std::vector<int> prev = single_linkage(x, 0.5);
  for (double thr : {1.0, 2.0, 3.0, 4.0, 8.0, 100.0}) {
    const auto cur = single_linkage(x, thr);
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b)
        if (prev[a] == prev[b]) {
          EXPECT_EQ(cur[a], cur[b]);
        }
    prev = cur;
  }
}

TEST(DenseCluster, SingleCollision) {
  const Trajectory t = simulate_evolution(normalize_frame(placed({{-3, 0}, {3, 0}}, {{1, 0}, {-1, 0}})));
  const DenseCluster c = dense_cluster_search(t, 0.2);
  EXPECT_EQ(c.balls, (std::vector<int>{0, 1}));
  EXPECT_EQ(c.count, 1u);
  EXPECT_TRUE(is_rho_connected(t, c.balls, c.t1, c.t2, 0.2, c.interval_kind));
  const Trajectory none = simulate_evolution(placed({{0, 0}, {0, 10}}, {{0.5, 0}, {-0.5, 0}}));
  EXPECT_THROW(dense_cluster_search(none, 0.2), NoCollisions);
}

TEST(DenseCluster, LineOfFourWithWideBand) {
  const Trajectory t = simulate_evolution(line_of_balls(4).state);
  const DenseCluster c = dense_cluster_search(t, 50.0);
  EXPECT_EQ(c.balls, (std::vector<int>{0, 1, 2, 3}));
  // Oracle: with one band piece, the last new pair's first collision opens
  // the busiest gap, which then runs to the end.
  std::set<std::pair<int, int>> seen;
  double last_first = 0.0;
  for (const auto& e : t.events())
    if (seen.insert({e.j, e.k}).second) last_first = e.time;
  EXPECT_EQ(c.t1, last_first);
  EXPECT_EQ(c.count, t.count_events(last_first, kInf));
  // Every pair starts inside the band and leaves it once for good after the
  // last collision, so each contributes one cut.
  EXPECT_EQ(c.intervals, 1u + 6u);
  EXPECT_TRUE(is_rho_connected(t, c.balls, c.t1, c.t2, 50.0, c.interval_kind));
}

TEST(DenseCluster, PostconditionsOnRandomRuns) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Trajectory t;
    try {
      t = simulate_evolution(random_admissible(4 + seed % 3, 2, seed, 3.0).state);
    } catch (const SimultaneousCollision&) {
      continue;
    }
    if (t.events().empty()) continue;
    for (double rho : {0.05, 0.3}) {
      const DenseCluster c = dense_cluster_search(t, rho);
      EXPECT_TRUE(is_rho_connected(t, c.balls, c.t1, c.t2, rho, c.interval_kind)) << seed;
      EXPECT_GE(double(c.count), c.pigeonhole_floor);
      EXPECT_GE(c.count, 1u);
    }
  }
}

TEST(DenseCluster, ReflectsWhenThePastIsBusier) {
  const Trajectory fwd = simulate_evolution(line_of_balls(4).state);
  const double after = fwd.event_times().back() + 1.0;
  const Trajectory t = fwd.shifted(-after);  // every collision now lies before 0
  const DenseCluster c = dense_cluster_search(t, 0.5);
  EXPECT_TRUE(c.time_reversed);
  EXPECT_EQ(c.interval_kind, IntervalKind::left_open);
  EXPECT_TRUE(is_rho_connected(t, c.balls, c.t1, c.t2, 0.5, c.interval_kind));
  EXPECT_GE(double(c.count), c.pigeonhole_floor);
}

}  // namespace
}  // namespace hardball
