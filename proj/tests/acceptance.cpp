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


// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Random instances whose evolution hits a simultaneous
// collision are replaced by the next seed; replacements are reported.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hardball/bounds_exact.hpp"
#include "hardball/hardball.hpp"
#include "hardball/io.hpp"

using namespace hardball;

namespace {

constexpr double kBoxScale = 2.5;  // denser than the generator default, so more instances collide

struct Instance {
  std::uint64_t seed = 0;
  Trajectory traj;  // time origin at t0
};

struct Family {
  std::vector<Instance> items;
  std::size_t replaced = 0;
};

/// `count` admissible instances with n and d cycling through the given lists.
Family draw(std::size_t count, std::uint64_t master, const std::vector<int>& ns, const std::vector<int>& ds) {
  Family f;
  for (std::uint64_t k = 0; f.items.size() < count; ++k) {
    const std::size_t i = f.items.size();
    const int n = ns[i % ns.size()];
    const int d = ds[(i / ns.size()) % ds.size()];
    const std::uint64_t seed = derive_seed(master, k);
    try {
      f.items.push_back({seed, normalize_time_origin(simulate_evolution(random_admissible(n, d, seed, kBoxScale).state))});
    } catch (const SimultaneousCollision&) {
      ++f.replaced;
    }
  }
  return f;
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body, double budget_seconds) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > budget_seconds) {
    o.pass = false;
    o.detail += "; over time budget";
  }
  if (!o.pass) ++failures;
  std::printf("[%s] %2d %s: %s (%.2f s, budget %.0f s)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(),
              secs, budget_seconds);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<std::pair<int, int>> pair_sequence(const Trajectory& t) {
  std::vector<std::pair<int, int>> out;
  for (const auto& e : t.events()) out.push_back({e.j, e.k});
  return out;
}

long sampled_sigma(const Trajectory& t, int i, int j, double rho, double from, double to, double step) {
  const double low = 2.0 + 0.5 * rho;
  const double high = 2.0 + rho;
  bool want_dip = true;
  long count = 0;
  std::size_t seg = t.segment_index(from, Side::right);
  const auto& times = t.event_times();
  const std::size_t steps = static_cast<std::size_t>(std::floor((to - from) / step));
  for (std::size_t q = 0; q <= steps; ++q) {
    const double s = from + double(q) * step;
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

/// Counts of every run seen so far, with their observed separation.
struct RunRecord {
  int n;
  std::size_t count;
  double delta;
};
std::vector<RunRecord> runs;

void remember(const Trajectory& t) { runs.push_back({t.size(), t.events().size(), t.delta_observed()}); }

}  // namespace

int main() {
  const Family mixed = draw(200, 2024, {2, 3, 4, 5, 6}, {2, 3});
  for (const auto& in : mixed.items) remember(in.traj);
  std::printf("instances: 200 drawn, %zu seeds replaced after simultaneous collisions\n", mixed.replaced);

  report(1, "1D cascade counts", [] {
    Outcome o;
    std::ostringstream got;
    for (int n = 2; n <= 10; ++n) {
      const Trajectory t = simulate_evolution(line_of_balls(n, 2).state);
      remember(t);
      got << t.events().size() << (n < 10 ? "," : "");
      if (t.events().size() != static_cast<std::size_t>(n * (n - 1) / 2)) o.pass = false;
    }
    o.detail = "counts n=2..10 = " + got.str();
    return o;
  }, 1.0);

  report(2, "conservation suite", [&] {
    Outcome o;
    double worst_e = 0, worst_p = 0, worst_x = 0, min_d = kInf;
    std::size_t events = 0;
    for (const auto& in : mixed.items)
      for (const auto& e : in.traj.events()) {
        ++events;
        const PhaseMatrix x = in.traj.position(e.time);
        const PhaseMatrix& v = in.traj.velocity(e.time, Side::right);
        worst_e = std::max(worst_e, std::abs(v.squaredNorm() - 1.0));
        worst_p = std::max(worst_p, v.rowwise().sum().norm());
        worst_x = std::max(worst_x, x.rowwise().sum().norm());
        min_d = std::min(min_d, min_pair_distance(x));
      }
    o.pass = worst_e <= 1e-9 && worst_p <= 1e-9 && worst_x <= 1e-9 && min_d >= 2.0 - 1e-7;
    o.detail = std::to_string(events) + " events; max ||v|^2-1| " + fmt("%.2e", worst_e) + ", max |sum v| " +
               fmt("%.2e", worst_p) + ", max |sum x| " + fmt("%.2e", worst_x) + ", min distance " + fmt("%.12f", min_d);
    return o;
  }, 30.0);

  report(3, "lemma suite", [&] {
    Outcome o;
    std::size_t checks = 0, fails = 0;
    double worst = 0;
    std::string which;
    for (const auto& in : mixed.items)
      for (const auto& r : check_lemma_suite(in.traj, pick_cut_times(in.traj, 5), pick_samples(in.traj, 20))) {
        checks += r.checks;
        fails += r.failures;
        if (r.worst_violation > worst) {
          worst = r.worst_violation;
          which = r.claim;
        }
      }
    o.pass = fails == 0;
    o.detail = std::to_string(checks) + " checks, " + std::to_string(fails) + " failures, worst excess " +
               fmt("%.2e", worst) + (which.empty() ? "" : " (" + which + ")");
    return o;
  }, 120.0);

  report(4, "order-statistic monotonicity", [&] {
    Outcome o;
    std::size_t checks = 0, fails = 0, ties = 0;
    double worst = 0;
    for (const auto& in : mixed.items) {
      const auto r = check_F_monotone_all_axes(in.traj, pick_samples(in.traj, 20));
      checks += r.checks;
      fails += r.failures;
      ties += r.notes.size();
      worst = std::max(worst, r.worst_violation);
    }
    o.pass = fails == 0;
    o.detail = std::to_string(checks) + " checks, " + std::to_string(fails) + " failures, worst increase " +
               fmt("%.2e", worst) + ", rank ties at collisions " + std::to_string(ties);
    return o;
  }, 60.0);

  report(5, "velocity-gap partition and separation", [] {
    Outcome o;
    const Family f = draw(50, 77, {3, 4, 5}, {2, 3});
    std::size_t fails = 0;
    double min_cross = kInf;
    for (const auto& in : f.items) {
      remember(in.traj);
      const PartitionTimes pt = partition_times(in.traj.size(), in.traj.position(0.0).norm());
      try {
        const Partition p = velocity_gap_partition(in.traj, pt.T);
        const SeparationCheck s = separation_check(in.traj, p, pt.T_star);
        min_cross = std::min(min_cross, s.min_distance);
        if (!s.separated || s.cross_collisions_after != 0) ++fails;
      } catch (const NoGap&) {
        ++fails;
      }
    }
    o.pass = fails == 0;
    o.detail = "50 instances (" + std::to_string(f.replaced) + " seeds replaced), " + std::to_string(fails) +
               " failures, min cross-pair distance after T* " + fmt("%.3f", min_cross);
    return o;
  }, 120.0);

  report(6, "upcrossing machinery", [&] {
    Outcome o;
    std::size_t pairs = 0, mismatches = 0, spacing_checks = 0, spacing_fails = 0, bound_fails = 0;
    long max_s = 0;
    for (std::size_t i = 0; i < 100; ++i) {
      const Trajectory& t = mixed.items[i].traj;
      const double to = (t.events().empty() ? 0.0 : std::max(0.0, t.event_times().back())) + 10.0;
      for (double rho : {0.05, 0.2}) {
        const UpcrossingLedger exact = upcrossings(t, 0.0, to, rho);
        for (int a = 0; a < t.size(); ++a)
          for (int b = a + 1; b < t.size(); ++b) {
            ++pairs;
            if (exact.sigma_of(a, b) != sampled_sigma(t, a, b, rho, 0.0, to, 1e-4)) ++mismatches;
          }
        const UpcrossingLedger full = upcrossings(t, 0.0, t.end_time(), rho);
        for (int a = 0; a < t.size(); ++a)
          for (int b = a + 1; b < t.size(); ++b) {
            const auto ev = full.even_times(a, b);
            for (std::size_t k = 1; k < ev.size(); ++k) {
              ++spacing_checks;
              if (ev[k] - ev[k - 1] < 0.5 * rho - 1e-9) ++spacing_fails;
            }
          }
        max_s = std::max(max_s, full.total);
        if (!(double(full.total) <= upcrossing_budget(t.size(), rho))) ++bound_fails;
      }
    }
    // Cascades revisit neighbouring pairs, which exercises the spacing claim.
    for (int n = 3; n <= 10; ++n) {
      const Trajectory t = simulate_evolution(line_of_balls(n, 2).state);
      for (double rho : {0.05, 0.2}) {
        const UpcrossingLedger full = upcrossings(t, t.event_times().front() - 1.0, kInf, rho);
        for (int a = 0; a + 1 < n; ++a) {
          const auto ev = full.even_times(a, a + 1);
          for (std::size_t k = 1; k < ev.size(); ++k) {
            ++spacing_checks;
            if (ev[k] - ev[k - 1] < 0.5 * rho - 1e-9) ++spacing_fails;
          }
        }
        if (!(double(full.total) <= upcrossing_budget(n, rho))) ++bound_fails;
      }
    }
    o.pass = mismatches == 0 && spacing_fails == 0 && bound_fails == 0;
    o.detail = std::to_string(pairs) + " pair ledgers, " + std::to_string(mismatches) + " sigma mismatches; " +
               std::to_string(spacing_checks) + " spacing checks, " + std::to_string(spacing_fails) + " short; max S " +
               std::to_string(max_s) + ", " + std::to_string(bound_fails) + " over budget";
    return o;
  }, 120.0);

  report(10, "search floor", [] {
    Outcome o;
    const SearchResult r = search_max_collisions(3, 2, 10000, 1);
    runs.push_back({3, r.count, r.delta_observed});
    o.pass = r.count >= 3;
    o.detail = "best " + std::to_string(r.count) + " collisions over " + std::to_string(r.trials) + " trials";
    if (r.count >= 4) {
      const std::filesystem::path file = std::filesystem::current_path() / "acceptance_witness.json";
      {
        std::ofstream out(file);
        out << io::state_json(r.best.state) << "\n";
      }
      std::ifstream in(file);
      const SystemState back = io::read_state(in);
      const std::size_t replay = simulate_evolution(back).events().size();
      o.detail += "; 4-collision witness persisted to " + file.filename().string() + ", replay gives " +
                  std::to_string(replay);
      if (replay != r.count) o.pass = false;
    } else {
      o.detail += "; no 4-collision witness at this budget";
    }
    return o;
  }, 120.0);

  report(7, "bound formulas", [] {
    Outcome o;
    double worst_rel = 0;
    std::size_t rec_fails = 0;
    auto rel = [&](double log_space, const exact::BigFloat& v) {
      const double direct = exact::log10_of(v);
      worst_rel = std::max(worst_rel, std::abs(log_space - direct) / std::abs(direct));
    };
    for (int n = 3; n <= 50; ++n) {
      rel(bfk_radius_bound(n).log10_value, exact::bfk_radius(n));
      rel(bfk_mass_bound(n).log10_value, exact::bfk_mass(n));
      rel(thm_nf_bound(n, 0.5).log10_value, exact::phi_delta(n, 0.5));
      rel(phi_rho_bound(n, 0.2).log10_value, exact::phi_rho(n, 0.2));
      if (!phi_delta_recursion_holds(n, 0.5) || exact::phi_delta(n, 0.5) < exact::phi_delta_recursion(n, 0.5)) ++rec_fails;
    }
    std::size_t tracked = 0, over = 0, skipped = 0;
    for (const auto& r : runs) {
      const auto bound = log10_phi_for_run(r.n, r.delta);
      if (!bound) {
        ++skipped;
        continue;
      }
      ++tracked;
      if (r.count > 0 && std::log10(double(r.count)) > *bound) ++over;
    }
    o.pass = worst_rel <= 1e-10 && rec_fails == 0 && over == 0;
    o.detail = "max relative log gap " + fmt("%.2e", worst_rel) + ", recursion failures " + std::to_string(rec_fails) +
               "; " + std::to_string(tracked) + " runs checked against phi at observed delta, " + std::to_string(over) +
               " over, " + std::to_string(skipped) + " without a usable delta";
    return o;
  }, 60.0);

  report(8, "reversibility", [&] {
    Outcome o;
    std::size_t used = 0, reverse_fail = 0, boost_fail = 0;
    for (const auto& in : mixed.items) {
      if (used == 50) break;
      const Trajectory& t = in.traj;
      if (!t.terminal() || t.events().empty()) continue;
      ++used;
      const SystemState end = t.evaluate(t.event_times().back() + 1.0);
      auto forward = pair_sequence(t);
      const auto backward = pair_sequence(simulate(time_reverse(end)));
      std::reverse(forward.begin(), forward.end());
      // The reversed run also replays the past half of the evolution.
      if (backward != forward) ++reverse_fail;

      SystemState raw = t.reference();
      raw.time = 0.0;
      raw.velocities *= 2.75;
      SpatialVector boost = SpatialVector::LinSpaced(raw.dimension(), 0.3, -1.2);
      raw.velocities.colwise() += boost;
      raw.positions.colwise() += SpatialVector::Constant(raw.dimension(), 7.5);
      if (pair_sequence(simulate_evolution(normalize_frame(raw))) != pair_sequence(t)) ++boost_fail;
    }
    o.pass = used == 50 && reverse_fail == 0 && boost_fail == 0;
    o.detail = std::to_string(used) + " terminal trajectories; reversal mismatches " + std::to_string(reverse_fail) +
               ", boosted mismatches " + std::to_string(boost_fail);
    return o;
  }, 60.0);

  report(9, "dense-cluster extraction", [] {
    Outcome o;
    const double spacing = 3.0;
    const double rho = 0.5 * (spacing - 2.0);
    const Trajectory t = simulate_evolution(line_of_balls(4, 2, spacing).state);
    const DenseCluster c = dense_cluster_search(t, rho);
    const bool connected = is_rho_connected(t, c.balls, c.t1, c.t2, rho, c.interval_kind);
    const double floor = double(c.total) / (2.0 * double(c.intervals) * std::pow(4.0, 4));
    o.pass = connected && double(c.count) >= floor;
    std::ostringstream balls;
    for (int b : c.balls) balls << b << " ";
    o.detail = "balls { " + balls.str() + "} on [" + fmt("%.6f", c.t1) + ", " + fmt("%.6f", c.t2) + "), count " +
               std::to_string(c.count) + ", M " + std::to_string(c.intervals) + ", floor " + fmt("%.5f", floor) +
               ", rho-connected " + (connected ? "yes" : "no");
    return o;
  }, 10.0);

  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
