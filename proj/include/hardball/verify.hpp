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

// The full invariant suite over one evolution, shared by the command line
// verifier and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "hardball/bounds.hpp"
#include "hardball/clusters.hpp"
#include "hardball/functionals.hpp"

namespace hardball {

struct ClaimResult {
  bool pass = true;
  std::size_t checks = 0;
  std::size_t failures = 0;
  double worst = 0.0;
  std::vector<std::string> notes;

  void merge(const ClaimResult& o) {
    pass = pass && o.pass;
    checks += o.checks;
    failures += o.failures;
    worst = std::max(worst, o.worst);
    notes.insert(notes.end(), o.notes.begin(), o.notes.end());
  }

  void fail(std::string why) {
    ++checks;
    ++failures;
    pass = false;
    notes.push_back(std::move(why));
  }
};

inline const std::vector<std::string>& claim_names() {
  static const std::vector<std::string> names{
      "lemma_angle_dwn", "lemma_angle_cut", "lemma_norm_bound", "lemma_angle_x", "lemma_norm_increasing",
      "F_monotone",      "separation_T_star", "upcrossing_spacing", "S_bound"};
  return names;
}

using VerifyReport = std::map<std::string, ClaimResult>;

inline ClaimResult from_monotonicity(const MonotonicityReport& r) {
  ClaimResult c;
  c.pass = r.pass;
  c.checks = r.checks;
  c.failures = r.failures;
  c.worst = r.worst_violation;
  c.notes = r.notes;
  return c;
}

struct VerifyOptions {
  double rho = 0.2;
  std::size_t cuts = 5;
  std::size_t samples = 20;
};

/// Cut times: `count` points spread over {0} and the collision times >= 0.
inline std::vector<double> pick_cut_times(const Trajectory& traj, std::size_t count) {
  std::vector<double> pool{0.0};
  for (double t : traj.event_times())
    if (t > 0.0) pool.push_back(t);
  std::vector<double> out;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(pool[count == 1 ? 0 : i * (pool.size() - 1) / (count - 1)]);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// `count` evenly spaced samples covering the collisions with one time unit of margin.
inline std::vector<double> pick_samples(const Trajectory& traj, std::size_t count) {
  double lo = -1.0;
  double hi = 1.0;
  if (!traj.events().empty()) {
    lo = std::min(lo, traj.event_times().front() - 1.0);
    hi = std::max(hi, traj.event_times().back() + 1.0);
  }
  lo = std::max(lo, traj.start_time());
  hi = std::min(hi, traj.end_time());
  std::vector<double> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(count == 1 ? lo : lo + (hi - lo) * double(i) / double(count - 1));
  return out;
}

/// Separation after T* of the velocity-gap partition taken at T.
inline ClaimResult check_separation(const Trajectory& traj) {
  ClaimResult c;
  try {
    const double x0 = traj.position(0.0).norm();
    const PartitionTimes pt = partition_times(traj.size(), x0);
    const Partition p = velocity_gap_partition(traj, pt.T);
    const SeparationCheck s = separation_check(traj, p, pt.T_star);
    c.checks = p.first.size() * p.second.size() + 1;
    if (!s.separated) {
      c.failures = 1;
      c.pass = false;
      c.worst = kSeparationDistance - s.min_distance;
      c.notes.push_back("min cross distance " + std::to_string(s.min_distance) + ", cross collisions after T* " +
                        std::to_string(s.cross_collisions_after));
    }
  } catch (const Error& e) {
    c.fail(e.what());
  }
  return c;
}

inline constexpr double kSpacingSlack = 1e-9;

inline std::pair<ClaimResult, ClaimResult> check_upcrossings(const Trajectory& traj, double rho) {
  ClaimResult spacing;
  ClaimResult budget;
  try {
    const UpcrossingLedger led = upcrossings(traj, 0.0, traj.end_time(), rho);
    for (int i = 0; i < led.n; ++i)
      for (int j = i + 1; j < led.n; ++j) {
        const auto ev = led.even_times(i, j);
        for (std::size_t k = 1; k < ev.size(); ++k) {
          const double short_by = 0.5 * rho - (ev[k] - ev[k - 1]);
          ++spacing.checks;
          spacing.worst = std::max(spacing.worst, short_by);
          if (short_by > kSpacingSlack) {
            ++spacing.failures;
            spacing.pass = false;
          }
        }
      }
    const double cap = upcrossing_budget(led.n, rho);
    budget.checks = 1;
    if (!(double(led.total) <= cap)) budget.fail("S = " + std::to_string(led.total) + " exceeds the budget");
  } catch (const Error& e) {
    spacing.fail(e.what());
    budget.fail(e.what());
  }
  return {spacing, budget};
}

/// Runs every claim on an evolution whose time origin is already at t0.
inline VerifyReport verify_trajectory(const Trajectory& traj, const VerifyOptions& opt = {},
                                      const Tolerances& tol = default_tolerances) {
  VerifyReport rep;
  for (const auto& name : claim_names()) rep[name] = {};
  const auto samples = pick_samples(traj, opt.samples);
  try {
    for (const auto& r : check_lemma_suite(traj, pick_cut_times(traj, opt.cuts), samples, tol))
      rep[r.claim] = from_monotonicity(r);
  } catch (const Error& e) {
    for (int i = 0; i < 5; ++i) rep[claim_names()[i]].fail(e.what());
  }
  try {
    rep["F_monotone"] = from_monotonicity(check_F_monotone_all_axes(traj, samples, tol));
  } catch (const Error& e) {
    rep["F_monotone"].fail(e.what());
  }
  rep["separation_T_star"] = check_separation(traj);
  auto [spacing, budget] = check_upcrossings(traj, opt.rho);
  rep["upcrossing_spacing"] = spacing;
  rep["S_bound"] = budget;
  return rep;
}

inline void merge_into(VerifyReport& total, const VerifyReport& one) {
  for (const auto& [k, v] : one) total[k].merge(v);
}

inline std::vector<std::string> failed_claims(const VerifyReport& rep) {
  std::vector<std::string> out;
  for (const auto& name : claim_names())
    if (auto it = rep.find(name); it != rep.end() && !it->second.pass) out.push_back(name);
  return out;
}

}  // namespace hardball
