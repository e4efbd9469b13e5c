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

// Scenario generators and a seeded random search for configurations with
// many collisions.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hardball/bounds.hpp"
#include "hardball/engine.hpp"

namespace hardball {

struct Scenario {
  std::string name;
  std::map<std::string, double> params;
  SystemState state;
  std::optional<std::size_t> expected_collisions;
  std::string expected_note;
};

/// n balls on the first axis with strictly decreasing velocities, so every
/// pair meets head-on exactly once. The speeds follow a convex profile:
/// with one linear in the index, all ghost lines cross at a single point
/// and the cascade degenerates into one simultaneous event.
inline Scenario line_of_balls(int n, int d = 2, double spacing = 3.0, const Tolerances& tol = default_tolerances) {
  if (n < 2) throw InvalidInput("line_of_balls needs n >= 2");
  if (d < 2) throw InvalidInput("line_of_balls needs d >= 2");
  if (!(spacing > kContactDistance)) throw InvalidInput("spacing must exceed 2");
  SystemState s{0.0, PhaseMatrix::Zero(d, n), PhaseMatrix::Zero(d, n)};
  const double scale = 1.0 / (2.0 * std::sqrt(double(n)));
  for (int i = 0; i < n; ++i) {
    s.positions(0, i) = (i + 1) * spacing;
    s.velocities(0, i) = -std::exp((i + 1) * scale);
  }
  Scenario sc;
  sc.name = "line_of_balls";
  sc.params = {{"n", n}, {"d", d}, {"spacing", spacing}};
  sc.state = normalize_frame(s, tol);
  sc.expected_collisions = static_cast<std::size_t>(n) * (n - 1) / 2;
  sc.expected_note = "one-dimensional cascade: every pair collides exactly once";
  return sc;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Child seed `index` of `master`, independent of how many siblings exist.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

inline constexpr std::size_t kMaxRejections = 100000;
inline constexpr double kDefaultBoxScale = 4.0;

/// Uniform non-overlapping centers in a box of side box_scale n^{1/d},
/// Gaussian velocities, then the normalized frame.
inline Scenario random_admissible(int n, int d, std::uint64_t seed, double box_scale = kDefaultBoxScale,
                                  const Tolerances& tol = default_tolerances) {
  if (n < 2) throw InvalidInput("random_admissible needs n >= 2");
  if (d < 2) throw InvalidInput("random_admissible needs d >= 2");
  if (!(box_scale > 0.0)) throw InvalidInput("box_scale must be positive");
  std::mt19937_64 rng(seed);
  const double side = box_scale * std::pow(double(n), 1.0 / d);
  std::uniform_real_distribution<double> place(0.0, side);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SystemState s{0.0, PhaseMatrix::Zero(d, n), PhaseMatrix::Zero(d, n)};
  std::size_t rejections = 0;
  for (int k = 0; k < n; ++k) {
    while (true) {
      for (int a = 0; a < d; ++a) s.positions(a, k) = place(rng);
      bool ok = true;
      for (int j = 0; j < k && ok; ++j) ok = (s.positions.col(j) - s.positions.col(k)).norm() >= kContactDistance;
      if (ok) break;
      if (++rejections > kMaxRejections) throw SamplingExhausted("no admissible placement after 1e5 rejections");
    }
  }
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < d; ++a) s.velocities(a, k) = gauss(rng);
  Scenario sc;
  sc.name = "random_admissible";
  sc.params = {{"n", n}, {"d", d}, {"seed", double(seed)}, {"box_scale", box_scale}};
  sc.state = normalize_frame(s, tol);
  return sc;
}

struct SearchOptions {
  double box_scale = 2.5;
  double initial_scale = 0.1;        // perturbation standard deviation
  double min_scale = 1e-6;           // below this the scale restarts at initial_scale
  std::size_t epoch = 100;
  double fresh_probability = 0.2;    // chance a trial draws a new random state
  double initial_temperature = 1.0;
  double cooling = 0.97;             // per epoch
  std::size_t max_events = 10000;
};

struct SearchResult {
  Scenario best;
  std::size_t count = 0;
  double delta_observed = kInf;
  std::size_t trials = 0;
  std::size_t degenerate = 0;        // overlapping, simultaneous or runaway candidates
  std::vector<std::pair<Scenario, std::size_t>> improvements;  // every new best, in order
};

/// Total collisions of the whole evolution through `state`, or nothing if
/// it is degenerate.
inline std::optional<std::pair<std::size_t, double>> count_collisions(const SystemState& state, std::size_t max_events,
                                                                      const Tolerances& tol = default_tolerances) {
  try {
    const Trajectory traj = simulate_evolution(state, {max_events, std::nullopt}, tol);
    return std::make_pair(traj.events().size(), traj.delta_observed());
  } catch (const SimultaneousCollision&) {
  } catch (const EventBudgetExceeded&) {
  } catch (const DriftExceeded&) {
  }
  return std::nullopt;
}

/// Simulated annealing over initial states: a trial either draws a fresh
/// admissible state or perturbs the current one with Gaussian noise, then
/// is accepted by the Metropolis rule on the collision count. The noise
/// scale halves after every epoch without a new best. Reports a witness,
/// never a bound.
inline SearchResult search_max_collisions(int n, int d, std::size_t trials, std::uint64_t seed,
                                          const SearchOptions& opt = {}, const Tolerances& tol = default_tolerances) {
  if (trials == 0) throw InvalidInput("search needs at least one trial");
  SearchResult out;
  std::mt19937_64 rng(derive_seed(seed, 0xA11EA1));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::optional<SystemState> current;
  std::size_t current_count = 0;
  double scale = opt.initial_scale;
  double temperature = opt.initial_temperature;
  bool improved_this_epoch = false;

  for (std::size_t trial = 0; trial < trials; ++trial) {
    SystemState candidate;
    bool valid = true;
    if (!current || unit(rng) < opt.fresh_probability) {
      candidate = random_admissible(n, d, derive_seed(seed, trial + 1), opt.box_scale, tol).state;
    } else {
      candidate = *current;
      for (Eigen::Index i = 0; i < candidate.positions.size(); ++i) {
        candidate.positions.data()[i] += scale * gauss(rng);
        candidate.velocities.data()[i] += scale * gauss(rng);
      }
      valid = min_pair_distance(candidate.positions) >= kContactDistance;
      if (valid) {
        try {
          candidate = normalize_frame(candidate, tol);
        } catch (const ZeroEnergy&) {
          valid = false;
        }
      }
    }
    ++out.trials;
    const auto result = valid ? count_collisions(candidate, opt.max_events, tol) : std::nullopt;
    if (!result) {
      ++out.degenerate;
    } else {
      const auto [count, delta] = *result;
      const double gain = double(count) - double(current_count);
      if (!current || gain >= 0.0 || unit(rng) < std::exp(gain / temperature)) {
        current = candidate;
        current_count = count;
      }
      if (out.improvements.empty() || count > out.count) {
        out.count = count;
        out.delta_observed = delta;
        out.best.name = "search_witness";
        out.best.params = {{"n", n}, {"d", d}, {"seed", double(seed)}, {"trial", double(trial)}};
        out.best.state = candidate;
        out.best.expected_collisions = count;
        out.best.expected_note = "collision count found by search";
        out.improvements.emplace_back(out.best, count);
        improved_this_epoch = true;
      }
    }
    if ((trial + 1) % opt.epoch == 0) {
      if (!improved_this_epoch) scale *= 0.5;
      if (scale < opt.min_scale) scale = opt.initial_scale;
      temperature *= opt.cooling;
      improved_this_epoch = false;
    }
  }
  return out;
}

/// The hypothesis-tracked bound for a run: phi at the observed separation
/// (capped at 1). Empty when the hypothesis fails (delta <= 0) or n < 3.
inline std::optional<double> log10_phi_for_run(int n, double delta_observed) {
  if (n < 3 || !(delta_observed > 0.0)) return std::nullopt;
  return thm_nf_bound(n, std::min(delta_observed, 1.0)).log10_value;
}

}  // namespace hardball
