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

// Exact event-driven evolution of hard balls.
//
// Between collisions every ball moves ballistically, so a whole evolution
// is described by the list of collision events plus one (x, v) segment per
// inter-event gap. The engine predicts pair contact times in closed form and
// never integrates anything numerically.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "hardball/core.hpp"

namespace hardball {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Side { left, right };

struct CollisionEvent {
  double time = 0.0;
  int j = 0;  // j < k
  int k = 0;
  SpatialVector contact_axis;  // (x^j - x^k) / 2 at impact
  SpatialVector pre_j, pre_k;
  SpatialVector post_j, post_k;
  double min_other_gap = kInf;  // min over the other pairs of |x^a - x^b| - 2
};

/// Piecewise-linear record of an evolution. Segment i holds the motion on
/// the gap between event i-1 and event i; segment 0 covers everything
/// before the first event (back to -inf when the past is unbounded) and the
/// last segment everything after the final event (to +inf when terminal).
class Trajectory {
 public:
  struct Segment {
    double anchor = 0.0;  // x(t) = x + (t - anchor) v on this segment
    PhaseMatrix x;
    PhaseMatrix v;
  };

  Trajectory() = default;

  explicit Trajectory(SystemState reference, bool past_unbounded = false)
      : reference_(std::move(reference)),
        start_(past_unbounded ? -kInf : reference_.time),
        end_(reference_.time),
        past_unbounded_(past_unbounded) {
    segments_.push_back({reference_.time, reference_.positions, reference_.velocities});
  }

  void append(CollisionEvent event, PhaseMatrix x_at_event, PhaseMatrix v_after) {
    const double t = event.time;
    times_.push_back(t);
    events_.push_back(std::move(event));
    segments_.push_back({t, std::move(x_at_event), std::move(v_after)});
    end_ = std::max(end_, t);
  }

  /// Closes the record: either nothing ever happens again (terminal) or the
  /// span stops at `end_time`.
  void finish(bool terminal, double end_time) {
    future_unbounded_ = terminal;
    end_ = terminal ? kInf : end_time;
  }

  int size() const { return reference_.size(); }
  int dimension() const { return reference_.dimension(); }
  const SystemState& reference() const { return reference_; }
  double start_time() const { return start_; }
  double end_time() const { return end_; }
  bool past_unbounded() const { return past_unbounded_; }
  bool terminal() const { return future_unbounded_; }
  const std::vector<CollisionEvent>& events() const { return events_; }
  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<double>& event_times() const { return times_; }

  bool contains(double t) const { return t >= start_ && t <= end_; }

  /// Index of the segment whose velocity is v(t-) (left) or v(t+) (right).
  std::size_t segment_index(double t, Side side) const {
    check_span(t);
    const auto it = side == Side::left ? std::lower_bound(times_.begin(), times_.end(), t)
                                       : std::upper_bound(times_.begin(), times_.end(), t);
    return static_cast<std::size_t>(it - times_.begin());
  }

  PhaseMatrix position(double t) const {
    const Segment& s = segments_[segment_index(t, Side::right)];
    return s.x + (t - s.anchor) * s.v;
  }

  const PhaseMatrix& velocity(double t, Side side = Side::right) const {
    return segments_[segment_index(t, side)].v;
  }

  SystemState evaluate(double t, Side side = Side::right) const {
    return {t, position(t), velocity(t, side)};
  }

  /// Number of events with time in [from, to).
  std::size_t count_events(double from, double to) const {
    return static_cast<std::size_t>(std::lower_bound(times_.begin(), times_.end(), to) -
                                    std::lower_bound(times_.begin(), times_.end(), from));
  }

  /// Running minimum of the other-pair gaps recorded at collision times.
  double delta_observed() const {
    double d = kInf;
    for (const auto& e : events_) d = std::min(d, e.min_other_gap);
    return d;
  }

  Trajectory shifted(double dt) const {
    Trajectory out = *this;
    out.reference_.time += dt;
    out.start_ += dt;
    out.end_ += dt;
    for (auto& t : out.times_) t += dt;
    for (auto& e : out.events_) e.time += dt;
    for (auto& s : out.segments_) s.anchor += dt;
    return out;
  }

  /// The same evolution with time running backwards: t -> -t, v -> -v.
  Trajectory reversed() const {
    Trajectory out;
    out.reference_ = time_reverse(reference_);
    out.reference_.time = -reference_.time;
    out.start_ = -end_;
    out.end_ = -start_;
    out.past_unbounded_ = future_unbounded_;
    out.future_unbounded_ = past_unbounded_;
    for (auto it = events_.rbegin(); it != events_.rend(); ++it) {
      CollisionEvent e = *it;
      e.time = -it->time;
      e.pre_j = -it->post_j;
      e.pre_k = -it->post_k;
      e.post_j = -it->pre_j;
      e.post_k = -it->pre_k;
      out.times_.push_back(e.time);
      out.events_.push_back(std::move(e));
    }
    for (auto it = segments_.rbegin(); it != segments_.rend(); ++it)
      out.segments_.push_back({-it->anchor, it->x, -it->v});
    return out;
  }

  /// Joins a record ending at time t with one starting at t. The future's
  /// first segment replaces the past's last one; both describe the same motion.
  static Trajectory splice(const Trajectory& past, const Trajectory& future) {
    if (past.end_ != future.start_) throw InvalidInput("spliced trajectories must meet");
    Trajectory out = future;
    out.start_ = past.start_;
    out.past_unbounded_ = past.past_unbounded_;
    out.times_ = past.times_;
    out.times_.insert(out.times_.end(), future.times_.begin(), future.times_.end());
    out.events_ = past.events_;
    out.events_.insert(out.events_.end(), future.events_.begin(), future.events_.end());
    out.segments_.assign(past.segments_.begin(), past.segments_.end() - 1);
    out.segments_.insert(out.segments_.end(), future.segments_.begin(), future.segments_.end());
    return out;
  }

  /// Rebuilds a record from its first segment and event list, as stored in
  /// an event log: each event carries the state ballistically to its time
  /// and replaces the velocities of its pair.
  static Trajectory replay(SystemState reference, Segment first, double start, bool past_unbounded,
                           std::vector<CollisionEvent> events, bool terminal, double end) {
    Trajectory out;
    out.reference_ = std::move(reference);
    out.start_ = start;
    out.end_ = end;
    out.past_unbounded_ = past_unbounded;
    out.future_unbounded_ = terminal;
    out.segments_.push_back(std::move(first));
    for (auto& e : events) {
      if (!out.times_.empty() && e.time < out.times_.back()) throw InvalidInput("event times must not decrease");
      const Segment& prev = out.segments_.back();
      if (e.j < 0 || e.k <= e.j || e.k >= prev.v.cols()) throw InvalidInput("event pair out of range");
      Segment next{e.time, prev.x + (e.time - prev.anchor) * prev.v, prev.v};
      next.v.col(e.j) = e.post_j;
      next.v.col(e.k) = e.post_k;
      out.times_.push_back(e.time);
      out.events_.push_back(std::move(e));
      out.segments_.push_back(std::move(next));
    }
    return out;
  }

 private:
  void check_span(double t) const {
    if (!contains(t)) throw OutOfSpan("time " + std::to_string(t) + " outside the simulated span");
  }

  SystemState reference_;
  double start_ = 0.0;
  double end_ = 0.0;
  bool past_unbounded_ = false;
  bool future_unbounded_ = false;
  std::vector<double> times_;
  std::vector<CollisionEvent> events_;
  std::vector<Segment> segments_;
};

class EventBudgetExceeded : public Error {
 public:
  explicit EventBudgetExceeded(Trajectory partial)
      : Error("event budget exhausted after " + std::to_string(partial.events().size()) + " collisions"),
        partial_(std::move(partial)) {}
  const Trajectory& partial() const noexcept { return partial_; }

 private:
  Trajectory partial_;
};

/// Earliest t >= 0 with |dx + t dv| = 2 at which the pair is approaching.
/// Roots come from the cancellation-free form q = -b + sqrt(b^2 - ac),
/// t = c / q; grazing roots (normal speed within tol.zero) are discarded.
inline std::optional<double> predict_contact(const SpatialVector& dx, const SpatialVector& dv,
                                             const Tolerances& tol = default_tolerances) {
  const double b = dx.dot(dv);
  if (b >= 0.0) return std::nullopt;
  const double a = dv.squaredNorm();
  const double c = dx.squaredNorm() - kContactDistance * kContactDistance;
  const double disc = b * b - a * c;
  if (disc <= 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  if (root <= kContactDistance * tol.zero) return std::nullopt;
  return std::max(0.0, c / (root - b));
}

inline std::optional<double> predict_pair_collision(const SystemState& s, int j, int k,
                                                    const Tolerances& tol = default_tolerances) {
  return predict_contact(s.positions.col(j) - s.positions.col(k), s.velocities.col(j) - s.velocities.col(k), tol);
}

/// Incremental event loop; after each collision only the predictions of the
/// two participants are refreshed.
class EventEngine {
 public:
  explicit EventEngine(SystemState state, const Tolerances& tol = default_tolerances)
      : state_(std::move(state)), tol_(tol), n_(state_.size()),
        predicted_(static_cast<std::size_t>(n_) * n_, kInf) {
    for (int j = 0; j < n_; ++j)
      for (int k = j + 1; k < n_; ++k) predict(j, k);
  }

  const SystemState& state() const { return state_; }

  double next_time() const {
    auto [j, k] = next_pair();
    return j < 0 ? kInf : predicted_[slot(j, k)];
  }

  CollisionEvent advance() {
    const auto [j, k] = next_pair();
    if (j < 0) throw InvalidInput("no further collision is predicted");
    const double t = predicted_[slot(j, k)];
    check_simultaneous(t, j, k);

    state_.positions += (t - state_.time) * state_.velocities;
    state_.time = t;

    CollisionEvent ev;
    ev.time = t;
    ev.j = j;
    ev.k = k;
    const SpatialVector dx = state_.positions.col(j) - state_.positions.col(k);
    const double d = dx.norm();
    if (std::abs(d - kContactDistance) > tol_.drift)
      throw DriftExceeded("contact distance drifted to " + std::to_string(d));
    ev.contact_axis = dx / d;
    ev.pre_j = state_.velocities.col(j);
    ev.pre_k = state_.velocities.col(k);
    std::tie(ev.post_j, ev.post_k) = exchange_normal_components(ev.pre_j, ev.pre_k, ev.contact_axis);
    state_.velocities.col(j) = ev.post_j;
    state_.velocities.col(k) = ev.post_k;

    for (int a = 0; a < n_; ++a)
      for (int b = a + 1; b < n_; ++b)
        if (!(a == j && b == k))
          ev.min_other_gap = std::min(ev.min_other_gap, pair_distance(state_, a, b) - kContactDistance);

    for (int other = 0; other < n_; ++other) {
      if (other != j) predict(std::min(j, other), std::max(j, other));
      if (other != k) predict(std::min(k, other), std::max(k, other));
    }
    recent_.push_back({t, {j, k}});
    while (!recent_.empty() && recent_.front().first < t - tol_.simultaneous) recent_.pop_front();
    return ev;
  }

 private:
  std::size_t slot(int j, int k) const { return static_cast<std::size_t>(j) * n_ + k; }

  void predict(int j, int k) {
    const auto dt = predict_pair_collision(state_, j, k, tol_);
    predicted_[slot(j, k)] = dt ? state_.time + *dt : kInf;
  }

  std::pair<int, int> next_pair() const {
    std::pair<int, int> best{-1, -1};
    double t_best = kInf;
    for (int j = 0; j < n_; ++j)
      for (int k = j + 1; k < n_; ++k)
        if (predicted_[slot(j, k)] < t_best) {
          t_best = predicted_[slot(j, k)];
          best = {j, k};
        }
    return best;
  }

  // Contacts within tol.simultaneous of t (upcoming or just resolved) that
  // chain three or more balls together make the outcome undetermined.
  void check_simultaneous(double t, int j, int k) const {
    std::vector<std::pair<int, int>> group{{j, k}};
    for (int a = 0; a < n_; ++a)
      for (int b = a + 1; b < n_; ++b)
        if (!(a == j && b == k) && predicted_[slot(a, b)] <= t + tol_.simultaneous) group.push_back({a, b});
    for (const auto& [time, pair] : recent_)
      if (time >= t - tol_.simultaneous) group.push_back(pair);
    if (group.size() < 2) return;
    std::vector<int> degree(n_, 0);
    for (auto [a, b] : group) {
      ++degree[a];
      ++degree[b];
    }
    if (std::any_of(degree.begin(), degree.end(), [](int d) { return d >= 2; })) {
      std::sort(group.begin(), group.end());
      throw SimultaneousCollision(t, std::move(group));
    }
  }

  SystemState state_;
  Tolerances tol_;
  int n_;
  std::vector<double> predicted_;
  std::deque<std::pair<double, std::pair<int, int>>> recent_;
};

/// One event-driven step from `state`; returns the input unchanged and no
/// event when no pair will ever collide.
inline std::pair<SystemState, std::optional<CollisionEvent>> step_to_next_event(
    const SystemState& state, const Tolerances& tol = default_tolerances) {
  EventEngine engine(state, tol);
  if (!std::isfinite(engine.next_time())) return {state, std::nullopt};
  CollisionEvent ev = engine.advance();
  return {engine.state(), std::move(ev)};
}

struct SimulateOptions {
  std::size_t max_events = 1'000'000;
  std::optional<double> horizon;
};

/// Forward evolution from `initial` until no pair can collide again, the
/// horizon is passed, or the event budget runs out (EventBudgetExceeded,
/// carrying the partial record).
inline Trajectory simulate(const SystemState& initial, const SimulateOptions& options = {},
                           const Tolerances& tol = default_tolerances) {
  validate_state(initial, tol);
  Trajectory traj(initial);
  EventEngine engine(initial, tol);
  while (true) {
    const double t = engine.next_time();
    if (!std::isfinite(t)) {
      traj.finish(true, kInf);
      return traj;
    }
    if (options.horizon && t > *options.horizon) {
      traj.finish(false, *options.horizon);
      return traj;
    }
    if (traj.events().size() >= options.max_events) {
      traj.finish(false, engine.state().time);
      throw EventBudgetExceeded(std::move(traj));
    }
    CollisionEvent ev = engine.advance();
    traj.append(std::move(ev), engine.state().positions, engine.state().velocities);
  }
}

/// Whole evolution on (-inf, +inf): the past is obtained by simulating the
/// time-reversed state forward and reflecting the result. The reference
/// state stays at its own time.
inline Trajectory simulate_evolution(const SystemState& initial, const SimulateOptions& options = {},
                                     const Tolerances& tol = default_tolerances) {
  SystemState back = time_reverse(initial);
  back.time = -initial.time;
  Trajectory past = simulate(back, {options.max_events, std::nullopt}, tol).reversed();
  SimulateOptions forward = options;
  forward.max_events = options.max_events - std::min(options.max_events, past.events().size());
  try {
    return Trajectory::splice(past, simulate(initial, forward, tol));
  } catch (const EventBudgetExceeded& e) {
    throw EventBudgetExceeded(Trajectory::splice(past, e.partial()));
  }
}

}  // namespace hardball
