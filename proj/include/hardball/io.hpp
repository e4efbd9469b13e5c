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

// File formats: JSON states, versioned JSONL event logs and JSON summaries.
// Every double is written with 17 significant digits so a reread value is
// bit-identical; non-finite values are written as null.

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "hardball/engine.hpp"

namespace hardball::io {

inline constexpr const char* kEventSchema = "hardball-events";
inline constexpr int kEventVersion = 1;
inline constexpr const char* kSummarySchema = "hardball-summary";

inline std::string num(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

inline std::string vec(const SpatialVector& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
  return s + "]";
}

/// Columns of a d x n matrix as a list of n vectors.
inline std::string cols(const PhaseMatrix& m) {
  std::string s = "[";
  for (Eigen::Index k = 0; k < m.cols(); ++k) s += (k ? "," : "") + vec(m.col(k));
  return s + "]";
}

inline std::string state_json(const SystemState& s) {
  return "{\"dimension\":" + std::to_string(s.dimension()) + ",\"time\":" + num(s.time) +
         ",\"centers\":" + cols(s.positions) + ",\"velocities\":" + cols(s.velocities) + "}";
}

namespace detail {

using nlohmann::json;

inline double real(const json& j, double if_null) {
  if (j.is_null()) return if_null;
  if (!j.is_number()) throw InvalidInput("expected a number");
  return j.get<double>();
}

inline PhaseMatrix matrix(const json& j, int d) {
  if (!j.is_array() || j.empty()) throw InvalidInput("expected a non-empty list of vectors");
  PhaseMatrix m(d, static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_array() || static_cast<int>(j[k].size()) != d) throw InvalidInput("vector length differs from dimension");
    for (int a = 0; a < d; ++a) m(a, static_cast<Eigen::Index>(k)) = real(j[k][a], NAN);
  }
  return m;
}

inline SpatialVector vector(const json& j, int d) {
  if (!j.is_array() || static_cast<int>(j.size()) != d) throw InvalidInput("vector length differs from dimension");
  SpatialVector v(d);
  for (int a = 0; a < d; ++a) v[a] = real(j[a], NAN);
  return v;
}

inline void require_unit(const json& doc, const char* key) {
  if (!doc.contains(key)) return;
  for (const auto& x : doc[key])
    if (!x.is_number() || x.get<double>() != 1.0) throw InvalidInput(std::string("only unit ") + key + " are supported");
}

inline SystemState state(const json& doc) {
  if (!doc.is_object() || !doc.contains("dimension") || !doc.contains("centers") || !doc.contains("velocities"))
    throw InvalidInput("state needs dimension, centers and velocities");
  require_unit(doc, "masses");
  require_unit(doc, "radii");
  const int d = doc["dimension"].get<int>();
  if (d < 2) throw InvalidInput("dimension must be at least 2");
  SystemState s{doc.contains("time") ? real(doc["time"], 0.0) : 0.0, matrix(doc["centers"], d),
                matrix(doc["velocities"], d)};
  if (s.positions.cols() != s.velocities.cols()) throw InvalidInput("centers and velocities differ in count");
  return s;
}

inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace detail

inline SystemState read_state(std::istream& in) {
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return detail::state(detail::parse(ss.str()));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("bad state file: ") + e.what());
  }
}

inline std::string event_json(const CollisionEvent& e) {
  return "{\"time\":" + num(e.time) + ",\"pair\":[" + std::to_string(e.j) + "," + std::to_string(e.k) +
         "],\"contact_axis\":" + vec(e.contact_axis) + ",\"pre\":[" + vec(e.pre_j) + "," + vec(e.pre_k) +
         "],\"post\":[" + vec(e.post_j) + "," + vec(e.post_k) + "],\"min_other_gap\":" + num(e.min_other_gap) + "}";
}

/// Header line followed by one line per collision.
inline void write_event_log(std::ostream& out, const Trajectory& traj) {
  const auto& first = traj.segments().front();
  out << "{\"schema\":\"" << kEventSchema << "\",\"version\":" << kEventVersion << ",\"n\":" << traj.size()
      << ",\"d\":" << traj.dimension() << ",\"reference\":" << state_json(traj.reference())
      << ",\"first_segment\":{\"anchor\":" << num(first.anchor) << ",\"centers\":" << cols(first.x)
      << ",\"velocities\":" << cols(first.v) << "},\"start_time\":" << num(traj.start_time())
      << ",\"end_time\":" << num(traj.end_time()) << ",\"past_unbounded\":" << (traj.past_unbounded() ? "true" : "false")
      << ",\"terminal\":" << (traj.terminal() ? "true" : "false") << "}\n";
  for (const auto& e : traj.events()) out << event_json(e) << "\n";
}

/// Rebuilds the trajectory recorded by write_event_log. Unknown schemas or
/// versions are rejected.
inline Trajectory read_event_log(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("empty event log");
  try {
    const auto head = detail::parse(line);
    if (!head.is_object() || head.value("schema", std::string()) != kEventSchema)
      throw InvalidInput("not a hardball event log");
    if (!head.contains("version") || head["version"] != kEventVersion)
      throw InvalidInput("unsupported event log version " + head.value("version", nlohmann::json()).dump());
    const int d = head.at("d").get<int>();
    const int n = head.at("n").get<int>();
    const SystemState reference = detail::state(head.at("reference"));
    const auto& fs = head.at("first_segment");
    Trajectory::Segment first{detail::real(fs.at("anchor"), NAN), detail::matrix(fs.at("centers"), d),
                              detail::matrix(fs.at("velocities"), d)};
    if (first.x.cols() != n || first.v.cols() != n || reference.size() != n)
      throw InvalidInput("ball count differs from header");
    std::vector<CollisionEvent> events;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = detail::parse(line);
      CollisionEvent e;
      e.time = detail::real(j.at("time"), NAN);
      e.j = j.at("pair").at(0).get<int>();
      e.k = j.at("pair").at(1).get<int>();
      e.contact_axis = detail::vector(j.at("contact_axis"), d);
      e.pre_j = detail::vector(j.at("pre").at(0), d);
      e.pre_k = detail::vector(j.at("pre").at(1), d);
      e.post_j = detail::vector(j.at("post").at(0), d);
      e.post_k = detail::vector(j.at("post").at(1), d);
      e.min_other_gap = detail::real(j.value("min_other_gap", nlohmann::json()), kInf);
      if (!std::isfinite(e.time)) throw InvalidInput("event time must be finite");
      events.push_back(std::move(e));
    }
    return Trajectory::replay(reference, std::move(first), detail::real(head.at("start_time"), -kInf),
                              head.at("past_unbounded").get<bool>(), std::move(events),
                              head.at("terminal").get<bool>(), detail::real(head.at("end_time"), kInf));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("bad event log: ") + e.what());
  }
}

struct Summary {
  std::size_t collisions = 0;
  bool terminal = false;
  double delta_observed = kInf;
  double x0_norm = 0.0;  // |x| at the time origin t0
  double t0 = 0.0;
};

inline std::string summary_json(const Summary& s) {
  return std::string("{\"schema\":\"") + kSummarySchema + "\",\"version\":1,\"collisions\":" +
         std::to_string(s.collisions) + ",\"terminal\":" + (s.terminal ? "true" : "false") +
         ",\"delta_observed\":" + num(s.delta_observed) + ",\"x0_norm\":" + num(s.x0_norm) + ",\"t0\":" + num(s.t0) +
         "}";
}

}  // namespace hardball::io
