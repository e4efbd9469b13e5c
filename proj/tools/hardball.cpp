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


// hardball: simulate, verify, tabulate bounds, search and extract clusters.
//
// Exit codes: 0 success, 1 failed claim or invalid input, 2 degenerate
// input (simultaneous collision, zero energy, overlap), 3 event budget.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hardball/hardball.hpp"
#include "hardball/io.hpp"

namespace fs = std::filesystem;
using namespace hardball;
using ojson = nlohmann::ordered_json;

namespace {

struct RunConfig {
  std::string scenario = "line_of_balls";
  int n = 4;
  int d = 2;
  std::uint64_t seed = 1;
  double spacing = 3.0;
  double box_scale = kDefaultBoxScale;
  double rho = 0.2;
  double delta = 0.5;
  double x0 = 1.0;
  double origin = 0.0;
  std::size_t max_events = 1'000'000;
  std::optional<double> horizon;
  std::size_t samples = 20;
  std::size_t instances = 1;
  std::size_t trials = 10000;
  std::string n_range;
  std::string log;
  std::string out;
  Tolerances tol;
};

void add_scenario_options(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--scenario", c.scenario, "line_of_balls, random_admissible, head_on, or a state JSON file");
  cmd->add_option("--n", c.n, "number of balls")->check(CLI::Range(2, 100000));
  cmd->add_option("--d", c.d, "dimension")->check(CLI::Range(2, 1000));
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--spacing", c.spacing, "line_of_balls spacing");
  cmd->add_option("--box-scale", c.box_scale, "random_admissible box scale");
  cmd->add_option("--max-events", c.max_events, "collision budget");
  cmd->add_option("--horizon", c.horizon, "stop the forward run at this time");
}

void add_tolerance_options(CLI::App* cmd, RunConfig& c) {
  const std::pair<const char*, double*> tols[] = {
      {"--tol-contact", &c.tol.contact}, {"--tol-overlap", &c.tol.overlap},          {"--tol-conserve", &c.tol.conserve},
      {"--tol-zero", &c.tol.zero},       {"--tol-simultaneous", &c.tol.simultaneous}, {"--tol-mono", &c.tol.mono},
      {"--tol-t0", &c.tol.t0},           {"--tol-drift", &c.tol.drift}};
  for (const auto& [flag, ptr] : tols) cmd->add_option(flag, *ptr)->check(CLI::PositiveNumber);
}

/// Two balls approaching head-on along the first axis.
SystemState head_on(int d) {
  SystemState s{0.0, PhaseMatrix::Zero(d, 2), PhaseMatrix::Zero(d, 2)};
  s.positions(0, 0) = -3.0;
  s.positions(0, 1) = 3.0;
  s.velocities(0, 0) = 1.0;
  s.velocities(0, 1) = -1.0;
  return s;
}

SystemState load_state(const RunConfig& c, std::uint64_t seed) {
  SystemState s;
  if (c.scenario == "line_of_balls") {
    s = line_of_balls(c.n, c.d, c.spacing, c.tol).state;
  } else if (c.scenario == "random_admissible") {
    s = random_admissible(c.n, c.d, seed, c.box_scale, c.tol).state;
  } else if (c.scenario == "head_on") {
    s = head_on(c.d);
  } else {
    std::ifstream in(c.scenario);
    if (!in) throw InvalidInput("unknown scenario or unreadable file: " + c.scenario);
    s = io::read_state(in);
  }
  validate_state(s, c.tol);
  return is_normalized(s, c.tol) ? s : normalize_frame(s, c.tol);
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << text;
}

ojson real(double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); }

int cmd_simulate(const RunConfig& c) {
  const SystemState s = load_state(c, c.seed);
  Trajectory traj;
  try {
    traj = simulate_evolution(s, {c.max_events, c.horizon}, c.tol);
  } catch (const EventBudgetExceeded& e) {
    if (!c.out.empty()) {
      std::ostringstream log;
      io::write_event_log(log, e.partial());
      write_file(fs::path(c.out) / "events.jsonl", log.str());
    }
    throw;
  }
  io::Summary sum;
  sum.collisions = traj.events().size();
  sum.terminal = traj.terminal();
  sum.delta_observed = traj.delta_observed();
  try {
    sum.t0 = find_t0(traj);
    sum.x0_norm = traj.position(sum.t0).norm();
  } catch (const NotBracketed&) {
    sum.t0 = NAN;
    sum.x0_norm = NAN;
  }
  const std::string summary = io::summary_json(sum) + "\n";
  if (!c.out.empty()) {
    std::ostringstream log;
    io::write_event_log(log, traj);
    write_file(fs::path(c.out) / "events.jsonl", log.str());
    write_file(fs::path(c.out) / "summary.json", summary);
  }
  std::cout << summary;
  return 0;
}

std::size_t thread_cap() {
  std::size_t cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HARDBALL_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) cap = std::min(cap, static_cast<std::size_t>(v));
  }
  return cap;
}

ojson claim_json(const ClaimResult& r) {
  ojson j;
  j["pass"] = r.pass;
  j["checks"] = r.checks;
  j["failures"] = r.failures;
  j["worst"] = real(r.worst);
  ojson notes = ojson::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(r.notes.size(), 10); ++i) notes.push_back(r.notes[i]);
  j["notes"] = notes;
  j["notes_total"] = r.notes.size();
  return j;
}

int cmd_verify(const RunConfig& c) {
  VerifyOptions opt;
  opt.rho = c.rho;
  opt.samples = c.samples;
  VerifyReport total;
  std::size_t replaced = 0;
  std::size_t instances = 0;

  if (!c.log.empty()) {
    std::ifstream in(c.log);
    if (!in) throw InvalidInput("cannot read " + c.log);
    const Trajectory traj = io::read_event_log(in);
    merge_into(total, verify_trajectory(normalize_time_origin(traj), opt, c.tol));
    instances = 1;
  } else {
    // Seed k of the run is the k-th non-degenerate draw; collect seeds first
    // so the parallel phase is order-independent.
    struct Job {
      Trajectory traj;
      VerifyReport report;
    };
    std::vector<Job> jobs;
    std::uint64_t draw = 0;
    while (jobs.size() < c.instances) {
      const std::uint64_t seed = c.scenario == "random_admissible" ? derive_seed(c.seed, draw) : c.seed;
      ++draw;
      try {
        jobs.push_back({normalize_time_origin(simulate_evolution(load_state(c, seed), {c.max_events, c.horizon}, c.tol)), {}});
      } catch (const SimultaneousCollision&) {
        if (c.scenario != "random_admissible") throw;
        ++replaced;
      }
    }
    std::size_t next = 0;
    std::mutex m;
    auto worker = [&] {
      while (true) {
        std::size_t i;
        {
          std::lock_guard<std::mutex> lock(m);
          if (next == jobs.size()) return;
          i = next++;
        }
        jobs[i].report = verify_trajectory(jobs[i].traj, opt, c.tol);
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(thread_cap(), jobs.size()); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (const auto& j : jobs) merge_into(total, j.report);
    instances = jobs.size();
  }

  const auto failed = failed_claims(total);
  ojson rep;
  rep["instances"] = instances;
  rep["replaced_seeds"] = replaced;
  rep["rho"] = c.rho;
  ojson claims;
  for (const auto& name : claim_names()) claims[name] = claim_json(total[name]);
  rep["claims"] = claims;
  rep["failed"] = failed;
  rep["pass"] = failed.empty();
  const std::string text = rep.dump(2) + "\n";
  if (!c.out.empty()) write_file(c.out, text);
  std::cout << text;
  if (!failed.empty()) {
    std::cerr << "failed claims:";
    for (const auto& f : failed) std::cerr << " " << f;
    std::cerr << "\n";
    return 1;
  }
  return 0;
}

std::pair<int, int> parse_range(const std::string& text, int fallback) {
  if (text.empty()) return {fallback, fallback};
  static const std::regex range(R"(^\s*(\d{1,6})\s*(?:\.\.\s*(\d{1,6}))?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, range)) throw InvalidInput("malformed n range '" + text + "', expected a..b");
  const int lo = std::stoi(m[1]);
  const int hi = m[2].matched ? std::stoi(m[2]) : lo;
  if (lo > hi) throw InvalidInput("n range is reversed");
  return {lo, hi};
}

int cmd_bounds(const RunConfig& c) {
  const auto [lo, hi] = parse_range(c.n_range, c.n);
  std::ostringstream csv;
  csv << "n,delta,rho,log10_bfk_radius,log10_bfk_mass,log10_phi_delta,log10_phi_rho,cubic_lower,T,T_star\n";
  for (int n = lo; n <= hi; ++n) {
    const PartitionTimes pt = partition_times(n, c.x0);
    csv << n << "," << io::num(c.delta) << "," << io::num(c.rho) << "," << io::num(bfk_radius_bound(n).log10_value)
        << "," << io::num(bfk_mass_bound(n).log10_value) << "," << io::num(thm_nf_bound(n, c.delta).log10_value) << ","
        << io::num(phi_rho_bound(n, c.rho).log10_value) << "," << io::num(lower_bound_cubic(n)) << "," << io::num(pt.T)
        << "," << io::num(pt.T_star) << "\n";
  }
  if (!c.out.empty()) write_file(c.out, csv.str());
  std::cout << csv.str();
  return 0;
}

int cmd_search(const RunConfig& c) {
  SearchOptions opt;
  opt.max_events = std::min<std::size_t>(c.max_events, opt.max_events);
  const SearchResult r = search_max_collisions(c.n, c.d, c.trials, c.seed, opt, c.tol);
  ojson rep;
  rep["n"] = c.n;
  rep["d"] = c.d;
  rep["seed"] = c.seed;
  rep["trials"] = r.trials;
  rep["degenerate"] = r.degenerate;
  rep["best_collisions"] = r.count;
  rep["delta_observed"] = real(r.delta_observed);
  const auto bound = log10_phi_for_run(c.n, r.delta_observed);
  rep["log10_phi_delta_observed"] = bound ? ojson(*bound) : ojson(nullptr);
  rep["within_bound"] = !bound || std::log10(double(std::max<std::size_t>(r.count, 1))) <= *bound;
  if (!c.out.empty()) {
    const fs::path dir(c.out);
    write_file(dir / "witness.json", io::state_json(r.best.state) + "\n");
    rep["witness"] = (dir / "witness.json").string();
  }
  const std::string text = rep.dump(2) + "\n";
  if (!c.out.empty()) write_file(fs::path(c.out) / "search.json", text);
  std::cout << text;
  return rep["within_bound"].get<bool>() ? 0 : 1;
}

int cmd_cluster(const RunConfig& c) {
  const Trajectory traj = simulate_evolution(load_state(c, c.seed), {c.max_events, c.horizon}, c.tol);
  const DenseCluster dc = dense_cluster_search(traj, c.rho, c.origin);
  const bool connected = is_rho_connected(traj, dc.balls, dc.t1, dc.t2, c.rho, dc.interval_kind, c.tol);
  const bool floor_met = double(dc.count) >= dc.pigeonhole_floor;
  ojson rep;
  rep["balls"] = dc.balls;
  rep["t1"] = real(dc.t1);
  rep["t2"] = real(dc.t2);
  rep["interval"] = dc.interval_kind == IntervalKind::right_open ? "[t1,t2)" : "(t1,t2]";
  rep["time_reversed"] = dc.time_reversed;
  rep["count"] = dc.count;
  rep["rho"] = dc.rho;
  rep["intervals"] = dc.intervals;
  rep["total_collisions"] = dc.total;
  rep["pigeonhole_floor"] = dc.pigeonhole_floor;
  rep["rho_connected"] = connected;
  rep["floor_met"] = floor_met;
  const std::string text = rep.dump(2) + "\n";
  if (!c.out.empty()) write_file(c.out, text);
  std::cout << text;
  return connected && floor_met ? 0 : 1;
}

template <class F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const SimultaneousCollision& e) {
    std::cerr << "degenerate input: " << e.what() << "\n";
    return 2;
  } catch (const ZeroEnergy& e) {
    std::cerr << "degenerate input: " << e.what() << "\n";
    return 2;
  } catch (const InvalidState& e) {
    std::cerr << "degenerate input: " << e.what() << "\n";
    return 2;
  } catch (const DriftExceeded& e) {
    std::cerr << "degenerate input: " << e.what() << "\n";
    return 2;
  } catch (const EventBudgetExceeded& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hard-ball collision simulator and claim verifier"};
  app.require_subcommand(1);
  RunConfig c;

  auto* sim = app.add_subcommand("simulate", "simulate an evolution and write its event log");
  add_scenario_options(sim, c);
  add_tolerance_options(sim, c);
  sim->add_option("--out", c.out, "output directory for events.jsonl and summary.json");

  auto* ver = app.add_subcommand("verify", "run the invariant suite");
  add_scenario_options(ver, c);
  add_tolerance_options(ver, c);
  ver->add_option("--log", c.log, "verify a recorded event log instead of a scenario");
  ver->add_option("--instances", c.instances, "number of instances")->check(CLI::PositiveNumber);
  ver->add_option("--rho", c.rho, "band width for upcrossings")->check(CLI::PositiveNumber);
  ver->add_option("--samples", c.samples, "extra samples per trajectory")->check(CLI::PositiveNumber);
  ver->add_option("--out", c.out, "report file");

  auto* bnd = app.add_subcommand("bounds", "tabulate the bound formulas as CSV");
  bnd->add_option("--n", c.n, "single n");
  bnd->add_option("--n-range", c.n_range, "range a..b");
  bnd->add_option("--delta", c.delta, "separation delta in (0, 1]");
  bnd->add_option("--rho", c.rho, "band width");
  bnd->add_option("--x0", c.x0, "|x(0)| for the partition times");
  bnd->add_option("--out", c.out, "CSV file");

  auto* sea = app.add_subcommand("search", "random search for many-collision configurations");
  add_scenario_options(sea, c);
  add_tolerance_options(sea, c);
  sea->add_option("--trials", c.trials, "number of trials")->check(CLI::PositiveNumber);
  sea->add_option("--out", c.out, "output directory for witness.json and search.json");

  auto* clu = app.add_subcommand("cluster", "extract a dense rho-connected cluster");
  add_scenario_options(clu, c);
  add_tolerance_options(clu, c);
  clu->add_option("--rho", c.rho, "connectivity slack")->check(CLI::PositiveNumber);
  clu->add_option("--origin", c.origin, "time the search starts from");
  clu->add_option("--out", c.out, "report file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (*sim) return guarded([&] { return cmd_simulate(c); });
  if (*ver) return guarded([&] { return cmd_verify(c); });
  if (*bnd) return guarded([&] { return cmd_bounds(c); });
  if (*sea) return guarded([&] { return cmd_search(c); });
  return guarded([&] { return cmd_cluster(c); });
}
