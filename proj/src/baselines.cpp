// Copyright 2026 The uavsched Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "uavsched/baselines.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <thread>

#include "uavsched/bundle.hpp"

namespace uavsched {

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Optimized: return "optimized";
    case Scheme::Straight: return "straight";
    case Scheme::Static: return "static";
  }
  return "?";
}

Trajectory straight_trajectory(const Scenario& s) {
  const int slots = s.num_slots();
  Trajectory q;
  q.points.resize(static_cast<size_t>(slots));
  const Vec2 q0 = s.mission.q_start;
  const Vec2 qf = s.mission.q_end;
  for (int m = 0; m < slots; ++m) {
    const double f = static_cast<double>(m) / (slots - 1);
    q[m] = q0 + f * (qf - q0);
  }
  q.points.front() = q0;  // pin endpoints bit-exactly
  q.points.back() = qf;
  return q;
}

Vec2 sensor_centroid(const Scenario& s) {
  Vec2 c(0.0, 0.0);
  for (const Sensor& u : s.sensors) c += u.position;
  return c / static_cast<double>(s.num_sensors());
}

namespace {

/// Schedule-only solve for a fixed path (the two benchmark schemes).
Solution solve_fixed_path(const Scenario& s, const Trajectory& q,
                          const SolveOptions& opt_in, const char* scheme) {
  const SolveOptions opt = opt_in.resolved(s);
  const LinkBudget lb(s);

  Solution sol;
  sol.scheme = scheme;
  sol.kappa = opt.kappa;
  sol.seed = opt.seed;
  sol.trajectory = q;
  sol.rates = lb.rate_matrix(q.points);

  LpSolution lp = solve_schedule_lp(s, sol.rates,
                                    opt.dump_lp ? &sol.lp_text : nullptr);
  if (!lp.optimal()) {
    std::ostringstream msg;
    msg << "schedule infeasible for the " << scheme << " scheme: sensor";
    for (size_t i = 0; i < lp.unmet_sensors.size(); ++i) {
      msg << (i ? ", " : " ") << lp.unmet_sensors[i] + 1;
    }
    fail(ErrorKind::Infeasible, msg.str());
  }
  sol.schedule = lp.schedule;
  sol.theta = lp.theta;
  sol.trace.theta.push_back(lp.theta);
  sol.trace.eta.push_back(eval_eta(s, sol.schedule, sol.trajectory, lb));
  sol.trace.iterations = 0;
  sol.trace.converged = true;
  sol.blocks = round_schedule(sol.schedule, s.mission.blocks_per_slot);
  sol.sensors = evaluate_solution(s, sol.schedule, sol.blocks, sol.rates);
  return sol;
}

Scenario apply_sweep(const Scenario& s, const std::string& var, double value) {
  if (var == "S") return with_data_bits(s, value);
  if (var == "eps") return with_outage_eps(s, value);
  if (var == "T") return with_horizon(s, value);
  fail(ErrorKind::Argument,
       "unknown sweep variable '" + var + "' (expected S, eps or T)");
}

}  // namespace

Solution solve_scheme(const Scenario& s, Scheme scheme,
                      const SolveOptions& opt) {
  switch (scheme) {
    case Scheme::Optimized: {
      Solution sol = optimize(s, straight_trajectory(s), opt);
      sol.scheme = scheme_name(scheme);
      return sol;
    }
    case Scheme::Straight:
      return solve_fixed_path(s, straight_trajectory(s), opt,
                              scheme_name(scheme));
    case Scheme::Static: {
      // fixed hovering collector at the centroid; endpoints do not apply
      const Vec2 c = sensor_centroid(s);
      Trajectory q;
      q.points.assign(static_cast<size_t>(s.num_slots()), c);
      return solve_fixed_path(s, q, opt, scheme_name(scheme));
    }
  }
  fail(ErrorKind::Argument, "unknown scheme");
}

CompareResult compare(const Scenario& s, const SweepSpec& sweep,
                      const SolveOptions& opt, const std::string& artifact_dir,
                      int max_workers) {
  std::vector<double> grid = sweep.grid;
  std::string var = sweep.variable;
  if (grid.empty()) {
    grid.push_back(0.0);  // single-point comparison
    var.clear();
  }
  const Scheme schemes[] = {Scheme::Optimized, Scheme::Straight,
                            Scheme::Static};

  CompareResult result;
  result.rows.resize(grid.size() * 3);

  auto run_point = [&](size_t i) {
    Scenario point = var.empty() ? s : apply_sweep(s, var, grid[i]);
    for (int si = 0; si < 3; ++si) {
      CompareRow& row = result.rows[i * 3 + static_cast<size_t>(si)];
      row.scheme = schemes[si];
      row.sweep_var = var;
      row.sweep_value = var.empty() ? 0.0 : grid[i];
      const auto t0 = std::chrono::steady_clock::now();
      try {
        Solution sol = solve_scheme(point, schemes[si], opt);
        row.theta = sol.theta;
        row.feasible = true;
        row.iterations = sol.trace.iterations;
        if (!artifact_dir.empty()) {
          const std::string dir = artifact_dir + "/point_" +
                                  std::to_string(i + 1) + "/" +
                                  scheme_name(schemes[si]);
          write_bundle(point, sol, dir);
        }
      } catch (const Error& e) {
        row.feasible = false;
        row.error = e.what();
      }
      row.wall_seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
    }
  };

  int workers = max_workers > 0
                    ? max_workers
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min<int>(workers, static_cast<int>(grid.size())));
  if (workers == 1) {
    for (size_t i = 0; i < grid.size(); ++i) run_point(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        while (true) {
          const size_t i = next.fetch_add(1);
          if (i >= grid.size()) return;
          run_point(i);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  return result;
}

std::string compare_csv(const CompareResult& result) {
  std::ostringstream o;
  o << "sweep_var,sweep_value,scheme,theta,feasible,iterations,wall_seconds,error\n";
  for (const CompareRow& r : result.rows) {
    o << r.sweep_var << "," << format_double(r.sweep_value) << ","
      << scheme_name(r.scheme) << ","
      << (r.feasible ? format_double(r.theta) : "") << ","
      << (r.feasible ? "1" : "0") << "," << r.iterations << ","
      << format_double(r.wall_seconds) << ",";
    for (char c : r.error) o << (c == ',' ? ';' : c);  // keep CSV flat
    o << "\n";
  }
  return o.str();
}

}  // namespace uavsched
