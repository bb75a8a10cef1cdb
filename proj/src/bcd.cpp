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

#include "uavsched/bcd.hpp"

#include <algorithm>
#include <iterator>
#include <chrono>
#include <cmath>
#include <sstream>

namespace uavsched {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

[[noreturn]] void report_infeasible(const Scenario& s,
                                    const std::vector<int>& unmet) {
  std::ostringstream msg;
  msg << "schedule infeasible: demand cannot be met for sensor";
  if (unmet.size() != 1) msg << "s";
  for (size_t i = 0; i < unmet.size(); ++i) {
    msg << (i ? ", " : " ") << unmet[i] + 1;
  }
  msg << " (horizon too short or rates too low)";
  (void)s;
  fail(ErrorKind::Infeasible, msg.str());
}

}  // namespace

SolveOptions SolveOptions::resolved(const Scenario& s) const {
  SolveOptions r = *this;
  if (r.kappa <= 0.0) r.kappa = s.solver.kappa;
  if (r.max_outer <= 0) r.max_outer = s.solver.max_outer;
  if (r.max_sca <= 0) r.max_sca = s.solver.max_sca;
  if (r.seed == 0) r.seed = s.solver.seed;
  return r;
}

Eigen::MatrixXi round_schedule(const Eigen::MatrixXd& schedule,
                               int blocks_per_slot) {
  const int kcount = static_cast<int>(schedule.rows());
  const int slots = static_cast<int>(schedule.cols());
  const double lcount = static_cast<double>(blocks_per_slot);
  Eigen::MatrixXi blocks(kcount, slots);

  for (int m = 0; m < slots; ++m) {
    long total = 0;
    for (int k = 0; k < kcount; ++k) {
      const double scaled = lcount * schedule(k, m);
      blocks(k, m) = static_cast<int>(std::floor(scaled + 0.5));
      total += blocks(k, m);
    }
    if (total <= blocks_per_slot) continue;

    // collision repair: repeatedly decrement the positive entry whose
    // fractional part of L*x is smallest (ties: lowest sensor index)
    auto fractional = [&](int k) {
      const double scaled = lcount * schedule(k, m);
      return scaled - std::floor(scaled);
    };
    while (total > blocks_per_slot) {
      int pick = -1;
      for (int k = 0; k < kcount; ++k) {
        if (blocks(k, m) <= 0) continue;
        if (pick < 0 || fractional(k) < fractional(pick)) pick = k;
      }
      if (pick < 0) break;  // cannot happen: total > 0 implies an entry > 0
      --blocks(pick, m);
      --total;
    }
  }
  return blocks;
}

std::vector<SensorStats> evaluate_solution(const Scenario& s,
                                           const Eigen::MatrixXd& schedule,
                                           const Eigen::MatrixXi& blocks,
                                           const Eigen::MatrixXd& rates) {
  const int kcount = s.num_sensors();
  const int slots = s.num_slots();
  const double lcount = static_cast<double>(s.mission.blocks_per_slot);
  std::vector<SensorStats> out(static_cast<size_t>(kcount));
  for (int k = 0; k < kcount; ++k) {
    SensorStats& st = out[static_cast<size_t>(k)];
    double rounded_throughput = 0.0;
    for (int m = 0; m < slots; ++m) {
      st.energy_j += schedule(k, m) * s.slot_energy(k);
      st.throughput += schedule(k, m) * rates(k, m);
      rounded_throughput += (blocks(k, m) / lcount) * rates(k, m);
    }
    const double demand = s.rate_demand(k);
    st.demand_ratio = st.throughput / demand;
    st.rounded_ratio = rounded_throughput / demand;
    st.nominal_bits =
        rounded_throughput * s.channel.bandwidth_hz * s.mission.slot_len_s;
  }
  return out;
}

Solution optimize(const Scenario& s, const Trajectory& q0,
                  const SolveOptions& opt_in) {
  check_trajectory(q0, s);
  const SolveOptions opt = opt_in.resolved(s);
  const LinkBudget lb(s);

  Solution sol;
  sol.kappa = opt.kappa;
  sol.seed = opt.seed;
  sol.trajectory = q0;

  auto run_lp = [&](const Trajectory& q, ScheduleStyle style) {
    const auto t0 = std::chrono::steady_clock::now();
    sol.rates = lb.rate_matrix(q.points);
    LpSolution res = solve_schedule_lp(s, sol.rates, nullptr, style);
    sol.trace.lp_seconds.push_back(seconds_since(t0));
    return res;
  };

  LpSolution lp = run_lp(q0, ScheduleStyle::RawVertex);
  if (!lp.optimal()) report_infeasible(s, lp.unmet_sensors);
  sol.schedule = lp.schedule;
  sol.theta = lp.theta;
  sol.trace.theta.push_back(lp.theta);
  sol.trace.eta.push_back(eval_eta(s, sol.schedule, sol.trajectory, lb));

  // the first program improves from nothing, a fractional decrease of one;
  // kappa above that degenerates to the schedule-only solve
  if (opt.kappa > 1.0) {
    sol.trace.converged = true;
  }

  // Stall escapes: when the alternation stops improving, re-enter the
  // trajectory step from another vertex of the same optimal schedule face
  // (widest support first, then the concentrated one). Any theta-optimal
  // schedule is a legitimate iterate; the wide vertex hands the trajectory
  // subproblem gradients over whole approach corridors where the stalled
  // vertex had none. The budget is per run, so late micro-improvements
  // cannot stretch the loop to the iteration cap.
  const ScheduleStyle kicks[] = {
      ScheduleStyle::Spread, ScheduleStyle::Concentrated,
      ScheduleStyle::Spread, ScheduleStyle::Concentrated};
  size_t next_kick = 0;
  for (int outer = 0; !sol.trace.converged && outer < opt.max_outer; ++outer) {
    const auto t0 = std::chrono::steady_clock::now();
    ScaResult sca = sca_optimize(s, sol.schedule, sol.trajectory, opt.kappa,
                                 opt.max_sca, lb, opt.keep_iterates);
    sol.trace.sca_seconds.push_back(seconds_since(t0));
    sol.trace.sca.push_back(sca.trace);
    sol.trajectory = sca.trajectory;
    if (opt.keep_iterates) {
      sol.sca_iterates.insert(sol.sca_iterates.end(), sca.iterates.begin(),
                              sca.iterates.end());
    }

    lp = run_lp(sol.trajectory, ScheduleStyle::RawVertex);
    if (!lp.optimal()) report_infeasible(s, lp.unmet_sensors);

    const double prev_theta = sol.trace.theta.back();
    sol.schedule = lp.schedule;
    sol.theta = lp.theta;
    sol.trace.theta.push_back(lp.theta);
    sol.trace.eta.push_back(eval_eta(s, sol.schedule, sol.trajectory, lb));
    sol.trace.iterations = outer + 1;

    const double frac_decrease =
        (prev_theta - lp.theta) / std::max(prev_theta, 1e-300);
    if (frac_decrease < opt.kappa) {
      if (next_kick < std::size(kicks)) {
        LpSolution alt = run_lp(sol.trajectory, kicks[next_kick]);
        ++next_kick;
        if (alt.optimal()) {
          sol.schedule = alt.schedule;
          continue;
        }
      }
      sol.trace.converged = true;
      break;
    }
  }

  // canonical schedule at the final trajectory (same theta, concentrated
  // wake windows)
  sol.rates = lb.rate_matrix(sol.trajectory.points);
  lp = solve_schedule_lp(s, sol.rates, opt.dump_lp ? &sol.lp_text : nullptr,
                         ScheduleStyle::Concentrated);
  if (lp.optimal()) {
    sol.schedule = lp.schedule;
    sol.theta = lp.theta;
  }
  sol.blocks = round_schedule(sol.schedule, s.mission.blocks_per_slot);
  sol.sensors = evaluate_solution(s, sol.schedule, sol.blocks, sol.rates);
  return sol;
}

}  // namespace uavsched
