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

#include "uavsched/schedule_lp.hpp"

#include <algorithm>

namespace uavsched {

lp::LinearProgram build_schedule_lp(const Scenario& s,
                                    const Eigen::MatrixXd& rates) {
  const int kcount = s.num_sensors();
  const int slots = s.num_slots();
  if (rates.rows() != kcount || rates.cols() != slots) {
    fail(ErrorKind::Argument, "rate matrix shape does not match scenario");
  }

  lp::LinearProgram prog;
  std::vector<int> energy_row(static_cast<size_t>(kcount));
  std::vector<int> demand_row(static_cast<size_t>(kcount));
  for (int k = 0; k < kcount; ++k) {
    energy_row[static_cast<size_t>(k)] = prog.add_row(
        lp::RowSense::LessEqual, 0.0, "energy_" + std::to_string(k + 1));
  }
  for (int k = 0; k < kcount; ++k) {
    demand_row[static_cast<size_t>(k)] =
        prog.add_row(lp::RowSense::GreaterEqual, s.rate_demand(k),
                     "demand_" + std::to_string(k + 1));
  }
  std::vector<int> slot_row(static_cast<size_t>(slots));
  for (int m = 0; m < slots; ++m) {
    slot_row[static_cast<size_t>(m)] = prog.add_row(
        lp::RowSense::LessEqual, 1.0, "slot_" + std::to_string(m + 1));
  }

  for (int k = 0; k < kcount; ++k) {
    const double energy = s.slot_energy(k);
    for (int m = 0; m < slots; ++m) {
      const int v = prog.add_var(
          0.0, 0.0, 1.0,
          "x_" + std::to_string(k + 1) + "_" + std::to_string(m + 1));
      prog.add_entry(energy_row[static_cast<size_t>(k)], v, energy);
      prog.add_entry(demand_row[static_cast<size_t>(k)], v, rates(k, m));
      prog.add_entry(slot_row[static_cast<size_t>(m)], v, 1.0);
    }
  }
  // theta never exceeds the largest all-slots row energy; the finite box
  // keeps the duality certificate finite
  double theta_cap = 0.0;
  for (int k = 0; k < kcount; ++k) {
    theta_cap = std::max(theta_cap, slots * s.slot_energy(k));
  }
  const int theta = prog.add_var(1.0, 0.0, theta_cap, "theta");
  for (int k = 0; k < kcount; ++k) {
    prog.add_entry(energy_row[static_cast<size_t>(k)], theta, -1.0);
  }
  return prog;
}

LpSolution solve_schedule_lp(const Scenario& s, const Eigen::MatrixXd& rates,
                             std::string* lp_text, ScheduleStyle style) {
  const int kcount = s.num_sensors();
  const int slots = s.num_slots();
  lp::LinearProgram prog = build_schedule_lp(s, rates);
  if (lp_text) *lp_text = lp::write_lp_text(prog);

  const lp::SimplexResult res = lp::solve_simplex(prog);

  LpSolution out;
  out.iterations = res.iterations;
  switch (res.status) {
    case lp::SolveStatus::Optimal:
      break;
    case lp::SolveStatus::Infeasible: {
      out.status = LpSolution::Status::Infeasible;
      // demand rows sit after the K energy rows
      for (int row : res.infeasible_rows) {
        if (row >= kcount && row < 2 * kcount) {
          out.unmet_sensors.push_back(row - kcount);
        }
      }
      std::sort(out.unmet_sensors.begin(), out.unmet_sensors.end());
      return out;
    }
    case lp::SolveStatus::IterationLimit:
      fail(ErrorKind::Solver, "schedule LP hit the simplex iteration limit");
    case lp::SolveStatus::Unbounded:
      fail(ErrorKind::Solver, "schedule LP reported unbounded (malformed instance)");
  }

  const double theta_opt = res.x[static_cast<size_t>(kcount * slots)];

  bool use_phase2 = false;
  lp::SimplexResult res2;
  if (style != ScheduleStyle::RawVertex) {
    lp::LinearProgram phase2 = prog;
    const size_t theta_var = static_cast<size_t>(kcount * slots);
    phase2.upper[theta_var] = theta_opt * (1.0 + 1e-12) + 1e-300;
    phase2.cost[theta_var] = 0.0;
    const double sign = style == ScheduleStyle::Concentrated ? 1.0 : -1.0;
    for (int j = 0; j < kcount * slots; ++j) {
      phase2.cost[static_cast<size_t>(j)] = sign;
    }
    res2 = lp::solve_simplex(phase2);
    use_phase2 = res2.status == lp::SolveStatus::Optimal &&
                 res2.primal_residual <= 1e-8;
  }
  const lp::SimplexResult& pick = use_phase2 ? res2 : res;

  out.status = LpSolution::Status::Optimal;
  out.schedule.resize(kcount, slots);
  for (int k = 0; k < kcount; ++k) {
    for (int m = 0; m < slots; ++m) {
      // clip solver roundoff into the model's box
      out.schedule(k, m) =
          std::clamp(pick.x[static_cast<size_t>(k * slots + m)], 0.0, 1.0);
    }
  }
  out.theta = theta_opt;
  out.certificate = res.duality_gap_rel;
  out.primal_residual = pick.primal_residual;
  out.iterations = res.iterations + (use_phase2 ? res2.iterations : 0);
  return out;
}

}  // namespace uavsched
