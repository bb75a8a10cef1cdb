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

#ifndef UAVSCHED_SCHEDULE_LP_HPP
#define UAVSCHED_SCHEDULE_LP_HPP

#include <string>
#include <vector>

#include "uavsched/common.hpp"
#include "uavsched/scenario.hpp"
#include "uavsched/simplex.hpp"

namespace uavsched {

/// Relaxed wake-up schedule program for a fixed trajectory:
/// variables x_k[m] in [0,1] and theta >= 0, minimize theta subject to
///   sum_m x_k[m] E_k <= theta          (per-sensor energy cap)
///   sum_m x_k[m] R_k[m] >= r_k         (per-sensor demand)
///   sum_k x_k[m] <= 1                  (one sensor awake per slot)
/// Variable order is x(k,m) with m fastest, then theta, so the solver's
/// lowest-index tie-breaking is the lexicographic (k, m) order.
lp::LinearProgram build_schedule_lp(const Scenario& s,
                                    const Eigen::MatrixXd& rates);

struct LpSolution {
  enum class Status { Optimal, Infeasible };
  Status status = Status::Infeasible;
  Eigen::MatrixXd schedule;  // K x M wake fractions
  double theta = 0.0;        // min-max per-sensor energy, joules
  double certificate = 0.0;  // relative duality gap bound
  double primal_residual = 0.0;
  std::vector<int> unmet_sensors;  // 0-based, on infeasibility
  int iterations = 0;

  bool optimal() const { return status == Status::Optimal; }
};

/// Vertex selection among the (massively degenerate) min-max optima: along
/// a rate plateau any split of a sensor's wake mass is optimal, so a
/// second phase picks a canonical point at the achieved theta.
///   Concentrated: minimize total wake time; every sensor collapses into
///     its highest-rate slots (the natural presentation of a solution).
///   Spread: maximize total wake time; widest slot support, which gives
///     the trajectory subproblem gradients everywhere it matters (used
///     inside the alternating descent).
///   RawVertex: whatever vertex phase one lands on.
enum class ScheduleStyle { Concentrated, Spread, RawVertex };

/// Builds and solves the schedule LP. lp_text, when non-null, receives the
/// instance in LP text format (for external cross-checking).
LpSolution solve_schedule_lp(const Scenario& s, const Eigen::MatrixXd& rates,
                             std::string* lp_text = nullptr,
                             ScheduleStyle style = ScheduleStyle::Concentrated);

}  // namespace uavsched

#endif  // UAVSCHED_SCHEDULE_LP_HPP
