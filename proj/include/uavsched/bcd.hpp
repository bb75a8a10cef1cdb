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

#ifndef UAVSCHED_BCD_HPP
#define UAVSCHED_BCD_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "uavsched/sca.hpp"
#include "uavsched/scenario.hpp"
#include "uavsched/schedule_lp.hpp"

namespace uavsched {

struct SolveOptions {
  double kappa = 0.0;   // <= 0: use the scenario's value
  int max_outer = 0;    // <= 0: scenario default
  int max_sca = 0;
  std::uint64_t seed = 0;  // 0: scenario default; echoed into artifacts
  bool dump_lp = false;       // keep LP text of the final schedule program
  bool keep_iterates = false; // record every SCA trajectory iterate

  /// Options with scenario defaults filled in.
  SolveOptions resolved(const Scenario& s) const;
};

/// Per-outer-iteration convergence record.
struct SolveTrace {
  std::vector<double> theta;        // LP optimum per outer iteration
  std::vector<double> eta;          // exact min throughput after each move
  std::vector<ScaTrace> sca;        // inner trajectory traces
  std::vector<double> lp_seconds;
  std::vector<double> sca_seconds;
  int iterations = 0;
  bool converged = false;
};

struct SensorStats {
  double energy_j = 0.0;          // committed transmit energy
  double throughput = 0.0;        // sum_m x R, bps/Hz-slots
  double demand_ratio = 0.0;      // throughput / r_k
  double rounded_ratio = 0.0;     // after block rounding
  double nominal_bits = 0.0;      // rounded schedule, bits per mission
};

struct Solution {
  Eigen::MatrixXd schedule;   // K x M wake fractions
  Eigen::MatrixXi blocks;     // K x M fading-block counts
  Eigen::MatrixXd rates;      // K x M designed rates along the trajectory
  Trajectory trajectory;
  double theta = 0.0;
  SolveTrace trace;
  std::vector<SensorStats> sensors;
  std::string scheme = "optimized";
  double kappa = 0.0;
  std::uint64_t seed = 0;
  std::string lp_text;                // when dump_lp was set
  std::vector<Trajectory> sca_iterates;  // when keep_iterates was set
};

/// Alternating schedule/trajectory descent from an initial trajectory.
/// Per round: schedule LP at the current path, then the SCA trajectory
/// refinement for the new schedule; stops when theta's fractional decrease
/// drops below kappa. Throws Error(Infeasible) naming the binding sensors
/// if even the initial trajectory cannot satisfy the demands.
Solution optimize(const Scenario& s, const Trajectory& q0,
                  const SolveOptions& opt = {});

/// Nearest-integer block allocation N = round(L * x), with deterministic
/// collision repair: while a slot exceeds L blocks, decrement the positive
/// entry whose fractional part of L*x is smallest (ties: lowest sensor).
Eigen::MatrixXi round_schedule(const Eigen::MatrixXd& schedule, int blocks_per_slot);

/// Per-sensor energy, throughput and demand-satisfaction for a fractional
/// schedule (fractions taken as given) against the given rate matrix.
std::vector<SensorStats> evaluate_solution(const Scenario& s,
                                           const Eigen::MatrixXd& schedule,
                                           const Eigen::MatrixXi& blocks,
                                           const Eigen::MatrixXd& rates);

}  // namespace uavsched

#endif  // UAVSCHED_BCD_HPP
