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

#ifndef UAVSCHED_SCA_HPP
#define UAVSCHED_SCA_HPP

#include <vector>

#include "uavsched/channel.hpp"
#include "uavsched/common.hpp"
#include "uavsched/scenario.hpp"

namespace uavsched {

/// Length-M horizontal collector path. Invariants: first/last points pinned
/// to the mission endpoints, per-slot displacement at most D_max (+1e-6).
struct Trajectory {
  std::vector<Vec2> points;

  int num_points() const { return static_cast<int>(points.size()); }
  const Vec2& operator[](int m) const { return points[static_cast<size_t>(m)]; }
  Vec2& operator[](int m) { return points[static_cast<size_t>(m)]; }
};

/// Throws Error(Validation) naming the violated trajectory invariant.
/// check_endpoints=false waives the endpoint pinning (static collector).
void check_trajectory(const Trajectory& q, const Scenario& s,
                      bool check_endpoints = true);

/// Concave quadratic under-estimator of the outage-constrained rate around
/// a reference point: R(q) >= rate_at_ref - curvature * (||q - w||^2 -
/// ref_offset2), tight at the reference.
struct BoundCoeffs {
  double rate_at_ref = 0.0;  // bps/Hz at the expansion point
  double curvature = 0.0;    // >= 0, bps/Hz per m^2
  double ref_dist2 = 0.0;    // H^2 + ||q_ref - w||^2, m^2
  double ref_offset2 = 0.0;  // ||q_ref - w||^2, m^2
};

BoundCoeffs bound_coeffs(const Vec2& q_ref, const Vec2& w, double tx_power_w,
                         const ChannelParams& p, double altitude_m);

/// Same, using a prebuilt LinkBudget (avoids re-inverting the fading CDF).
BoundCoeffs bound_coeffs_cached(const LinkBudget& lb, int k, const Vec2& q_ref);

/// Surrogate rate at q for a sensor at w: tight at the expansion point,
/// a global under-estimator everywhere else.
double eval_rate_lb(const Vec2& q, const Vec2& w, const BoundCoeffs& c);

/// Weighted minimum throughput min_k (1/r_k) sum_m x_k[m] R_k[m] with exact
/// rates; >= 1 exactly when every demand is met.
double eval_eta(const Scenario& s, const Eigen::MatrixXd& schedule,
                const Trajectory& q, const LinkBudget& lb);

struct P4Result {
  Trajectory trajectory;
  double eta_lb = 0.0;       // achieved surrogate objective
  bool used_fallback = false;
  double kkt_residual = 0.0;  // stationarity residual, scaled units
  bool ok = false;
};

/// One convex trajectory subproblem: maximize the surrogate min-throughput
/// built at q_ref, subject to speed and endpoint constraints. Solved by a
/// log-barrier interior-point method on the (convex QCQP) epigraph form.
/// Contract: the returned trajectory is feasible and its surrogate value is
/// never below the value at q_ref (falls back to q_ref otherwise).
P4Result solve_p4(const Scenario& s, const Eigen::MatrixXd& schedule,
                  const Trajectory& q_ref, const LinkBudget& lb);

struct ScaTrace {
  std::vector<double> eta_lb;     // subproblem objective per iteration
  std::vector<double> eta_exact;  // true objective per iterate
  int iterations = 0;
  bool converged = false;
};

struct ScaResult {
  Trajectory trajectory;
  ScaTrace trace;
  std::vector<Trajectory> iterates;  // filled when keep_iterates set
};

/// Successive convex refinement of the trajectory for a fixed schedule:
/// rebuilds the surrogate at the current iterate, solves the subproblem,
/// and stops once the fractional objective increase drops below kappa or
/// max_iterations is reached.
ScaResult sca_optimize(const Scenario& s, const Eigen::MatrixXd& schedule,
                       const Trajectory& q0, double kappa, int max_iterations,
                       const LinkBudget& lb, bool keep_iterates = false);

}  // namespace uavsched

#endif  // UAVSCHED_SCA_HPP
