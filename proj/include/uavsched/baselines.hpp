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

#ifndef UAVSCHED_BASELINES_HPP
#define UAVSCHED_BASELINES_HPP

#include <optional>
#include <string>
#include <vector>

#include "uavsched/bcd.hpp"

namespace uavsched {

enum class Scheme { Optimized, Straight, Static };

const char* scheme_name(Scheme s);

/// Constant-speed straight line from q0 to qF, one point per slot.
Trajectory straight_trajectory(const Scenario& s);

/// Geometric center of the sensors (the static collector's position).
Vec2 sensor_centroid(const Scenario& s);

/// Runs one scheme end to end. Straight/static schemes keep their fixed
/// path and only optimize the wake-up schedule with the same LP; the
/// static collector hovers at the sensor centroid with the endpoint
/// constraints waived. Throws Error(Infeasible) like optimize().
Solution solve_scheme(const Scenario& s, Scheme scheme,
                      const SolveOptions& opt = {});

struct CompareRow {
  Scheme scheme = Scheme::Optimized;
  std::string sweep_var;  // "S", "eps", "T" or "" for a single point
  double sweep_value = 0.0;
  double theta = 0.0;
  bool feasible = false;
  int iterations = 0;
  double wall_seconds = 0.0;
  std::string error;
};

struct SweepSpec {
  std::string variable;      // "S" | "eps" | "T"; empty = single point
  std::vector<double> grid;  // empty = single point
};

struct CompareResult {
  std::vector<CompareRow> rows;  // grouped by point, scheme order fixed
};

/// All three schemes per sweep point, points run on a bounded worker pool.
/// Per-scheme infeasibility lands in the row, not an exception. When
/// artifact_dir is set, each point writes bundles under
/// <dir>/point_<i>/<scheme>/.
CompareResult compare(const Scenario& s, const SweepSpec& sweep,
                      const SolveOptions& opt = {},
                      const std::string& artifact_dir = "",
                      int max_workers = 0);

/// rows rendered as CSV (sweep_var,value,scheme,theta,feasible,iterations,
/// wall_seconds,error).
std::string compare_csv(const CompareResult& result);

}  // namespace uavsched

#endif  // UAVSCHED_BASELINES_HPP
