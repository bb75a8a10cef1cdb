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

#ifndef UAVSCHED_SIMPLEX_HPP
#define UAVSCHED_SIMPLEX_HPP

#include <limits>
#include <string>
#include <vector>

namespace uavsched::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { LessEqual, GreaterEqual, Equal };

/// min c'v  s.t.  (A v)_i  sense_i  rhs_i,   lb <= v <= ub.
/// Columns are sparse; rows are added first, then entries per variable.
struct LinearProgram {
  struct Entry {
    int row;
    double value;
  };

  std::vector<double> cost, lower, upper;
  std::vector<std::vector<Entry>> cols;
  std::vector<RowSense> sense;
  std::vector<double> rhs;
  std::vector<std::string> var_names, row_names;

  int num_vars() const { return static_cast<int>(cost.size()); }
  int num_rows() const { return static_cast<int>(rhs.size()); }

  int add_row(RowSense s, double b, std::string name = "");
  int add_var(double c, double lo, double hi, std::string name = "");
  void add_entry(int row, int var, double value);
};

enum class SolveStatus { Optimal, Infeasible, IterationLimit, Unbounded };

struct SimplexResult {
  SolveStatus status = SolveStatus::IterationLimit;
  std::vector<double> x;             // structural values
  std::vector<double> row_dual;      // y, one per row (original row scaling)
  std::vector<double> reduced_cost;  // per structural variable
  double objective = 0.0;
  double primal_residual = 0.0;   // worst row/bound violation, absolute
  double duality_gap_rel = 0.0;   // rigorous bound-based certificate
  std::vector<int> infeasible_rows;  // rows still violated after phase 1
  int iterations = 0;
};

/// Dense two-phase bounded-variable simplex, Bland's rule throughout
/// (entering: lowest eligible index; leaving: lowest variable index among
/// minimal ratios), rows equilibrated internally. Deterministic for a
/// fixed instance.
SimplexResult solve_simplex(const LinearProgram& lp, int max_iterations = 0);

/// CPLEX-style LP text rendering for external cross-checks.
std::string write_lp_text(const LinearProgram& lp);

}  // namespace uavsched::lp

#endif  // UAVSCHED_SIMPLEX_HPP
