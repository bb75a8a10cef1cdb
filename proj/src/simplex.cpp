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

#include "uavsched/simplex.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "uavsched/common.hpp"

namespace uavsched::lp {

int LinearProgram::add_row(RowSense s, double b, std::string name) {
  sense.push_back(s);
  rhs.push_back(b);
  row_names.push_back(name.empty() ? "r" + std::to_string(rhs.size()) : std::move(name));
  return num_rows() - 1;
}

int LinearProgram::add_var(double c, double lo, double hi, std::string name) {
  cost.push_back(c);
  lower.push_back(lo);
  upper.push_back(hi);
  cols.emplace_back();
  var_names.push_back(name.empty() ? "v" + std::to_string(cost.size()) : std::move(name));
  return num_vars() - 1;
}

void LinearProgram::add_entry(int row, int var, double value) {
  if (value == 0.0) return;
  cols[static_cast<size_t>(var)].push_back({row, value});
}

namespace {

constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-10;
constexpr double kFeasTol = 1e-9;

enum class VarState { AtLower, AtUpper, Basic };

// Bounded-variable revised simplex over the slack-augmented system
// A v + s = b. Variable layout: [0, n) structural, [n, n+m) slacks,
// [n+m, ...) phase-1 artificials. The dense basis inverse is maintained
// with product-form updates and rebuilt periodically.
class BoundedSimplex {
 public:
  BoundedSimplex(const LinearProgram& lp, int max_iterations)
      : lp_(lp),
        m_(lp.num_rows()),
        n_(lp.num_vars()),
        max_iter_(max_iterations > 0 ? max_iterations
                                     : 20000 + 200 * (lp.num_rows() + lp.num_vars())) {}

  SimplexResult run();

 private:
  int total() const { return n_ + m_ + static_cast<int>(art_cols_.size()); }

  double lower(int j) const {
    if (j < n_) return lp_.lower[static_cast<size_t>(j)];
    if (j < n_ + m_) return slack_lower_[static_cast<size_t>(j - n_)];
    return art_fixed_ ? 0.0 : 0.0;
  }
  double upper(int j) const {
    if (j < n_) return lp_.upper[static_cast<size_t>(j)];
    if (j < n_ + m_) return slack_upper_[static_cast<size_t>(j - n_)];
    return art_fixed_ ? 0.0 : kInf;
  }
  double cost(int j) const {
    if (phase1_) return j >= n_ + m_ ? 1.0 : 0.0;
    return j < n_ ? scaled_cost_[static_cast<size_t>(j)] : 0.0;
  }

  // column j of the slack-augmented scaled matrix
  template <typename Fn>
  void for_col(int j, Fn&& fn) const {
    if (j < n_) {
      for (const auto& e : lp_.cols[static_cast<size_t>(j)]) {
        fn(e.row, e.value * row_scale_[static_cast<size_t>(e.row)]);
      }
    } else if (j < n_ + m_) {
      fn(j - n_, 1.0);
    } else {
      const auto& a = art_cols_[static_cast<size_t>(j - n_ - m_)];
      fn(a.first, a.second);
    }
  }

  void equilibrate();
  void initial_basis();
  void factorize();
  void compute_basic_values();
  Eigen::VectorXd ftran(int j) const;
  Eigen::VectorXd duals() const;
  SolveStatus iterate();
  void pivot(int entering, int leaving_pos, const Eigen::VectorXd& w,
             double step, bool to_upper_of_leaving);
  double value_of(int j) const {
    const int pos = basic_pos_[static_cast<size_t>(j)];
    if (pos >= 0) return xb_[pos];
    return state_[static_cast<size_t>(j)] == VarState::AtUpper ? upper(j) : lower(j);
  }
  SimplexResult finish(SolveStatus status);

  const LinearProgram& lp_;
  int m_, n_, max_iter_;
  bool phase1_ = false;
  bool art_fixed_ = false;  // artificials pinned to zero for phase 2

  std::vector<double> row_scale_;
  std::vector<double> scaled_rhs_;
  std::vector<double> scaled_cost_;
  std::vector<double> slack_lower_, slack_upper_;
  std::vector<std::pair<int, double>> art_cols_;  // (row, +-1)

  std::vector<VarState> state_;
  std::vector<int> basis_;      // variable index per basis slot
  std::vector<int> basic_pos_;  // variable -> basis slot or -1
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  int iterations_ = 0;
  int since_factorize_ = 0;
};

void BoundedSimplex::equilibrate() {
  row_scale_.assign(static_cast<size_t>(m_), 1.0);
  std::vector<double> rowmax(static_cast<size_t>(m_), 0.0);
  for (int j = 0; j < n_; ++j) {
    for (const auto& e : lp_.cols[static_cast<size_t>(j)]) {
      rowmax[static_cast<size_t>(e.row)] =
          std::max(rowmax[static_cast<size_t>(e.row)], std::abs(e.value));
    }
  }
  for (int i = 0; i < m_; ++i) {
    if (rowmax[static_cast<size_t>(i)] > 0.0) {
      row_scale_[static_cast<size_t>(i)] = 1.0 / rowmax[static_cast<size_t>(i)];
    }
  }
  scaled_rhs_.resize(static_cast<size_t>(m_));
  for (int i = 0; i < m_; ++i) {
    scaled_rhs_[static_cast<size_t>(i)] =
        lp_.rhs[static_cast<size_t>(i)] * row_scale_[static_cast<size_t>(i)];
  }
  // cost scaling keeps reduced-cost tolerances meaningful
  double cmax = 0.0;
  for (double c : lp_.cost) cmax = std::max(cmax, std::abs(c));
  const double cscale = cmax > 0.0 ? 1.0 / cmax : 1.0;
  scaled_cost_.resize(static_cast<size_t>(n_));
  for (int j = 0; j < n_; ++j) {
    scaled_cost_[static_cast<size_t>(j)] = lp_.cost[static_cast<size_t>(j)] * cscale;
  }

  slack_lower_.resize(static_cast<size_t>(m_));
  slack_upper_.resize(static_cast<size_t>(m_));
  for (int i = 0; i < m_; ++i) {
    switch (lp_.sense[static_cast<size_t>(i)]) {
      case RowSense::LessEqual:
        slack_lower_[static_cast<size_t>(i)] = 0.0;
        slack_upper_[static_cast<size_t>(i)] = kInf;
        break;
      case RowSense::GreaterEqual:
        slack_lower_[static_cast<size_t>(i)] = -kInf;
        slack_upper_[static_cast<size_t>(i)] = 0.0;
        break;
      case RowSense::Equal:
        slack_lower_[static_cast<size_t>(i)] = 0.0;
        slack_upper_[static_cast<size_t>(i)] = 0.0;
        break;
    }
  }
}

void BoundedSimplex::initial_basis() {
  state_.assign(static_cast<size_t>(n_ + m_), VarState::AtLower);
  // structurals rest at their finite bound (lower preferred)
  for (int j = 0; j < n_; ++j) {
    if (std::isfinite(lower(j))) {
      state_[static_cast<size_t>(j)] = VarState::AtLower;
    } else if (std::isfinite(upper(j))) {
      state_[static_cast<size_t>(j)] = VarState::AtUpper;
    } else {
      fail(ErrorKind::Argument, "simplex: free variables are not supported");
    }
  }

  // residual of each row at the bound point decides slack vs artificial
  std::vector<double> resid = scaled_rhs_;
  for (int j = 0; j < n_; ++j) {
    const double v = state_[static_cast<size_t>(j)] == VarState::AtUpper
                         ? upper(j)
                         : lower(j);
    if (v == 0.0) continue;
    for (const auto& e : lp_.cols[static_cast<size_t>(j)]) {
      resid[static_cast<size_t>(e.row)] -=
          e.value * row_scale_[static_cast<size_t>(e.row)] * v;
    }
  }

  basis_.clear();
  art_cols_.clear();
  for (int i = 0; i < m_; ++i) {
    const double lo = slack_lower_[static_cast<size_t>(i)];
    const double hi = slack_upper_[static_cast<size_t>(i)];
    const double r = resid[static_cast<size_t>(i)];
    if (r >= lo - kFeasTol && r <= hi + kFeasTol) {
      basis_.push_back(n_ + i);  // slack carries the row
    } else {
      // park the slack at its nearest bound and let an artificial absorb
      // the remaining (signed) infeasibility
      const bool park_high = r > hi;
      state_[static_cast<size_t>(n_ + i)] =
          park_high ? VarState::AtUpper : VarState::AtLower;
      const double gap = r - (park_high ? hi : lo);
      art_cols_.emplace_back(i, gap > 0.0 ? 1.0 : -1.0);
      state_.push_back(VarState::AtLower);
      basis_.push_back(n_ + m_ + static_cast<int>(art_cols_.size()) - 1);
    }
  }
  phase1_ = !art_cols_.empty();

  basic_pos_.assign(static_cast<size_t>(total()), -1);
  for (int p = 0; p < m_; ++p) basic_pos_[static_cast<size_t>(basis_[p])] = p;
  factorize();
  compute_basic_values();
}

void BoundedSimplex::factorize() {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m_, m_);
  for (int p = 0; p < m_; ++p) {
    for_col(basis_[static_cast<size_t>(p)],
            [&](int row, double val) { b(row, p) = val; });
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
  binv_ = lu.inverse();
  since_factorize_ = 0;
}

void BoundedSimplex::compute_basic_values() {
  Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(scaled_rhs_.data(), m_);
  for (int j = 0; j < total(); ++j) {
    if (basic_pos_[static_cast<size_t>(j)] >= 0) continue;
    const double v = state_[static_cast<size_t>(j)] == VarState::AtUpper
                         ? upper(j)
                         : lower(j);
    if (v == 0.0) continue;
    for_col(j, [&](int row, double val) { rhs(row) -= val * v; });
  }
  xb_ = binv_ * rhs;
}

Eigen::VectorXd BoundedSimplex::ftran(int j) const {
  Eigen::VectorXd col = Eigen::VectorXd::Zero(m_);
  for_col(j, [&](int row, double val) { col(row) += val; });
  return binv_ * col;
}

Eigen::VectorXd BoundedSimplex::duals() const {
  Eigen::VectorXd cb(m_);
  for (int p = 0; p < m_; ++p) cb(p) = cost(basis_[static_cast<size_t>(p)]);
  return binv_.transpose() * cb;
}

void BoundedSimplex::pivot(int entering, int leaving_pos,
                           const Eigen::VectorXd& w, double step,
                           bool to_upper_of_leaving) {
  const int leaving = basis_[static_cast<size_t>(leaving_pos)];
  const double enter_from = state_[static_cast<size_t>(entering)] == VarState::AtUpper
                                ? upper(entering)
                                : lower(entering);
  const double sigma =
      state_[static_cast<size_t>(entering)] == VarState::AtUpper ? -1.0 : 1.0;

  xb_ -= (sigma * step) * w;
  const double enter_value = enter_from + sigma * step;

  basis_[static_cast<size_t>(leaving_pos)] = entering;
  basic_pos_[static_cast<size_t>(entering)] = leaving_pos;
  basic_pos_[static_cast<size_t>(leaving)] = -1;
  state_[static_cast<size_t>(entering)] = VarState::Basic;
  state_[static_cast<size_t>(leaving)] =
      to_upper_of_leaving ? VarState::AtUpper : VarState::AtLower;
  xb_(leaving_pos) = enter_value;

  // product-form inverse update
  const double piv = w(leaving_pos);
  Eigen::RowVectorXd brow = binv_.row(leaving_pos) / piv;
  for (int i = 0; i < m_; ++i) {
    if (i == leaving_pos) continue;
    const double f = w(i);
    if (f != 0.0) binv_.row(i) -= f * brow;
  }
  binv_.row(leaving_pos) = brow;
  ++since_factorize_;
  if (since_factorize_ >= 100) {
    factorize();
    compute_basic_values();
  }
}

SolveStatus BoundedSimplex::iterate() {
  while (true) {
    if (iterations_ >= max_iter_) return SolveStatus::IterationLimit;
    ++iterations_;

    const Eigen::VectorXd y = duals();

    // Bland entering rule: lowest index with an improving reduced cost
    int entering = -1;
    double d_enter = 0.0;
    for (int j = 0; j < total(); ++j) {
      if (basic_pos_[static_cast<size_t>(j)] >= 0) continue;
      const double lo = lower(j);
      const double hi = upper(j);
      if (lo == hi) continue;  // fixed
      double d = cost(j);
      for_col(j, [&](int row, double val) { d -= y(row) * val; });
      const bool at_lower = state_[static_cast<size_t>(j)] != VarState::AtUpper;
      if (at_lower ? d < -kDualTol : d > kDualTol) {
        entering = j;
        d_enter = d;
        break;
      }
    }
    if (entering < 0) return SolveStatus::Optimal;
    (void)d_enter;

    const Eigen::VectorXd w = ftran(entering);
    const double sigma =
        state_[static_cast<size_t>(entering)] == VarState::AtUpper ? -1.0 : 1.0;

    // ratio test: smallest step at which a basic variable hits a bound,
    // or the entering variable reaches its opposite bound
    double best_step = upper(entering) - lower(entering);  // bound flip
    int leaving_pos = -1;
    bool leaving_to_upper = false;
    for (int p = 0; p < m_; ++p) {
      const int bj = basis_[static_cast<size_t>(p)];
      const double delta = -sigma * w(p);  // d x_B[p] / d step
      if (delta > kPivotTol) {
        const double room = upper(bj) - xb_(p);
        if (!std::isfinite(room)) continue;
        const double step = std::max(room, 0.0) / delta;
        if (step < best_step - 1e-12 ||
            (step < best_step + 1e-12 &&
             (leaving_pos < 0 || bj < basis_[static_cast<size_t>(leaving_pos)]))) {
          best_step = step;
          leaving_pos = p;
          leaving_to_upper = true;
        }
      } else if (delta < -kPivotTol) {
        const double room = xb_(p) - lower(bj);
        if (!std::isfinite(room)) continue;
        const double step = std::max(room, 0.0) / (-delta);
        if (step < best_step - 1e-12 ||
            (step < best_step + 1e-12 &&
             (leaving_pos < 0 || bj < basis_[static_cast<size_t>(leaving_pos)]))) {
          best_step = step;
          leaving_pos = p;
          leaving_to_upper = false;
        }
      }
    }

    if (!std::isfinite(best_step)) return SolveStatus::Unbounded;

    if (leaving_pos < 0) {
      // bound flip: entering jumps to its other bound, basis unchanged
      xb_ -= (sigma * best_step) * w;
      state_[static_cast<size_t>(entering)] =
          state_[static_cast<size_t>(entering)] == VarState::AtUpper
              ? VarState::AtLower
              : VarState::AtUpper;
      continue;
    }
    pivot(entering, leaving_pos, w, best_step, leaving_to_upper);
  }
}

SimplexResult BoundedSimplex::finish(SolveStatus status) {
  SimplexResult res;
  res.status = status;
  res.iterations = iterations_;
  res.x.assign(static_cast<size_t>(n_), 0.0);
  for (int j = 0; j < n_; ++j) res.x[static_cast<size_t>(j)] = value_of(j);

  res.objective = 0.0;
  for (int j = 0; j < n_; ++j) {
    res.objective += lp_.cost[static_cast<size_t>(j)] * res.x[static_cast<size_t>(j)];
  }

  // primal residual in original units
  double viol = 0.0;
  std::vector<double> act(static_cast<size_t>(m_), 0.0);
  for (int j = 0; j < n_; ++j) {
    const double v = res.x[static_cast<size_t>(j)];
    viol = std::max(viol, lp_.lower[static_cast<size_t>(j)] - v);
    viol = std::max(viol, v - lp_.upper[static_cast<size_t>(j)]);
    if (v == 0.0) continue;
    for (const auto& e : lp_.cols[static_cast<size_t>(j)]) {
      act[static_cast<size_t>(e.row)] += e.value * v;
    }
  }
  for (int i = 0; i < m_; ++i) {
    const double a = act[static_cast<size_t>(i)];
    const double b = lp_.rhs[static_cast<size_t>(i)];
    switch (lp_.sense[static_cast<size_t>(i)]) {
      case RowSense::LessEqual: viol = std::max(viol, a - b); break;
      case RowSense::GreaterEqual: viol = std::max(viol, b - a); break;
      case RowSense::Equal: viol = std::max(viol, std::abs(a - b)); break;
    }
  }
  res.primal_residual = std::max(viol, 0.0);

  // duals and reduced costs in original units; cost was scaled by cscale,
  // rows by row_scale: y_orig_i = y_scaled_i * row_scale_i / cscale
  double cmax = 0.0;
  for (double c : lp_.cost) cmax = std::max(cmax, std::abs(c));
  const double cscale = cmax > 0.0 ? 1.0 / cmax : 1.0;

  const Eigen::VectorXd y = duals();
  res.row_dual.assign(static_cast<size_t>(m_), 0.0);
  for (int i = 0; i < m_; ++i) {
    res.row_dual[static_cast<size_t>(i)] =
        y(i) * row_scale_[static_cast<size_t>(i)] / cscale;
  }
  res.reduced_cost.assign(static_cast<size_t>(n_), 0.0);
  for (int j = 0; j < n_; ++j) {
    double d = lp_.cost[static_cast<size_t>(j)];
    for (const auto& e : lp_.cols[static_cast<size_t>(j)]) {
      d -= res.row_dual[static_cast<size_t>(e.row)] * e.value;
    }
    res.reduced_cost[static_cast<size_t>(j)] = d;
  }

  if (status == SolveStatus::Optimal) {
    // rigorous weak-duality certificate: project the duals onto their
    // sign-feasible cone, then bound the optimum from below over the box
    std::vector<double> yp = res.row_dual;
    for (int i = 0; i < m_; ++i) {
      if (lp_.sense[static_cast<size_t>(i)] == RowSense::LessEqual && yp[static_cast<size_t>(i)] > 0.0) {
        yp[static_cast<size_t>(i)] = 0.0;  // y <= 0 for <= rows in a min problem
      }
      if (lp_.sense[static_cast<size_t>(i)] == RowSense::GreaterEqual && yp[static_cast<size_t>(i)] < 0.0) {
        yp[static_cast<size_t>(i)] = 0.0;
      }
    }
    double bound = 0.0;
    for (int i = 0; i < m_; ++i) bound += yp[static_cast<size_t>(i)] * lp_.rhs[static_cast<size_t>(i)];
    for (int j = 0; j < n_; ++j) {
      double d = lp_.cost[static_cast<size_t>(j)];
      for (const auto& e : lp_.cols[static_cast<size_t>(j)]) {
        d -= yp[static_cast<size_t>(e.row)] * e.value;
      }
      const double contrib = d >= 0.0 ? d * lp_.lower[static_cast<size_t>(j)]
                                      : d * lp_.upper[static_cast<size_t>(j)];
      if (!std::isfinite(contrib)) {
        bound = -kInf;
        break;
      }
      bound += contrib;
    }
    const double gap = res.objective - bound;
    res.duality_gap_rel = std::isfinite(gap)
                              ? std::max(gap, 0.0) / std::max(1.0, std::abs(res.objective))
                              : kInf;
  }
  return res;
}

SimplexResult BoundedSimplex::run() {
  equilibrate();
  initial_basis();

  if (phase1_) {
    const SolveStatus st = iterate();
    if (st == SolveStatus::IterationLimit) return finish(st);
    // infeasibility = leftover artificial mass
    double infeas = 0.0;
    std::vector<int> bad_rows;
    for (size_t a = 0; a < art_cols_.size(); ++a) {
      const int j = n_ + m_ + static_cast<int>(a);
      const double v = value_of(j);
      if (v > 1e-7) bad_rows.push_back(art_cols_[a].first);
      infeas += v;
    }
    if (infeas > 1e-7) {
      SimplexResult res = finish(SolveStatus::Infeasible);
      res.infeasible_rows = bad_rows;
      return res;
    }
    // pin artificials at zero; pivot basic ones out where a pivot exists
    art_fixed_ = true;
    for (int p = 0; p < m_; ++p) {
      const int bj = basis_[static_cast<size_t>(p)];
      if (bj < n_ + m_) continue;
      bool swapped = false;
      for (int j = 0; j < n_ + m_ && !swapped; ++j) {
        if (basic_pos_[static_cast<size_t>(j)] >= 0) continue;
        if (lower(j) == upper(j)) continue;
        const Eigen::VectorXd w = ftran(j);
        if (std::abs(w(p)) > 1e-7) {
          pivot(j, p, w, 0.0, false);
          state_[static_cast<size_t>(bj)] = VarState::AtLower;
          swapped = true;
        }
      }
      // a row with no eligible pivot is redundant; its artificial stays
      // basic at value zero, harmless in phase 2
    }
    phase1_ = false;
    factorize();
    compute_basic_values();
  }

  const SolveStatus st = iterate();
  return finish(st);
}

}  // namespace

SimplexResult solve_simplex(const LinearProgram& lp, int max_iterations) {
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (lp.lower[static_cast<size_t>(j)] > lp.upper[static_cast<size_t>(j)]) {
      fail(ErrorKind::Argument, "simplex: inverted bounds on " +
                                    lp.var_names[static_cast<size_t>(j)]);
    }
  }
  BoundedSimplex solver(lp, max_iterations);
  return solver.run();
}

std::string write_lp_text(const LinearProgram& lp) {
  std::ostringstream o;
  auto term = [](double v, const std::string& name, bool first) {
    std::ostringstream t;
    if (v < 0.0) {
      t << (first ? "-" : "- ");
    } else if (!first) {
      t << "+ ";
    }
    const double a = std::abs(v);
    if (a != 1.0) t << format_double(a) << " ";
    t << name;
    return t.str();
  };

  o << "Minimize\n obj:";
  bool first = true;
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (lp.cost[static_cast<size_t>(j)] == 0.0) continue;
    o << " " << term(lp.cost[static_cast<size_t>(j)], lp.var_names[static_cast<size_t>(j)], first);
    first = false;
  }
  if (first) o << " 0 " << lp.var_names.front();
  o << "\nSubject To\n";

  std::vector<std::vector<std::pair<int, double>>> rows(static_cast<size_t>(lp.num_rows()));
  for (int j = 0; j < lp.num_vars(); ++j) {
    for (const auto& e : lp.cols[static_cast<size_t>(j)]) {
      rows[static_cast<size_t>(e.row)].emplace_back(j, e.value);
    }
  }
  for (int i = 0; i < lp.num_rows(); ++i) {
    o << " " << lp.row_names[static_cast<size_t>(i)] << ":";
    bool f = true;
    for (const auto& [j, v] : rows[static_cast<size_t>(i)]) {
      o << " " << term(v, lp.var_names[static_cast<size_t>(j)], f);
      f = false;
    }
    if (f) o << " 0 " << lp.var_names.front();
    switch (lp.sense[static_cast<size_t>(i)]) {
      case RowSense::LessEqual: o << " <= "; break;
      case RowSense::GreaterEqual: o << " >= "; break;
      case RowSense::Equal: o << " = "; break;
    }
    o << format_double(lp.rhs[static_cast<size_t>(i)]) << "\n";
  }
  o << "Bounds\n";
  for (int j = 0; j < lp.num_vars(); ++j) {
    const double lo = lp.lower[static_cast<size_t>(j)];
    const double hi = lp.upper[static_cast<size_t>(j)];
    const std::string& name = lp.var_names[static_cast<size_t>(j)];
    if (std::isfinite(lo) && std::isfinite(hi)) {
      o << " " << format_double(lo) << " <= " << name << " <= " << format_double(hi) << "\n";
    } else if (std::isfinite(lo)) {
      o << " " << name << " >= " << format_double(lo) << "\n";
    } else if (std::isfinite(hi)) {
      o << " " << name << " <= " << format_double(hi) << "\n";
    } else {
      o << " " << name << " free\n";
    }
  }
  o << "End\n";
  return o.str();
}

}  // namespace uavsched::lp
