// Test-side oracles, independent of the library implementation paths they
// certify. Everything here trades speed for directness: defining
// integrals, finite differences, and a tiny barrier LP solver.

#ifndef UAVSCHED_TESTS_ORACLES_HPP
#define UAVSCHED_TESTS_ORACLES_HPP

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace oracles {

/// log I0(t) by direct series summation with overflow rescaling.
inline double log_bessel_i0(double t) {
  if (t < 0.0) throw std::domain_error("log_bessel_i0: t >= 0 required");
  const double u = 0.25 * t * t;
  double term = 1.0;
  double sum = 1.0;
  double log_scale = 0.0;
  for (int k = 1; k < 200000; ++k) {
    term *= u / (static_cast<double>(k) * static_cast<double>(k));
    sum += term;
    if (sum > 1e280) {
      sum *= 1e-280;
      term *= 1e-280;
      log_scale += 280.0 * std::log(10.0);
    }
    if (term < sum * 1e-19 && static_cast<double>(k) > 0.5 * t) break;
  }
  return std::log(sum) + log_scale;
}

/// Integrand of the defining Marcum-Q integral, evaluated in log space:
/// x * exp(-(x^2 + a^2)/2) * I0(a x).
inline double marcum_integrand(double x, double a) {
  if (x <= 0.0) return 0.0;
  const double log_val =
      std::log(x) - 0.5 * (x * x + a * a) + log_bessel_i0(a * x);
  return std::exp(log_val);
}

namespace detail {

inline double adaptive_simpson(const std::function<double(double)>& f,
                               double lo, double hi, double f_lo, double f_mid,
                               double f_hi, double whole, double tol,
                               int depth) {
  const double mid = 0.5 * (lo + hi);
  const double lmid = 0.5 * (lo + mid);
  const double rmid = 0.5 * (mid + hi);
  const double f_lmid = f(lmid);
  const double f_rmid = f(rmid);
  const double left = (mid - lo) / 6.0 * (f_lo + 4.0 * f_lmid + f_mid);
  const double right = (hi - mid) / 6.0 * (f_mid + 4.0 * f_rmid + f_hi);
  const double delta = left + right - whole;
  if (depth <= 0) return left + right + delta / 15.0;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, lo, mid, f_lo, f_lmid, f_mid, left, 0.5 * tol,
                          depth - 1) +
         adaptive_simpson(f, mid, hi, f_mid, f_rmid, f_hi, right, 0.5 * tol,
                          depth - 1);
}

}  // namespace detail

inline double integrate(const std::function<double(double)>& f, double lo,
                        double hi, double tol) {
  if (hi <= lo) return 0.0;
  const double mid = 0.5 * (lo + hi);
  const double f_lo = f(lo);
  const double f_mid = f(mid);
  const double f_hi = f(hi);
  const double whole = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi);
  return detail::adaptive_simpson(f, lo, hi, f_lo, f_mid, f_hi, whole, tol, 60);
}

/// Marcum Q1 via adaptive quadrature of its defining integral.
inline double marcum_q1_quad(double a, double b) {
  if (b == 0.0) return 1.0;
  const double hi = std::max(a, b) + 45.0;
  if (b >= hi) return 0.0;
  auto f = [a](double x) { return marcum_integrand(x, a); };
  // split at the integrand peak (near x = a) for quadrature efficiency
  double total = 0.0;
  if (a > b) {
    total += integrate(f, b, a, 1e-14);
    total += integrate(f, a, hi, 1e-14);
  } else {
    total += integrate(f, b, hi, 1e-14);
  }
  return total;
}

/// Central finite difference with Richardson-friendly default step.
inline double central_diff(const std::function<double(double)>& f, double x,
                           double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// ---------------------------------------------------------------------
// Minimal dense barrier LP solver: an algorithmically independent check
// of the production simplex. Form: min c'x  s.t.  G x <= h  (bounds are
// rows of G). Requires a strictly feasible start.
// ---------------------------------------------------------------------
struct BarrierLp {
  Eigen::VectorXd cost;
  Eigen::MatrixXd g;
  Eigen::VectorXd h;
};

inline double barrier_lp_solve(const BarrierLp& lp, Eigen::VectorXd x,
                               double gap_tol = 1e-10) {
  const int rows = static_cast<int>(lp.g.rows());
  const int n = static_cast<int>(lp.cost.size());
  double tau = 1.0;
  for (int stage = 0; stage < 60; ++stage) {
    for (int it = 0; it < 100; ++it) {
      const Eigen::VectorXd slack = lp.h - lp.g * x;
      if ((slack.array() <= 0.0).any()) {
        throw std::runtime_error("barrier_lp_solve: infeasible iterate");
      }
      const Eigen::VectorXd inv = slack.cwiseInverse();
      const Eigen::VectorXd grad = tau * lp.cost + lp.g.transpose() * inv;
      const Eigen::MatrixXd hess = lp.g.transpose() *
                                   inv.array().square().matrix().asDiagonal() *
                                   lp.g;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(
          hess + 1e-13 * Eigen::MatrixXd::Identity(n, n));
      const Eigen::VectorXd step = -ldlt.solve(grad);
      const double decrement_sq = -grad.dot(step);
      if (decrement_sq < 1e-14) break;
      double alpha = 1.0;
      const Eigen::VectorXd gstep = lp.g * step;
      for (int i = 0; i < rows; ++i) {
        if (gstep(i) > 0.0) {
          alpha = std::min(alpha, 0.95 * slack(i) / gstep(i));
        }
      }
      // plain damped Newton; the objective is smooth and self-concordant
      double phi0 = tau * lp.cost.dot(x) - slack.array().log().sum();
      for (int bt = 0; bt < 60; ++bt) {
        const Eigen::VectorXd trial = x + alpha * step;
        const Eigen::VectorXd tslack = lp.h - lp.g * trial;
        if ((tslack.array() > 0.0).all()) {
          const double phi =
              tau * lp.cost.dot(trial) - tslack.array().log().sum();
          if (phi <= phi0 + 0.25 * alpha * grad.dot(step)) {
            x = trial;
            break;
          }
        }
        alpha *= 0.5;
      }
    }
    if (static_cast<double>(rows) / tau < gap_tol) break;
    tau *= 8.0;
  }
  return lp.cost.dot(x);
}

}  // namespace oracles

#endif  // UAVSCHED_TESTS_ORACLES_HPP
