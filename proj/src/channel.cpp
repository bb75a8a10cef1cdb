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

#include "uavsched/channel.hpp"

#include <algorithm>
#include <cmath>

namespace uavsched {

namespace {

constexpr double kMarcumTruncation = 1e-13;

double poisson_pmf(long k, double lambda) {
  // exp-log form; near the mode this is far from the underflow range
  return std::exp(static_cast<double>(k) * std::log(lambda) - lambda -
                  std::lgamma(static_cast<double>(k) + 1.0));
}

// Regularized upper incomplete gamma Q(s, x) = Gamma(s, x) / Gamma(s).
// Series for the lower function when x < s + 1, Lentz continued fraction
// otherwise; both to ~1e-15 relative.
double gamma_q_series_side(double s, double x) {
  double ap = s;
  double sum = 1.0 / s;
  double del = sum;
  for (int n = 0; n < 100000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-17) {
      return 1.0 - sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
    }
  }
  fail(ErrorKind::Solver, "incomplete gamma series did not converge");
}

double gamma_q_contfrac(double s, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / (std::abs(b) < tiny ? tiny : b);
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) {
      return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
    }
  }
  fail(ErrorKind::Solver, "incomplete gamma continued fraction did not converge");
}

double gamma_q(double s, double x) {
  if (x == 0.0) return 1.0;
  if (x < s + 1.0) return gamma_q_series_side(s, x);
  return gamma_q_contfrac(s, x);
}

}  // namespace

double marcum_q1(double a, double b) {
  if (!(a >= 0.0) || !(b >= 0.0)) {
    throw std::domain_error("marcum_q1: arguments must be non-negative");
  }
  if (b == 0.0) return 1.0;
  const double alpha = 0.5 * a * a;  // Poisson intensity of the LoS mixture
  const double beta = 0.5 * b * b;
  if (a == 0.0) return std::exp(-beta);

  // Q1 = sum_k Pois(k; alpha) * P(Pois(beta) <= k). Start the sum far into
  // the lower tail of Pois(alpha) and recurse upward; both pmf sequences
  // are stable multiplicative recurrences from exp-log anchors. Beyond the
  // mode the weights decay faster than the geometric ratio alpha/(k+1),
  // which bounds the dropped tail rigorously (the inner CDF is <= 1).
  const double sd = std::sqrt(alpha);
  const long k0 =
      std::max<long>(0, static_cast<long>(std::floor(alpha - 12.0 * sd - 12.0)));
  double w = poisson_pmf(k0, alpha);
  double t = poisson_pmf(k0, beta);
  double tail_cdf = gamma_q(static_cast<double>(k0) + 1.0, beta);
  double sum = w * tail_cdf;
  long k = k0;
  const long k_guard = k0 + 8000000;
  while (k < k_guard) {
    const double kd = static_cast<double>(k);
    if (kd > alpha) {
      const double ratio = alpha / (kd + 1.0);
      if (w * ratio / (1.0 - ratio) < kMarcumTruncation) {
        return std::clamp(sum, 0.0, 1.0);
      }
    }
    ++k;
    const double kd1 = static_cast<double>(k);
    w *= alpha / kd1;
    t *= beta / kd1;
    tail_cdf = std::min(tail_cdf + t, 1.0);
    sum += w * tail_cdf;
  }
  fail(ErrorKind::Solver, "marcum_q1 series truncation bound not reached");
}

double rician_cdf(double z, double rician_k) {
  if (!(z >= 0.0)) {
    throw std::domain_error("rician_cdf: z must be non-negative");
  }
  if (rician_k < 0.0) {
    throw std::domain_error("rician_cdf: Rician factor must be non-negative");
  }
  const double a = std::sqrt(2.0 * rician_k);
  const double b = std::sqrt(2.0 * (rician_k + 1.0) * z);
  return 1.0 - marcum_q1(a, b);
}

double rician_cdf_inv(double eps, double rician_k) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::domain_error("rician_cdf_inv: eps must lie in (0, 1)");
  }
  RicianFading dist(rician_k);
  return dist.quantile(eps);
}

double FadingModel::quantile(double eps) const {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::domain_error("quantile: eps must lie in (0, 1)");
  }
  double lo = 0.0;
  double hi = 1.0;
  while (cdf(hi) < eps) {
    hi *= 2.0;
    if (hi > 1e12) fail(ErrorKind::Solver, "quantile bracket failed");
  }
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < eps) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-16 * hi) break;
  }
  return 0.5 * (lo + hi);
}

RicianFading::RicianFading(double k_factor) : k_factor_(k_factor) {
  if (k_factor < 0.0) {
    throw std::domain_error("RicianFading: K must be non-negative");
  }
  los_amplitude_ = std::sqrt(k_factor / (k_factor + 1.0));
  scatter_sigma_ = std::sqrt(0.5 / (k_factor + 1.0));
}

double RicianFading::cdf(double z) const { return rician_cdf(z, k_factor_); }

double RicianFading::sample(Rng& rng) const {
  // complex coefficient: deterministic LoS part plus circular scatter;
  // E[|rho|^2] = K/(K+1) + 1/(K+1) = 1
  double g0 = 0.0, g1 = 0.0;
  rng.next_normal_pair(g0, g1);
  const double re = los_amplitude_ + scatter_sigma_ * g0;
  const double im = scatter_sigma_ * g1;
  return re * re + im * im;
}

std::vector<double> sample_fading(const FadingModel& dist, std::uint64_t seed,
                                  std::size_t n) {
  if (n < 1) fail(ErrorKind::Argument, "sample_fading: n must be >= 1");
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = dist.sample(rng);
  return out;
}

double large_scale_gain(const Vec2& q, const Vec2& w, const ChannelParams& p,
                        double altitude_m) {
  const double d2 = altitude_m * altitude_m + (q - w).squaredNorm();
  return p.beta0 / std::pow(d2, 0.5 * p.path_loss_exp);
}

double block_rate(double rho_sq, double gain, double tx_power_w,
                  const ChannelParams& p) {
  return log2_1p(rho_sq * gain * tx_power_w / (p.noise_power_w * p.snr_gap));
}

double outage_rate_with_quantile(double fading_quantile, const Vec2& q,
                                 const Vec2& w, double tx_power_w,
                                 const ChannelParams& p, double altitude_m) {
  const double gain = large_scale_gain(q, w, p, altitude_m);
  return log2_1p(fading_quantile * tx_power_w * gain /
                 (p.noise_power_w * p.snr_gap));
}

double outage_rate(const Vec2& q, const Vec2& w, double tx_power_w,
                   const ChannelParams& p, double altitude_m) {
  const double quantile = rician_cdf_inv(p.outage_eps, p.rician_k);
  return outage_rate_with_quantile(quantile, q, w, tx_power_w, p, altitude_m);
}

double outage_prob(double rate, const Vec2& q, const Vec2& w,
                   double tx_power_w, const ChannelParams& p,
                   double altitude_m) {
  if (!(rate >= 0.0)) {
    throw std::domain_error("outage_prob: rate must be non-negative");
  }
  if (rate == 0.0) return 0.0;
  const double gain = large_scale_gain(q, w, p, altitude_m);
  const double threshold = p.noise_power_w * p.snr_gap *
                           (std::exp2(rate) - 1.0) / (gain * tx_power_w);
  return rician_cdf(threshold, p.rician_k);
}

LinkBudget::LinkBudget(const Scenario& s)
    : fading_quantile_(
          rician_cdf_inv(s.channel.outage_eps, s.channel.rician_k)),
      altitude_m_(s.mission.altitude_m),
      alpha_(s.channel.path_loss_exp) {
  for (const Sensor& u : s.sensors) {
    snr_numerator_.push_back(fading_quantile_ * u.tx_power_w *
                             s.channel.beta0 /
                             (s.channel.noise_power_w * s.channel.snr_gap));
    positions_.push_back(u.position);
  }
}

double LinkBudget::rate(int k, const Vec2& q) const {
  const size_t i = static_cast<size_t>(k);
  const double d2 =
      altitude_m_ * altitude_m_ + (q - positions_[i]).squaredNorm();
  return log2_1p(snr_numerator_[i] / std::pow(d2, 0.5 * alpha_));
}

Eigen::MatrixXd LinkBudget::rate_matrix(
    const std::vector<Vec2>& trajectory) const {
  const int kcount = num_sensors();
  const int m = static_cast<int>(trajectory.size());
  Eigen::MatrixXd rates(kcount, m);
  for (int k = 0; k < kcount; ++k) {
    for (int j = 0; j < m; ++j) {
      rates(k, j) = rate(k, trajectory[static_cast<size_t>(j)]);
    }
  }
  return rates;
}

}  // namespace uavsched
