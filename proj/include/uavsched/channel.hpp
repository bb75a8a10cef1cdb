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

#ifndef UAVSCHED_CHANNEL_HPP
#define UAVSCHED_CHANNEL_HPP

#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "uavsched/common.hpp"
#include "uavsched/scenario.hpp"

namespace uavsched {

/// log2(1 + x) without cancellation for tiny x (far-range rates).
inline double log2_1p(double x) { return std::log1p(x) * M_LOG2E; }

/// First-order Marcum Q function Q1(a, b).
///
/// Evaluated as the Poisson mixture of normalized upper incomplete gamma
/// tails, the canonical modified-Bessel series regrouped term by term so
/// that no intermediate under/overflows for arguments up to a, b ~ 500.
/// Absolute error below 1e-12; throws Error(Solver) if the truncation
/// bound cannot be met (does not happen for a, b <= 50).
double marcum_q1(double a, double b);

/// CDF of the squared envelope |rho|^2 of a unit-mean Rician channel:
/// F(z) = 1 - Q1(sqrt(2 K), sqrt(2 (K+1) z)).
double rician_cdf(double z, double rician_k);

/// Inverse CDF by bracketing + bisection; |F(z*) - eps| <= 1e-10.
double rician_cdf_inv(double eps, double rician_k);

/// Small-scale fading distribution of |rho|^2 with E[|rho|^2] = 1.
/// The interface is CDF + quantile + sampler so alternative fading
/// families can slot into the same outage machinery.
class FadingModel {
 public:
  virtual ~FadingModel() = default;
  virtual double cdf(double z) const = 0;
  /// Generic quantile: bracket [0, 1], double upward, then bisect.
  virtual double quantile(double eps) const;
  /// One draw of |rho|^2.
  virtual double sample(Rng& rng) const = 0;
};

class RicianFading final : public FadingModel {
 public:
  explicit RicianFading(double k_factor);
  double cdf(double z) const override;
  double sample(Rng& rng) const override;
  double k_factor() const { return k_factor_; }

 private:
  double k_factor_;
  double los_amplitude_;    // sqrt(K / (K+1))
  double scatter_sigma_;    // per-component std dev, sqrt(1 / (2(K+1)))
};

/// n i.i.d. draws of |rho|^2; deterministic given the seed.
std::vector<double> sample_fading(const FadingModel& dist, std::uint64_t seed,
                                  std::size_t n);

/// Large-scale gain beta = beta0 / (H^2 + ||q - w||^2)^(alpha/2).
double large_scale_gain(const Vec2& q, const Vec2& w, const ChannelParams& p,
                        double altitude_m);

/// Per-block achievable rate log2(1 + |rho|^2 * beta * P / (sigma^2 Gamma)).
double block_rate(double rho_sq, double gain, double tx_power_w,
                  const ChannelParams& p);

/// Outage-constrained rate: largest rate whose per-block outage equals the
/// target eps, i.e. log2(1 + F^-1(eps) * P * beta / (sigma^2 Gamma)).
double outage_rate(const Vec2& q, const Vec2& w, double tx_power_w,
                   const ChannelParams& p, double altitude_m);

/// Same, with the fading quantile F^-1(eps) precomputed by the caller.
double outage_rate_with_quantile(double fading_quantile, const Vec2& q,
                                 const Vec2& w, double tx_power_w,
                                 const ChannelParams& p, double altitude_m);

/// Outage probability of transmitting at `rate` over the given geometry.
double outage_prob(double rate, const Vec2& q, const Vec2& w,
                   double tx_power_w, const ChannelParams& p,
                   double altitude_m);

/// Per-scenario cache of everything rate evaluation needs: the fading
/// quantile and, per sensor, gamma_k = F^-1(eps) P_k beta0 / (sigma^2 Gamma),
/// so that R_k(q) = log2(1 + gamma_k / (H^2 + ||q - w_k||^2)^(alpha/2)).
class LinkBudget {
 public:
  explicit LinkBudget(const Scenario& s);

  double fading_quantile() const { return fading_quantile_; }
  double altitude() const { return altitude_m_; }
  double path_loss_exp() const { return alpha_; }
  double snr_numerator(int k) const {
    return snr_numerator_[static_cast<size_t>(k)];
  }
  const Vec2& sensor_position(int k) const {
    return positions_[static_cast<size_t>(k)];
  }
  int num_sensors() const { return static_cast<int>(positions_.size()); }

  /// Outage-constrained rate of sensor k with the collector at q.
  double rate(int k, const Vec2& q) const;

  /// K x M matrix of rates along a trajectory.
  Eigen::MatrixXd rate_matrix(const std::vector<Vec2>& trajectory) const;

 private:
  double fading_quantile_;
  double altitude_m_;
  double alpha_;
  std::vector<double> snr_numerator_;  // gamma_k, dimensionless
  std::vector<Vec2> positions_;
};

}  // namespace uavsched

#endif  // UAVSCHED_CHANNEL_HPP
