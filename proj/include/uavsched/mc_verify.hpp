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

#ifndef UAVSCHED_MC_VERIFY_HPP
#define UAVSCHED_MC_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "uavsched/sca.hpp"
#include "uavsched/scenario.hpp"

namespace uavsched {

struct SensorSimStats {
  double nominal_bits = 0.0;    // block allocation at the designed rates
  double delivered_bits = 0.0;  // per mission, averaged over repetitions
  long long n_blocks = 0;       // simulated fading blocks, all repetitions
  long long failed_blocks = 0;
  double empirical_outage = 0.0;
  double ci_low = 0.0;   // binomial band the outage must sit in
  double ci_high = 0.0;
  bool outage_ok = false;
  bool delivered_ok = false;
  bool pass = false;
  std::string note;
};

struct VerifyReport {
  std::vector<SensorSimStats> sensors;
  bool pass = false;
  std::uint64_t seed = 0;
  int repetitions = 0;
  double epsilon = 0.0;
};

/// Draws every allocated fading block along the trajectory and checks the
/// per-block rate against the designed transmission rate. One substream
/// per (repetition, sensor, slot), so results are identical no matter how
/// the work is partitioned. `rates`, when non-empty, overrides the
/// recomputed designed rates (the bundle's stored values).
///
/// Pass rules per sensor: some blocks allocated; empirical outage within
/// eps +- 4 sqrt(eps(1-eps)/n); mean delivered bits per mission at least
/// (1 - eps - 3 sqrt(eps(1-eps)/n)) * S_k.
VerifyReport simulate_collection(const Scenario& s,
                                 const Eigen::MatrixXi& blocks,
                                 const Trajectory& q, std::uint64_t seed,
                                 int repetitions = 1,
                                 const Eigen::MatrixXd& rates = {});

std::string verify_report_json(const VerifyReport& report);

}  // namespace uavsched

#endif  // UAVSCHED_MC_VERIFY_HPP
