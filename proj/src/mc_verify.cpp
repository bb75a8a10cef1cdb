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

#include "uavsched/mc_verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

#include "uavsched/channel.hpp"

namespace uavsched {

VerifyReport simulate_collection(const Scenario& s,
                                 const Eigen::MatrixXi& blocks,
                                 const Trajectory& q, std::uint64_t seed,
                                 int repetitions,
                                 const Eigen::MatrixXd& rates_in) {
  if (repetitions < 1) {
    fail(ErrorKind::Argument, "repetitions must be at least 1");
  }
  const int kcount = s.num_sensors();
  const int slots = s.num_slots();
  if (blocks.rows() != kcount || blocks.cols() != slots) {
    fail(ErrorKind::Argument, "block matrix shape does not match scenario");
  }
  if (q.num_points() != slots) {
    fail(ErrorKind::Argument, "trajectory length does not match scenario");
  }

  const LinkBudget lb(s);
  Eigen::MatrixXd rates = rates_in;
  if (rates.size() == 0) {
    rates = lb.rate_matrix(q.points);
  } else if (rates.rows() != kcount || rates.cols() != slots) {
    fail(ErrorKind::Argument, "rate matrix shape does not match scenario");
  }

  const RicianFading fading(s.channel.rician_k);
  const double eps = s.channel.outage_eps;
  const double lcount = static_cast<double>(s.mission.blocks_per_slot);
  const double bits_per_ratehz =
      s.channel.bandwidth_hz * s.mission.slot_len_s / lcount;
  const Rng root(seed);

  VerifyReport report;
  report.seed = seed;
  report.repetitions = repetitions;
  report.epsilon = eps;
  report.sensors.resize(static_cast<size_t>(kcount));

  for (int k = 0; k < kcount; ++k) {
    SensorSimStats& st = report.sensors[static_cast<size_t>(k)];
    double delivered_total = 0.0;
    for (int rep = 0; rep < repetitions; ++rep) {
      for (int m = 0; m < slots; ++m) {
        const int n = blocks(k, m);
        if (n <= 0) continue;
        // one stream per (repetition, sensor, slot)
        Rng rng = root.substream(
            (static_cast<std::uint64_t>(rep) * static_cast<std::uint64_t>(kcount) +
             static_cast<std::uint64_t>(k)) *
                static_cast<std::uint64_t>(slots) +
            static_cast<std::uint64_t>(m));
        const double gain =
            large_scale_gain(q[m], s.sensors[static_cast<size_t>(k)].position,
                             s.channel, s.mission.altitude_m);
        const double tx_rate = rates(k, m);
        const double block_bits = tx_rate * bits_per_ratehz;
        for (int l = 0; l < n; ++l) {
          const double rho_sq = fading.sample(rng);
          const double capacity = block_rate(
              rho_sq, gain, s.sensors[static_cast<size_t>(k)].tx_power_w,
              s.channel);
          ++st.n_blocks;
          if (capacity >= tx_rate) {
            delivered_total += block_bits;
          } else {
            ++st.failed_blocks;
          }
        }
      }
    }
    st.delivered_bits = delivered_total / repetitions;
    for (int m = 0; m < slots; ++m) {
      st.nominal_bits += blocks(k, m) * rates(k, m) * bits_per_ratehz;
    }
    const double n = static_cast<double>(st.n_blocks);
    const double demand = s.sensors[static_cast<size_t>(k)].data_bits;
    if (st.n_blocks == 0) {
      st.note = "demand unmet: no fading blocks allocated";
      st.pass = false;
      continue;
    }
    st.empirical_outage = static_cast<double>(st.failed_blocks) / n;
    const double sigma = std::sqrt(eps * (1.0 - eps) / n);
    st.ci_low = eps - 4.0 * sigma;
    st.ci_high = eps + 4.0 * sigma;
    st.outage_ok =
        st.empirical_outage >= st.ci_low && st.empirical_outage <= st.ci_high;
    st.delivered_ok = st.delivered_bits >= (1.0 - eps - 3.0 * sigma) * demand;
    st.pass = st.outage_ok && st.delivered_ok;
    if (!st.outage_ok) {
      st.note = "empirical outage outside the 4-sigma band";
    } else if (!st.delivered_ok) {
      st.note = "delivered bits below the (1-eps-3sigma) demand threshold";
    }
  }

  report.pass = std::all_of(report.sensors.begin(), report.sensors.end(),
                            [](const SensorSimStats& st) { return st.pass; });
  return report;
}

std::string verify_report_json(const VerifyReport& report) {
  nlohmann::json j;
  j["schema"] = "uavsched.verify/1";
  j["pass"] = report.pass;
  j["seed"] = report.seed;
  j["repetitions"] = report.repetitions;
  j["epsilon"] = report.epsilon;
  j["sensors"] = nlohmann::json::array();
  for (size_t k = 0; k < report.sensors.size(); ++k) {
    const SensorSimStats& st = report.sensors[k];
    nlohmann::json sj;
    sj["sensor"] = k + 1;
    sj["nominal_bits"] = st.nominal_bits;
    sj["delivered_bits"] = st.delivered_bits;
    sj["empirical_outage"] = st.empirical_outage;
    sj["n_blocks"] = st.n_blocks;
    sj["ci_low"] = st.ci_low;
    sj["ci_high"] = st.ci_high;
    sj["pass"] = st.pass;
    if (!st.note.empty()) sj["note"] = st.note;
    j["sensors"].push_back(sj);
  }
  return j.dump(2) + "\n";
}

}  // namespace uavsched
