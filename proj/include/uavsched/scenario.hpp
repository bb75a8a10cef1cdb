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

#ifndef UAVSCHED_SCENARIO_HPP
#define UAVSCHED_SCENARIO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "uavsched/common.hpp"

namespace uavsched {

/// Ground sensor node: position, upload demand, transmit power.
struct Sensor {
  Vec2 position{0.0, 0.0};  // meters
  double data_bits = 0.0;   // S_k, bits to collect
  double tx_power_w = 0.0;  // P_k, watts
};

/// Collector flight parameters. The horizon splits into num_slots slots of
/// slot_len_s seconds; each slot holds blocks_per_slot i.i.d. fading blocks.
struct Mission {
  double altitude_m = 0.0;    // H, fixed flight altitude
  double v_max_mps = 0.0;     // maximum horizontal speed
  double horizon_s = 0.0;     // T
  double slot_len_s = 0.0;    // slot length
  int num_slots = 0;          // M, derived as round(T / slot_len)
  Vec2 q_start{0.0, 0.0};     // horizontal start position, meters
  Vec2 q_end{0.0, 0.0};       // horizontal end position, meters
  int blocks_per_slot = 100;  // L
};

/// Link-level parameters. Linear-scale values; the scenario file carries
/// dB/dBm forms which are converted exactly once at load (the original
/// dB values are retained for lossless serialization).
struct ChannelParams {
  double beta0 = 0.0;          // reference power gain at 1 m, linear
  double noise_power_w = 0.0;  // sigma^2, watts
  double snr_gap = 1.0;        // Gamma, linear >= 1
  double path_loss_exp = 2.0;  // alpha >= 2
  double rician_k = 0.0;       // K_c >= 0
  double outage_eps = 0.0;     // target outage probability in (0,1)
  double bandwidth_hz = 0.0;   // B

  // as-read file values, kept so save(load(f)) is bit-exact
  double beta0_db = 0.0;
  double noise_dbm = 0.0;
  double gamma_db = 0.0;
};

struct SolverParams {
  double kappa = 1e-4;  // fractional-improvement stopping tolerance
  std::uint64_t seed = 1;
  int max_outer = 50;  // schedule/trajectory alternation cap
  int max_sca = 100;   // trajectory inner-loop cap
};

/// One full problem instance. Immutable after load; safe to share
/// read-only across workers.
struct Scenario {
  std::vector<Sensor> sensors;
  Mission mission;
  ChannelParams channel;
  SolverParams solver;

  int num_sensors() const { return static_cast<int>(sensors.size()); }
  int num_slots() const { return mission.num_slots; }

  /// D_max: farthest the collector can move within one slot, meters.
  double slot_displacement() const {
    return mission.slot_len_s * mission.v_max_mps;
  }
  /// E_k: energy a sensor spends transmitting for one full slot, joules.
  double slot_energy(int k) const {
    return mission.slot_len_s * sensors[static_cast<size_t>(k)].tx_power_w;
  }
  /// r_k: demand normalized to bps/Hz-slots, S_k / (B * slot_len).
  double rate_demand(int k) const {
    return sensors[static_cast<size_t>(k)].data_bits /
           (channel.bandwidth_hz * mission.slot_len_s);
  }
};

struct DerivedConstants {
  double d_max = 0.0;
  std::vector<double> slot_energy_j;
  std::vector<double> rate_demand;
};

DerivedConstants derived_constants(const Scenario& s);

/// Checks every invariant; throws Error(Validation) naming the first
/// violated one. Advisory conditions are appended to *warnings.
void validate_scenario(const Scenario& s,
                       std::vector<std::string>* warnings = nullptr);

Scenario load_scenario(const std::string& path,
                       std::vector<std::string>* warnings = nullptr);
Scenario parse_scenario(const std::string& text,
                        std::vector<std::string>* warnings = nullptr);
std::string serialize_scenario(const Scenario& s);
void save_scenario(const Scenario& s, const std::string& path);

/// Copies with one field replaced and everything re-validated; used by
/// parameter sweeps.
Scenario with_data_bits(const Scenario& s, double bits);
Scenario with_outage_eps(const Scenario& s, double eps);
Scenario with_horizon(const Scenario& s, double horizon_s);

/// Sensors placed uniformly in [box_min, box_max]^2, seeded; all other
/// fields copied from the template.
Scenario random_scenario(const Scenario& templ, int num_sensors,
                         double box_min, double box_max, std::uint64_t seed);

}  // namespace uavsched

#endif  // UAVSCHED_SCENARIO_HPP
