// Shared scenario builders for the test suites.

#ifndef UAVSCHED_TESTS_FIXTURES_HPP
#define UAVSCHED_TESTS_FIXTURES_HPP

#include <string>

#include "uavsched/scenario.hpp"

namespace fixtures {

/// Channel/mission parameter set used throughout the numerical study:
/// H=100 m, v_max=50 m/s, dt=0.5 s, B=1 MHz, beta0=-60 dB, noise=-110 dBm,
/// gamma=7 dB, K_c=10, alpha=2, P=0.1 W, eps=1e-2. Sensors are supplied by
/// the caller; horizon defaults to 50 s.
inline uavsched::Scenario reference_scenario(
    std::vector<uavsched::Sensor> sensors, double horizon_s = 50.0,
    double data_bits = 1e7,
    uavsched::Vec2 q_start = uavsched::Vec2(-800.0, 0.0),
    uavsched::Vec2 q_end = uavsched::Vec2(800.0, 0.0)) {
  uavsched::Scenario s;
  s.mission.altitude_m = 100.0;
  s.mission.v_max_mps = 50.0;
  s.mission.horizon_s = horizon_s;
  s.mission.slot_len_s = 0.5;
  s.mission.num_slots = static_cast<int>(horizon_s / 0.5 + 0.5);
  s.mission.q_start = q_start;
  s.mission.q_end = q_end;
  s.mission.blocks_per_slot = 100;

  s.channel.beta0_db = -60.0;
  s.channel.noise_dbm = -110.0;
  s.channel.gamma_db = 7.0;
  s.channel.beta0 = 1e-6;
  s.channel.noise_power_w = 1e-14;
  s.channel.snr_gap = std::pow(10.0, 0.7);
  s.channel.path_loss_exp = 2.0;
  s.channel.rician_k = 10.0;
  s.channel.outage_eps = 1e-2;
  s.channel.bandwidth_hz = 1e6;

  for (auto& u : sensors) {
    if (u.data_bits <= 0.0) u.data_bits = data_bits;
    if (u.tx_power_w <= 0.0) u.tx_power_w = 0.1;
  }
  s.sensors = std::move(sensors);
  uavsched::validate_scenario(s);
  return s;
}

inline uavsched::Sensor sensor_at(double x, double y, double bits = 0.0,
                                  double power = 0.0) {
  uavsched::Sensor u;
  u.position = uavsched::Vec2(x, y);
  u.data_bits = bits;
  u.tx_power_w = power;
  return u;
}

/// Small two-sensor instance that solves quickly (T=15 s, M=30).
inline uavsched::Scenario small_scenario() {
  return reference_scenario(
      {sensor_at(-150.0, 120.0), sensor_at(200.0, -100.0)}, 15.0, 4e6,
      uavsched::Vec2(-300.0, 0.0), uavsched::Vec2(300.0, 0.0));
}

}  // namespace fixtures

#endif  // UAVSCHED_TESTS_FIXTURES_HPP
