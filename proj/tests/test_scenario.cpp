#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/fixtures.hpp"
#include "uavsched/scenario.hpp"

using namespace uavsched;

namespace {

const char* kReferenceText = R"([mission]
H = 100.0
v_max = 50.0
T = 50.0
dt = 0.5
q0 = [-800.0, 0.0]
qF = [800.0, 0.0]

[channel]
beta0_db = -60.0
noise_dbm = -110.0
gamma_db = 7.0
alpha = 2.0
rician_k = 10.0
epsilon = 1e-2
bandwidth_hz = 1e6

[solver]
kappa = 1e-4
seed = 3

[[sensors]]
x = -400.0
y = 350.0
data_bits = 1e7
power_w = 0.1
)";

}  // namespace

TEST_CASE("reference parameters convert to linear exactly once") {
  const Scenario s = parse_scenario(kReferenceText);
  CHECK(s.channel.beta0 == doctest::Approx(1e-6).epsilon(1e-15));
  CHECK(s.channel.noise_power_w == doctest::Approx(1e-14).epsilon(1e-15));
  CHECK(s.channel.snr_gap == doctest::Approx(5.011872336272722).epsilon(1e-14));
  CHECK(s.mission.num_slots == 100);       // T=50, dt=0.5
  CHECK(s.mission.blocks_per_slot == 100); // default L
  CHECK(s.solver.kappa == 1e-4);
  CHECK(s.solver.seed == 3);
  CHECK(s.solver.max_outer == 50);
  CHECK(s.solver.max_sca == 100);
}

TEST_CASE("derived constants follow the definitions") {
  const Scenario s = parse_scenario(kReferenceText);
  const DerivedConstants d = derived_constants(s);
  CHECK(d.d_max == doctest::Approx(25.0).epsilon(1e-15));          // dt*v_max
  CHECK(d.slot_energy_j[0] == doctest::Approx(0.05).epsilon(1e-15));  // dt*P
  CHECK(d.rate_demand[0] == doctest::Approx(20.0).epsilon(1e-15));   // S/(B dt)
}

TEST_CASE("serialize-parse round trip is lossless") {
  Scenario s = parse_scenario(kReferenceText);
  s.sensors.push_back(fixtures::sensor_at(123.456789012345, -0.1, 2.5e6, 0.07));
  validate_scenario(s);
  const std::string text = serialize_scenario(s);
  const Scenario again = parse_scenario(text);
  CHECK(again.channel.beta0 == s.channel.beta0);
  CHECK(again.channel.noise_power_w == s.channel.noise_power_w);
  CHECK(again.channel.snr_gap == s.channel.snr_gap);
  CHECK(again.channel.beta0_db == s.channel.beta0_db);
  CHECK(again.mission.num_slots == s.mission.num_slots);
  CHECK(again.mission.q_start == s.mission.q_start);
  CHECK(again.solver.seed == s.solver.seed);
  REQUIRE(again.sensors.size() == s.sensors.size());
  for (size_t k = 0; k < s.sensors.size(); ++k) {
    CHECK(again.sensors[k].position == s.sensors[k].position);
    CHECK(again.sensors[k].data_bits == s.sensors[k].data_bits);
    CHECK(again.sensors[k].tx_power_w == s.sensors[k].tx_power_w);
  }
  // serialization is canonical: a second round trip is byte-identical
  CHECK(serialize_scenario(again) == text);
}

TEST_CASE("dB conversion identity") {
  // -60 dB -> 1e-6 exactly (power-of-ten argument)
  CHECK(std::pow(10.0, -60.0 / 10.0) == 1e-6);
  CHECK(std::pow(10.0, -10.0) == 1e-10);
}

TEST_CASE("endpoint reachability boundary") {
  std::string text = kReferenceText;
  // v_max*T = 1600*1.01 -> accepted
  auto with = [&](const std::string& vmax) {
    std::string t = text;
    const size_t at = t.find("v_max = 50.0");
    t.replace(at, 12, "v_max = " + vmax);
    return t;
  };
  CHECK_NOTHROW(parse_scenario(with("32.32")));  // 1616 m reach
  try {
    parse_scenario(with("31.98"));  // 1599 m reach
    FAIL("expected a validation error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
    CHECK(std::string(e.what()).find("reachability") != std::string::npos);
  }
}

TEST_CASE("slot grid must divide the horizon") {
  std::string t = kReferenceText;
  const size_t at = t.find("T = 50.0");
  t.replace(at, 8, "T = 50.1");  // not a multiple of 0.5
  CHECK_THROWS_AS(parse_scenario(t), Error);
}

TEST_CASE("parse failures name the offending line") {
  try {
    parse_scenario("[mission]\nH == 3\n");
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
  }
  CHECK_THROWS_AS(parse_scenario("[mystery]\nx = 1\n"), Error);
  CHECK_THROWS_AS(parse_scenario("x = 1\n"), Error);   // key before section
  CHECK_THROWS_AS(parse_scenario(""), Error);          // missing sections
  // duplicate keys are rejected (byte-determinism)
  std::string dup = kReferenceText;
  dup += "\n[[sensors]]\nx = 1\nx = 2\ny = 0\ndata_bits = 1\npower_w = 1\n";
  CHECK_THROWS_AS(parse_scenario(dup), Error);
  // unknown keys are rejected
  std::string unknown = kReferenceText;
  unknown.insert(unknown.find("[channel]"), "typo_key = 3\n");
  CHECK_THROWS_AS(parse_scenario(unknown), Error);
}

TEST_CASE("validation names the broken invariant") {
  Scenario s = parse_scenario(kReferenceText);
  s.sensors[0].data_bits = -1.0;
  try {
    validate_scenario(s);
    FAIL("expected validation error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("data_bits") != std::string::npos);
  }
  s = parse_scenario(kReferenceText);
  s.channel.outage_eps = 1.5;
  CHECK_THROWS_AS(validate_scenario(s), Error);
  s = parse_scenario(kReferenceText);
  s.channel.path_loss_exp = 1.5;
  CHECK_THROWS_AS(validate_scenario(s), Error);
  s = parse_scenario(kReferenceText);
  s.mission.num_slots = 1;
  CHECK_THROWS_AS(validate_scenario(s), Error);
}

TEST_CASE("aggressive slot length draws an advisory warning only") {
  std::string t = kReferenceText;
  const size_t at = t.find("dt = 0.5");
  t.replace(at, 8, "dt = 2.0");  // v_max*dt = 100 = H: clearly not << H
  std::vector<std::string> warnings;
  const Scenario s = parse_scenario(t, &warnings);
  CHECK(s.mission.num_slots == 25);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("quasi-static") != std::string::npos);
}

TEST_CASE("seeded random placement is reproducible and in the box") {
  const Scenario templ = parse_scenario(kReferenceText);
  const Scenario a = random_scenario(templ, 4, -800.0, 800.0, 11);
  const Scenario b = random_scenario(templ, 4, -800.0, 800.0, 11);
  const Scenario c = random_scenario(templ, 4, -800.0, 800.0, 12);
  REQUIRE(a.num_sensors() == 4);
  for (int k = 0; k < 4; ++k) {
    CHECK(a.sensors[k].position == b.sensors[k].position);
    CHECK(a.sensors[k].position.x() >= -800.0);
    CHECK(a.sensors[k].position.x() <= 800.0);
    CHECK(a.sensors[k].position.y() >= -800.0);
    CHECK(a.sensors[k].position.y() <= 800.0);
  }
  bool all_same = true;
  for (int k = 0; k < 4; ++k) {
    if (a.sensors[k].position != c.sensors[k].position) all_same = false;
  }
  CHECK(!all_same);
}

TEST_CASE("sweep copies re-derive and re-validate") {
  const Scenario s = parse_scenario(kReferenceText);
  const Scenario s2 = with_horizon(s, 100.0);
  CHECK(s2.mission.num_slots == 200);
  const Scenario s3 = with_data_bits(s, 2e6);
  CHECK(s3.sensors[0].data_bits == 2e6);
  CHECK_THROWS_AS(with_outage_eps(s, 0.0), Error);
  CHECK_THROWS_AS(with_horizon(s, 10.0), Error);  // endpoints unreachable
}
