#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/fixtures.hpp"
#include "uavsched/baselines.hpp"

using namespace uavsched;

TEST_CASE("straight trajectory hits the midpoint with an odd slot count") {
  // M = 101 puts slot 51 exactly at the center
  Scenario s = fixtures::reference_scenario({fixtures::sensor_at(0, 100)});
  s.mission.horizon_s = 50.5;
  s.mission.num_slots = 101;
  validate_scenario(s);
  const Trajectory q = straight_trajectory(s);
  CHECK(q[50] == Vec2(0.0, 0.0));
  CHECK(q[0] == s.mission.q_start);
  CHECK(q[100] == s.mission.q_end);

  // constant per-step displacement ||qF-q0||/(M-1)
  const double step = 1600.0 / 100.0;
  for (int m = 1; m < q.num_points(); ++m) {
    CHECK((q[m] - q[m - 1]).norm() == doctest::Approx(step).epsilon(1e-12));
  }
}

TEST_CASE("reachability boundary is accepted by validation") {
  Scenario s = fixtures::reference_scenario({fixtures::sensor_at(0, 100)});
  s.mission.horizon_s = 32.0;  // v_max * T = 1600 exactly
  s.mission.num_slots = 64;
  CHECK_NOTHROW(validate_scenario(s));
  s.mission.horizon_s = 31.98;  // 1599 < 1600
  s.mission.num_slots = 64;     // T no longer divides dt; reach checked first
  CHECK_THROWS_AS(validate_scenario(s), Error);
}

TEST_CASE("sensor centroid") {
  const Scenario square = fixtures::reference_scenario(
      {fixtures::sensor_at(-100, -100), fixtures::sensor_at(-100, 100),
       fixtures::sensor_at(100, -100), fixtures::sensor_at(100, 100)});
  CHECK(sensor_centroid(square) == Vec2(0.0, 0.0));

  const Scenario one = fixtures::reference_scenario({fixtures::sensor_at(37, -12)});
  CHECK(sensor_centroid(one) == Vec2(37.0, -12.0));
}

TEST_CASE("static collector over a single sensor uses the best channel") {
  const Scenario s = fixtures::reference_scenario({fixtures::sensor_at(250, -50)});
  const Solution sol = solve_scheme(s, Scheme::Static);
  // hovering right above the sensor: theta = (r / R_overhead) * E
  const double r = s.rate_demand(0);
  const double rate0 = outage_rate(Vec2(250, -50), Vec2(250, -50), 0.1,
                                   s.channel, s.mission.altitude_m);
  CHECK(sol.theta ==
        doctest::Approx((r / rate0) * s.slot_energy(0)).epsilon(1e-8));
  // every waypoint equals the centroid and the bundle carries that path
  for (int m = 0; m < s.num_slots(); ++m) {
    CHECK(sol.trajectory[m] == Vec2(250.0, -50.0));
  }
}

TEST_CASE("scheme ranking on a small instance") {
  const Scenario s = fixtures::small_scenario();
  const Solution opt = solve_scheme(s, Scheme::Optimized);
  const Solution straight = solve_scheme(s, Scheme::Straight);
  const Solution fixed = solve_scheme(s, Scheme::Static);

  // the descent starts from the straight path, so it can only improve
  CHECK(opt.theta <= straight.theta + 1e-9);
  // the fixed collector serves both sensors from afar
  CHECK(straight.theta <= fixed.theta + 1e-9);
}

TEST_CASE("comparison sweep over the data size") {
  const Scenario s = fixtures::small_scenario();
  SweepSpec sweep;
  sweep.variable = "S";
  sweep.grid = {2e6, 4e6, 6e6};
  SolveOptions opt;
  const CompareResult res = compare(s, sweep, opt, "", 2);
  REQUIRE(res.rows.size() == 9);

  for (int scheme = 0; scheme < 3; ++scheme) {
    double prev = 0.0;
    for (size_t point = 0; point < 3; ++point) {
      const CompareRow& row = res.rows[point * 3 + static_cast<size_t>(scheme)];
      REQUIRE(row.feasible);
      CHECK(row.sweep_var == "S");
      CHECK(row.sweep_value == sweep.grid[point]);
      CHECK(row.theta >= prev - 1e-12);
      prev = row.theta;
    }
  }

  const std::string csv = compare_csv(res);
  CHECK(csv.find("sweep_var,sweep_value,scheme,theta") != std::string::npos);
  CHECK(csv.find("optimized") != std::string::npos);
  CHECK(csv.find("static") != std::string::npos);
}

TEST_CASE("empty sweep reduces to a single comparison point") {
  const Scenario s = fixtures::small_scenario();
  const CompareResult res = compare(s, SweepSpec{}, SolveOptions{}, "", 1);
  REQUIRE(res.rows.size() == 3);
  CHECK(res.rows[0].scheme == Scheme::Optimized);
  CHECK(res.rows[1].scheme == Scheme::Straight);
  CHECK(res.rows[2].scheme == Scheme::Static);
  for (const CompareRow& row : res.rows) CHECK(row.feasible);
}

TEST_CASE("per-point infeasibility is recorded, not thrown") {
  const Scenario s = fixtures::small_scenario();
  SweepSpec sweep;
  sweep.variable = "S";
  sweep.grid = {4e6, 5e9};  // second point is impossible within T=15 s
  const CompareResult res = compare(s, sweep, SolveOptions{}, "", 1);
  REQUIRE(res.rows.size() == 6);
  for (size_t i = 3; i < 6; ++i) {
    CHECK(!res.rows[i].feasible);
    CHECK(!res.rows[i].error.empty());
  }
}
