#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/fixtures.hpp"
#include "uavsched/baselines.hpp"
#include "uavsched/bcd.hpp"

using namespace uavsched;

TEST_CASE("rounding splits a shared slot exactly") {
  Eigen::MatrixXd x(2, 1);
  x << 0.25, 0.75;
  const Eigen::MatrixXi n = round_schedule(x, 100);
  CHECK(n(0, 0) == 25);
  CHECK(n(1, 0) == 75);
}

TEST_CASE("binary schedules round with zero loss") {
  Eigen::MatrixXd x(2, 4);
  x << 1, 0, 1, 0, 0, 1, 0, 0;
  const Eigen::MatrixXi n = round_schedule(x, 100);
  for (int k = 0; k < 2; ++k) {
    for (int m = 0; m < 4; ++m) {
      CHECK(n(k, m) == static_cast<int>(100 * x(k, m)));
    }
  }
}

TEST_CASE("collision repair is deterministic and respects the slot budget") {
  // both entries land on the .5 tie and round up; repair strips the
  // lowest-index entry back until the budget holds
  Eigen::MatrixXd x(2, 1);
  x << 0.55, 0.55;
  const Eigen::MatrixXi n = round_schedule(x, 10);
  CHECK(n.col(0).sum() <= 10);
  CHECK(n(0, 0) == 4);  // smallest fraction (tie) decremented twice
  CHECK(n(1, 0) == 6);

  // mixed fractions: only the smaller fractional part loses blocks
  Eigen::MatrixXd y(2, 1);
  y << 0.58, 0.55;
  const Eigen::MatrixXi ny = round_schedule(y, 10);
  CHECK(ny(0, 0) == 6);
  CHECK(ny(1, 0) == 4);
  CHECK(ny.col(0).sum() == 10);

  // near-tie below .5 keeps the naive rounding (no collision at all)
  Eigen::MatrixXd z(2, 1);
  z << 0.505, 0.505;
  const Eigen::MatrixXi nz = round_schedule(z, 10);
  CHECK(nz(0, 0) == 5);
  CHECK(nz(1, 0) == 5);
}

TEST_CASE("rounding never exceeds the per-slot block budget") {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const int kcount = 1 + static_cast<int>(rng.next_double() * 5);
    Eigen::MatrixXd x(kcount, 3);
    for (int k = 0; k < kcount; ++k) {
      for (int m = 0; m < 3; ++m) x(k, m) = rng.next_double();
    }
    // normalize columns into the simplex
    for (int m = 0; m < 3; ++m) {
      const double sum = x.col(m).sum();
      if (sum > 1.0) x.col(m) /= sum;
    }
    for (int lcount : {1, 7, 100}) {
      const Eigen::MatrixXi n = round_schedule(x, lcount);
      for (int m = 0; m < 3; ++m) {
        CHECK(n.col(m).sum() <= lcount);
        for (int k = 0; k < kcount; ++k) CHECK(n(k, m) >= 0);
      }
    }
  }
}

TEST_CASE("joint descent on a small instance") {
  const Scenario s = fixtures::small_scenario();
  const Trajectory q0 = straight_trajectory(s);
  const Solution sol = optimize(s, q0);

  REQUIRE(sol.trace.theta.size() >= 2);
  // min-max energy never increases across outer iterations
  for (size_t i = 1; i < sol.trace.theta.size(); ++i) {
    CHECK(sol.trace.theta[i] <=
          sol.trace.theta[i - 1] * (1.0 + 1e-9) + 1e-15);
  }
  // demands stay met after every move
  for (double eta : sol.trace.eta) {
    CHECK(eta >= 1.0 - 1e-6);
  }
  CHECK(sol.trace.converged);
  check_trajectory(sol.trajectory, s);

  // the final theta matches the maximum per-sensor energy
  double max_energy = 0.0;
  for (const SensorStats& st : sol.sensors) {
    max_energy = std::max(max_energy, st.energy_j);
    CHECK(st.demand_ratio >= 1.0 - 1e-6);
  }
  CHECK(sol.theta == doctest::Approx(max_energy).epsilon(1e-8));
}

TEST_CASE("a kappa above one degenerates to the schedule-only solve") {
  const Scenario s = fixtures::small_scenario();
  const Trajectory q0 = straight_trajectory(s);

  SolveOptions opt;
  opt.kappa = 2.0;
  const Solution degenerate = optimize(s, q0, opt);
  CHECK(degenerate.trace.iterations == 0);
  CHECK(degenerate.trace.converged);

  // equals the plain LP at the straight path
  const LinkBudget lb(s);
  const LpSolution lp = solve_schedule_lp(s, lb.rate_matrix(q0.points));
  REQUIRE(lp.optimal());
  CHECK(degenerate.theta == doctest::Approx(lp.theta).epsilon(1e-12));
  CHECK((degenerate.schedule - lp.schedule).cwiseAbs().maxCoeff() < 1e-12);
  for (int m = 0; m < q0.num_points(); ++m) {
    CHECK(degenerate.trajectory[m] == q0[m]);
  }
}

TEST_CASE("solver output is deterministic") {
  const Scenario s = fixtures::small_scenario();
  const Trajectory q0 = straight_trajectory(s);
  const Solution a = optimize(s, q0);
  const Solution b = optimize(s, q0);
  CHECK(a.theta == b.theta);
  CHECK((a.schedule - b.schedule).cwiseAbs().maxCoeff() == 0.0);
  for (int m = 0; m < s.num_slots(); ++m) {
    CHECK(a.trajectory[m] == b.trajectory[m]);
  }
}

TEST_CASE("a lone off-path sensor pulls the trajectory to it") {
  Scenario s = fixtures::reference_scenario({fixtures::sensor_at(0.0, 200.0)},
                                            20.0, 4e6, Vec2(-300.0, 0.0),
                                            Vec2(300.0, 0.0));
  const Solution sol = optimize(s, straight_trajectory(s));
  double closest = 1e300;
  for (int m = 0; m < s.num_slots(); ++m) {
    closest = std::min(closest, (sol.trajectory[m] - Vec2(0.0, 200.0)).norm());
  }
  CHECK(closest <= 0.5 * s.slot_displacement());
}

TEST_CASE("impossible demands raise a diagnostic naming the sensor") {
  Scenario s = fixtures::small_scenario();
  s.sensors[1].data_bits = 1e9;  // far beyond the horizon's capacity
  try {
    optimize(s, straight_trajectory(s));
    FAIL("expected infeasibility");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Infeasible);
    CHECK(std::string(e.what()).find("sensor 2") != std::string::npos);
  }
}

TEST_CASE("evaluate_solution accounting") {
  const Scenario s = fixtures::small_scenario();
  const LinkBudget lb(s);
  const Trajectory q = straight_trajectory(s);
  const Eigen::MatrixXd rates = lb.rate_matrix(q.points);
  const LpSolution lp = solve_schedule_lp(s, rates);
  REQUIRE(lp.optimal());
  const Eigen::MatrixXi blocks = round_schedule(lp.schedule, 100);
  const auto stats = evaluate_solution(s, lp.schedule, blocks, rates);

  for (int k = 0; k < s.num_sensors(); ++k) {
    const auto& st = stats[static_cast<size_t>(k)];
    CHECK(st.demand_ratio >= 1.0 - 1e-6);
    CHECK(st.energy_j <= lp.theta * (1.0 + 1e-9));
    // rounding with L=100 stays within a percent of the fractional value
    CHECK(std::abs(st.rounded_ratio - st.demand_ratio) < 1e-2);
    CHECK(st.nominal_bits ==
          doctest::Approx(st.rounded_ratio * s.sensors[k].data_bits)
              .epsilon(1e-12));
  }
}
