#include <cmath>

#include "doctest.h"
#include "nlfv/error.hpp"
#include "nlfv/experiments.hpp"

using namespace nlfv;

TEST_CASE("kernel cell counts") {
  CHECK(kernel_cells(0.0625, 0.00625) == 10);
  CHECK(kernel_cells(0.0625, 0.00078125) == 80);
  CHECK_THROWS_AS(kernel_cells(0.0625, 0.025), Error);
}

TEST_CASE("rate table from synthetic levels") {
  std::vector<LevelSolution> levels(3);
  levels[0] = {0.5, SystemState{0.0, {{0.8, 0.0}}}};
  levels[1] = {0.25, SystemState{0.0, {{0.4, 0.4, 0.0, 0.0}}}};
  levels[2] = {0.125, SystemState{0.0, {{0.4, 0.4, 0.4, 0.4, 0.1, 0.0, 0.0, 0.0}}}};
  const auto rows = rate_table(levels);
  REQUIRE(rows.size() == 2);
  // e0 = 0.25 * (0.4 + 0.4) = 0.2, e1 = 0.125 * 0.1 = 0.0125
  CHECK(rows[0].e == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(rows[1].e == doctest::Approx(0.0125).epsilon(1e-15));
  REQUIRE(rows[0].alpha.has_value());
  CHECK(*rows[0].alpha == doctest::Approx(4.0).epsilon(1e-14));
  CHECK_FALSE(rows[1].alpha.has_value());
}

TEST_CASE("degenerate studies are rejected") {
  std::vector<LevelSolution> same(2, LevelSolution{0.1, SystemState{0.0, {{0.3, 0.3}}}});
  try {
    rate_table(same);
    FAIL("expected DegenerateStudy");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateStudy);
  }
  CHECK_THROWS_AS(rate_table(std::span<const LevelSolution>(same.data(), 1)), Error);
}

TEST_CASE("small convergence study: decreasing errors, order above one half, thread-independent") {
  ConvergenceOptions o;
  o.dx_coarsest = 0.025;
  o.levels = 2;
  o.eta = 0.1;
  const ConvergenceResult serial = convergence_study(o);
  REQUIRE(serial.rows.size() == 2);
  CHECK(serial.rows[1].e < serial.rows[0].e);
  CHECK(*serial.rows[0].alpha >= 0.5);
  o.threads = 3;
  const ConvergenceResult parallel = convergence_study(o);
  CHECK(parallel.rows[0].e == serial.rows[0].e);
  CHECK(parallel.rows[1].e == serial.rows[1].e);
}

TEST_CASE("small nonlocal-to-local study") {
  NonlocalToLocalOptions o;
  o.dx = 0.0125;
  o.eta_cells = {20, 10, 4, 1};
  const auto r = nonlocal_to_local_study(o);
  REQUIRE(r.rows.size() == 4);
  CHECK(r.rows[0].distance > r.rows[1].distance);
  CHECK(r.rows[1].distance > r.rows[2].distance);
  CHECK(r.rows[3].distance == 0.0);
  CHECK(r.local.snapshots.size() == 2);

  o.single_lane = true;
  o.eta_cells = {20, 10, 4};
  const auto single = nonlocal_to_local_study(o);
  CHECK(single.rows[0].distance > single.rows[1].distance);
  CHECK(single.rows[1].distance > single.rows[2].distance);
}

TEST_CASE("split comparison: exact for a single lane, first order with exchange") {
  ScenarioOptions o;
  o.dx = 0.025;
  o.eta = 0.05;
  o.single_lane = true;
  o.snapshot_times = {0.5};
  // Smaller steps mean more numerical viscosity, and wider tails.
  o.x_min = -8.0;
  o.x_max = 10.0;
  const auto single = split_compare(two_lane_settings(o), 3);
  for (const auto& row : single.rows) CHECK(row.distance == 0.0);
  CHECK_FALSE(single.slope.has_value());

  o.single_lane = false;
  o.linear_flux = true;
  const auto pair = split_compare(two_lane_settings(o), 3);
  REQUIRE(pair.slope.has_value());
  CHECK(*pair.slope >= 0.9);
}

TEST_CASE("thread count from the environment is at least one") {
  CHECK(worker_count_from_env() >= 1);
}
