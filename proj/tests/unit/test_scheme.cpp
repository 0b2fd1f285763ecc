#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "nlfv/diagnostics.hpp"
#include "nlfv/error.hpp"
#include "nlfv/experiments.hpp"
#include "nlfv/kernel.hpp"
#include "nlfv/scheme.hpp"
#include "oracle.hpp"

using namespace nlfv;

namespace {

SystemSpec unit_velocity_lane() {
  SystemSpec spec;
  LaneModel lane;
  lane.velocity_shape = VelocityShape::custom;
  lane.custom_shape = [](double) { return 1.0; };
  finalize_lane(lane);
  spec.lanes.push_back(lane);
  spec.kernel.shape = KernelShape::constant;
  spec.kernel.eta = 0.1;
  return spec;
}

StepOptions unchecked() {
  StepOptions o;
  o.check_support = false;
  return o;
}

}  // namespace

TEST_CASE("CFL bound: source-free examples") {
  SystemSpec one = test::single_lane(1.0, 0.1);
  one.source_lipschitz = 0.0;
  CHECK(cfl_time_step(0.1, 1.0 / 3, one).lambda == doctest::Approx(1.0 / 7).epsilon(1e-14));

  SystemSpec two = make_two_lane_system(0.0625);
  two.source_lipschitz = 0.0;
  CHECK(cfl_time_step(0.00625, 1.0 / 3, two).lambda == doctest::Approx(1.0 / 16).epsilon(1e-14));

  const double small = cfl_time_step(0.1, 1e-6, one).lambda;
  CHECK(small == doctest::Approx(6e-6 / 7).epsilon(1e-9));
}

TEST_CASE("CFL bound shrinks with the source and stays consistent") {
  const SystemSpec two = make_two_lane_system(0.0625);
  const CflResult r = cfl_time_step(0.00625, kReferenceBeta, two);
  CHECK(r.lambda < r.lambda_without_source);
  CHECK(r.lambda > 0.0);
  CHECK(r.dt == doctest::Approx(r.lambda * 0.00625));
  const double base = std::min({1.0, 4.0 - 6.0 * kReferenceBeta, 6.0 * kReferenceBeta});
  const double first = base / 16.0;
  const double second = std::min(base, 1.0 - 2.0 * first * 0.00625 * 5.0) / 16.0;
  CHECK(r.lambda == doctest::Approx(std::min(first, second)).epsilon(1e-15));
}

TEST_CASE("Lax-Friedrichs flux values") {
  const LaneModel lane = make_lwr_lane(1.0);
  CHECK(lf_flux(lane, 0.0, 0.0, 1.3, 1.0 / 3, 1.0 / 16) == 0.0);
  CHECK(lf_flux(lane, 1.0, 1.0, 1.3, 1.0 / 3, 1.0 / 16) == 0.0);
  // 0.5 * 1.05 * (0.16 + 0.24) - (1/3) / (2/16) * 0.2
  const double expected = 0.5 * 1.05 * 0.4 - (16.0 / 6.0) * 0.2;
  CHECK(lf_flux(lane, 0.2, 0.4, 1.05, 1.0 / 3, 1.0 / 16) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(expected == doctest::Approx(-0.32333333333333333).epsilon(1e-15));
}

TEST_CASE("three-cell toy step matches the term-by-term oracle") {
  const SystemSpec spec = unit_velocity_lane();
  const GridSpec grid = make_grid(0.0, 0.3, 0.1, 1.0 / 3, 1.0 / 16, 1.0);
  const KernelWeights w = discretize(spec.kernel, 0.1, 1);
  SystemState s;
  s.u = {{0.0, 1.0, 0.0}};
  const SystemState got = step(s, w, spec, grid, unchecked());
  const SystemState want = test::marching_oracle(spec, w.zeta, grid, s);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(got.u[0][i] - want.u[0][i]) <= 1e-15);
  // Hand values: the interface fluxes are -/+ 8/3 and vanish at the ends.
  CHECK(got.u[0][0] == doctest::Approx(1.0 / 6).epsilon(1e-15));
  CHECK(got.u[0][1] == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(got.u[0][2] == doctest::Approx(1.0 / 6).epsilon(1e-15));
}

TEST_CASE("two-lane step with a wide kernel matches the oracle on random data") {
  std::mt19937_64 rng(23);
  SystemSpec spec = make_two_lane_system(0.05);
  const double dx = 0.01;
  const GridSpec grid = make_grid(0.0, 0.6, dx, kReferenceBeta,
                                  cfl_time_step(dx, kReferenceBeta, spec).lambda, 1.0);
  const KernelWeights w = discretize(spec.kernel, dx, 5);
  for (int trial = 0; trial < 20; ++trial) {
    const SystemState s = test::random_state(2, grid.n_cells, 1, 6, rng);
    const SystemState got = step(s, w, spec, grid, unchecked());
    const SystemState want = test::marching_oracle(spec, w.zeta, grid, s);
    for (int k = 0; k < 2; ++k) CHECK(test::max_abs_diff(got.u[k], want.u[k]) <= 1e-15);
  }
}

TEST_CASE("constant interior plateau is stationary") {
  const SystemSpec spec = test::single_lane(1.0, 0.05);
  const double dx = 0.01;
  const GridSpec grid = make_grid(0.0, 2.0, dx, 1.0 / 3, 0.1, 1.0);
  const KernelWeights w = discretize(spec.kernel, dx, 5);
  SystemState s;
  s.u.assign(1, std::vector<double>(grid.n_cells, 0.0));
  for (std::size_t i = 20; i < 180; ++i) s.u[0][i] = 0.37;
  const SystemState next = step(s, w, spec, grid);
  for (std::size_t i = 30; i < 170; ++i) CHECK(std::abs(next.u[0][i] - 0.37) < 1e-15);
}

TEST_CASE("identical lanes with identical data do not exchange") {
  SystemSpec spec = make_two_lane_system(0.05);
  spec.lanes[1] = spec.lanes[0];
  const double dx = 0.01;
  const GridSpec grid = make_grid(0.0, 1.0, dx, kReferenceBeta, 0.05, 1.0);
  const KernelWeights w = discretize(spec.kernel, dx, 5);
  std::mt19937_64 rng(1);
  SystemState s = test::random_state(1, grid.n_cells, 10, 20, rng);
  s.u.push_back(s.u[0]);
  Stepper stepper(spec, w, grid);
  stepper.evaluate(s);
  for (double r : stepper.terms().lanes[0].source) CHECK(r == 0.0);
  stepper.advance(s, grid.dt);
  CHECK(s.u[0] == s.u[1]);
}

TEST_CASE("invariant region, conservation and telescoping on random data") {
  std::mt19937_64 rng(99);
  const SystemSpec spec = make_two_lane_system(0.04);
  const double dx = 0.01;
  const double lambda = cfl_time_step(dx, kReferenceBeta, spec).lambda;
  const GridSpec grid = make_grid(0.0, 3.0, dx, kReferenceBeta, lambda, 1.0);
  const KernelWeights w = discretize(spec.kernel, dx, 4);
  for (int trial = 0; trial < 5; ++trial) {
    SystemState s = test::random_state(2, grid.n_cells, 100, 100, rng);
    const double m0 = total_mass(s, dx).total;
    Stepper stepper(spec, w, grid);
    for (int n = 0; n < 200; ++n) {
      stepper.advance(s, grid.dt);
      CHECK(source_telescoping_ratio(stepper.terms()) <= 1e-15);
      for (const auto& lane : s.u) {
        for (double v : lane) {
          REQUIRE(v >= -1e-12);
          REQUIRE(v <= 1.0 + 1e-12);
        }
      }
    }
    CHECK(std::abs(total_mass(s, dx).total - m0) <= 1e-12 * m0);
  }
}

TEST_CASE("mass reaching the boundary is reported") {
  const SystemSpec spec = test::single_lane(1.0, 0.05);
  const GridSpec grid = make_grid(0.0, 1.0, 0.01, 1.0 / 3, 0.1, 1.0);
  const KernelWeights w = discretize(spec.kernel, 0.01, 5);
  SystemState s;
  s.u.assign(1, std::vector<double>(grid.n_cells, 0.0));
  s.u[0][grid.n_cells - 2] = 0.5;
  try {
    step(s, w, spec, grid);
    FAIL("expected SupportOverflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SupportOverflow);
  }
}

TEST_CASE("run: zero final time returns the projected data") {
  ScenarioOptions o;
  o.dx = 0.025;
  o.eta = 0.05;
  o.t_final = 0.0;
  o.snapshot_times = {0.0};
  const RunSettings settings = two_lane_settings(o);
  const Trajectory traj = run(settings);
  REQUIRE(traj.snapshots.size() == 1);
  const SystemState init = project_initial_data(settings.initial, settings.grid);
  CHECK(traj.snapshots[0].u == init.u);
  CHECK(traj.steps == 0);
}

TEST_CASE("run hits the snapshot times exactly and is deterministic") {
  ScenarioOptions o;
  o.dx = 0.025;
  o.eta = 0.05;
  const Trajectory a = two_lane_scenario(o);
  const Trajectory b = two_lane_scenario(o);
  REQUIRE(a.snapshots.size() == 4);
  CHECK(a.snapshots[0].t == 0.0);
  CHECK(a.snapshots[1].t == 0.017);
  CHECK(a.snapshots[2].t == 0.33);
  CHECK(a.snapshots[3].t == 0.5);
  for (std::size_t s = 0; s < 4; ++s) CHECK(a.snapshots[s].u == b.snapshots[s].u);
}

TEST_CASE("compensated summation changes the result by rounding only") {
  ScenarioOptions o;
  o.dx = 0.0125;
  o.eta = 0.0625;
  const Trajectory plain = two_lane_scenario(o);
  o.options.compensated_sum = true;
  const Trajectory kahan = two_lane_scenario(o);
  for (int k = 0; k < 2; ++k) {
    CHECK(test::max_abs_diff(plain.snapshots.back().u[k], kahan.snapshots.back().u[k]) < 1e-12);
  }
}

TEST_CASE("forward centre convention runs and stays admissible") {
  ScenarioOptions o;
  o.dx = 0.025;
  o.eta = 0.05;
  o.options.center_convention = CenterConvention::forward;
  const Trajectory t = two_lane_scenario(o);
  for (const auto& lane : t.snapshots.back().u) {
    for (double v : lane) CHECK((v >= -1e-12 && v <= 1 + 1e-12));
  }
}

TEST_CASE("Lipschitz continuity in time with a refinement-stable constant") {
  auto measure = [](double dx) {
    ScenarioOptions o;
    o.dx = dx;
    o.eta = 0.05;
    o.snapshot_times = {0.5};
    RunSettings s = two_lane_settings(o);
    double worst = 0.0;
    s.observer = [&](const StepEvent& ev) {
      const double dt = ev.after.t - ev.before.t;
      double d = 0.0;
      for (std::size_t k = 0; k < ev.after.u.size(); ++k) {
        for (std::size_t i = 0; i < ev.after.u[k].size(); ++i) {
          d += std::abs(ev.after.u[k][i] - ev.before.u[k][i]);
        }
      }
      worst = std::max(worst, dx * d / dt);
    };
    run(s);
    return worst;
  };
  const double coarse = measure(0.025);
  const double fine = measure(0.0125);
  CHECK(std::isfinite(coarse));
  CHECK(std::isfinite(fine));
  CHECK(fine / coarse < 1.5);
  CHECK(coarse / fine < 1.5);
}

TEST_CASE("total variation stays inside the exponential envelope") {
  ScenarioOptions o;
  o.dx = 0.0125;
  o.eta = 0.0625;
  o.snapshot_times = {0.5};
  o.record_diagnostics = true;
  const Trajectory t = two_lane_scenario(o);
  REQUIRE(t.log.size() > 11);
  const auto tv = [](const DiagnosticsRow& r) {
    double s = 0.0;
    for (double v : r.tv) s += v;
    return s;
  };
  const double tv0 = tv(t.log[0]);
  const double k = std::max(0.0, std::log((tv(t.log[10]) + 1) / (tv0 + 1)) / t.log[10].t);
  for (const auto& row : t.log) {
    CHECK(tv(row) <= 2.0 * (std::exp(k * row.t) * (tv0 + 1) - 1));
  }
}
