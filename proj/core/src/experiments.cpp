#include "nlfv/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>

#include "nlfv/error.hpp"
#include "nlfv/local.hpp"

namespace nlfv {

namespace {

// Runs task(i) for i in [0, count) on up to `threads` workers; results land by index, so
// the outcome does not depend on scheduling.
template <typename Task>
void parallel_for(std::size_t count, std::size_t threads, Task task) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<InitialProfile> scenario_initial_data(bool single_lane) {
  std::vector<InitialProfile> initial = {InitialProfile::sin2(0.5, -2.0, 2.0),
                                         InitialProfile::cos2(0.25, -2.0, 2.0)};
  if (single_lane) initial.resize(1);
  return initial;
}

SystemSpec scenario_system(double eta, bool single_lane, bool linear_flux) {
  SystemSpec spec = make_two_lane_system(eta);
  if (linear_flux) {
    spec.lanes = {make_linear_flux_lane(1.5), make_linear_flux_lane(2.5)};
  }
  if (single_lane) spec.lanes.resize(1);
  spec.source_lipschitz = spec.lanes.size() > 1 ? default_source_lipschitz(spec.lanes) : 0.0;
  return spec;
}

}  // namespace

std::size_t kernel_cells(double eta, double dx) {
  const double ratio = eta / dx;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded) {
    throw Error(ErrorCode::MismatchedSupport,
                "eta = " + std::to_string(eta) + " is not a multiple of dx = " +
                    std::to_string(dx));
  }
  return static_cast<std::size_t>(rounded);
}

RunSettings two_lane_settings(const ScenarioOptions& options) {
  RunSettings settings;
  settings.spec = scenario_system(options.eta, options.single_lane, options.linear_flux);
  settings.n_eta = kernel_cells(options.eta, options.dx);
  const double lambda = options.lambda.value_or(
      cfl_time_step(options.dx, options.beta, settings.spec).lambda);
  const double x_max = options.x_max.value_or(5.0 + options.eta);
  settings.grid = make_grid(options.x_min, x_max, options.dx, options.beta, lambda,
                            options.t_final);
  settings.initial = scenario_initial_data(options.single_lane);
  settings.output_times = options.snapshot_times;
  settings.options = options.options;
  settings.record_diagnostics = options.record_diagnostics;
  return settings;
}

Trajectory two_lane_scenario(const ScenarioOptions& options) {
  return run(two_lane_settings(options));
}

std::vector<RateTableRow> rate_table(std::span<const LevelSolution> solutions) {
  if (solutions.size() < 2) {
    throw Error(ErrorCode::DegenerateStudy, "a rate table needs at least two resolutions");
  }
  std::vector<RateTableRow> rows;
  for (std::size_t l = 0; l + 1 < solutions.size(); ++l) {
    const auto d = l1_distance(solutions[l].state, solutions[l].dx, solutions[l + 1].state,
                               solutions[l + 1].dx);
    if (!(d.total > 0.0)) {
      throw Error(ErrorCode::DegenerateStudy,
                  "zero distance between levels " + std::to_string(l) + " and " +
                      std::to_string(l + 1));
    }
    rows.push_back({solutions[l].dx, d.total, std::nullopt});
  }
  for (std::size_t l = 0; l + 1 < rows.size(); ++l) {
    rows[l].alpha = std::log2(rows[l].e / rows[l + 1].e);
  }
  return rows;
}

ConvergenceResult convergence_study(const ConvergenceOptions& options) {
  if (options.levels == 0) {
    throw Error(ErrorCode::DegenerateStudy, "at least one level is required");
  }
  const std::size_t runs = options.levels + 1;
  ConvergenceResult result;
  result.solutions.resize(runs);
  parallel_for(runs, options.threads, [&](std::size_t l) {
    ScenarioOptions scenario;
    scenario.dx = options.dx_coarsest / std::ldexp(1.0, static_cast<int>(l));
    scenario.eta = options.eta;
    scenario.lambda = options.lambda;
    scenario.beta = options.beta;
    scenario.t_final = options.t_final;
    scenario.snapshot_times = {};
    scenario.options = options.options;
    const auto start = std::chrono::steady_clock::now();
    auto traj = two_lane_scenario(scenario);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    result.solutions[l] = {scenario.dx, std::move(traj.snapshots.back()), elapsed.count()};
  });
  result.rows = rate_table(result.solutions);
  return result;
}

NonlocalToLocalResult nonlocal_to_local_study(const NonlocalToLocalOptions& options) {
  if (options.eta_cells.empty()) {
    throw Error(ErrorCode::InvalidArgument, "no kernel radii requested");
  }
  const std::size_t widest = *std::max_element(options.eta_cells.begin(), options.eta_cells.end());

  ScenarioOptions scenario;
  scenario.dx = options.dx;
  scenario.eta = options.dx;
  scenario.lambda = options.lambda;
  scenario.beta = options.beta;
  scenario.t_final = options.t_final;
  scenario.snapshot_times = options.snapshot_times;
  scenario.x_max = 5.0 + static_cast<double>(widest) * options.dx;
  scenario.single_lane = options.single_lane;
  scenario.options = options.options;
  const RunSettings local_settings = make_local(two_lane_settings(scenario));

  NonlocalToLocalResult result;
  result.grid = local_settings.grid;
  result.nonlocal.resize(options.eta_cells.size());
  parallel_for(options.eta_cells.size() + 1, options.threads, [&](std::size_t r) {
    if (r == options.eta_cells.size()) {
      result.local = run(local_settings);
      return;
    }
    RunSettings settings = local_settings;
    settings.n_eta = options.eta_cells[r];
    settings.spec.kernel.eta = static_cast<double>(settings.n_eta) * options.dx;
    result.nonlocal[r] = run(settings);
  });

  const auto& reference = result.local.snapshots.back();
  for (std::size_t r = 0; r < options.eta_cells.size(); ++r) {
    const auto d =
        l1_distance(result.nonlocal[r].snapshots.back(), options.dx, reference, options.dx);
    result.rows.push_back({static_cast<double>(options.eta_cells[r]) * options.dx,
                           options.eta_cells[r], d.total});
  }
  return result;
}

SplitCompareResult split_compare(const RunSettings& settings, std::size_t refinements,
                                 std::size_t threads) {
  SplitCompareResult result;
  result.rows.resize(refinements);
  parallel_for(refinements, threads, [&](std::size_t r) {
    RunSettings base = settings;
    base.grid.lambda = settings.grid.lambda / std::ldexp(1.0, static_cast<int>(r));
    base.grid.dt = base.grid.lambda * base.grid.dx;
    base.output_times = {};
    base.observer = nullptr;
    base.record_diagnostics = false;
    RunSettings split = base;
    base.integrator = Integrator::unsplit;
    split.integrator = Integrator::split;
    const auto a = run(base);
    const auto b = run(split);
    const auto d =
        l1_distance(a.snapshots.back(), base.grid.dx, b.snapshots.back(), base.grid.dx);
    result.rows[r] = {base.grid.dt, d.total};
  });

  std::vector<std::pair<double, double>> points;
  for (const auto& row : result.rows) {
    if (row.distance > 0.0) points.emplace_back(std::log2(row.dt), std::log2(row.distance));
  }
  if (points.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : points) {
      mx += x;
      my += y;
    }
    mx /= static_cast<double>(points.size());
    my /= static_cast<double>(points.size());
    double sxy = 0.0, sxx = 0.0;
    for (const auto& [x, y] : points) {
      sxy += (x - mx) * (y - my);
      sxx += (x - mx) * (x - mx);
    }
    result.slope = sxy / sxx;
  }
  return result;
}

std::size_t worker_count_from_env() {
  const std::size_t hardware = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NLFV_THREADS")) {
    char* end = nullptr;
    const long requested = std::strtol(env, &end, 10);
    if (end != env && requested > 0) {
      return std::min(hardware, static_cast<std::size_t>(requested));
    }
  }
  return hardware;
}

}  // namespace nlfv
