#include "nlfv/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nlfv/diagnostics.hpp"
#include "nlfv/error.hpp"
#include "nlfv/splitting.hpp"

namespace nlfv {

CflResult cfl_time_step(double dx, double beta, const SystemSpec& spec) {
  double speed = 0.0;
  for (const auto& lane : spec.lanes) speed = std::max(speed, lane.lip_f * lane.nu_sup);
  const double denominator = 1.0 + 6.0 * speed;
  const double base = std::min({1.0, 4.0 - 6.0 * beta, 6.0 * beta});

  CflResult result;
  result.lambda_without_source = base / denominator;
  const double dt0 = result.lambda_without_source * dx;
  const double with_source = std::min(base, 1.0 - 2.0 * dt0 * spec.source_lipschitz) / denominator;
  result.lambda = std::min(result.lambda_without_source, with_source);
  if (!(result.lambda > 0.0)) {
    throw Error(ErrorCode::NonPositiveCfl,
                "CFL bound " + std::to_string(result.lambda) + " is not positive");
  }
  result.dt = result.lambda * dx;
  return result;
}

Stepper::Stepper(const SystemSpec& spec, KernelWeights weights, const GridSpec& grid,
                 StepOptions options)
    : spec_(spec), weights_(std::move(weights)), grid_(grid), options_(options) {
  const std::size_t n = grid_.n_cells;
  const std::size_t lanes = spec_.lanes.size();
  terms_.lanes.resize(lanes);
  for (auto& lane : terms_.lanes) {
    lane.c_center.assign(n, 0.0);
    lane.nu_iface.assign(n + 1, 0.0);
    lane.flux.assign(n + 1, 0.0);
    lane.source.assign(n, 0.0);
  }
  terms_.exchange.assign(lanes > 0 ? lanes - 1 : 0, std::vector<double>(n, 0.0));
  padded_.assign(n + weights_.n_eta + 1, 0.0);
}

void Stepper::evaluate(const SystemState& state) {
  const std::size_t n = grid_.n_cells;
  const std::size_t lanes = spec_.lanes.size();
  const std::size_t ghost = weights_.n_eta + 1;
  if (state.u.size() != lanes || state.cell_count() != n) {
    throw Error(ErrorCode::InvalidArgument, "state shape does not match the system and grid");
  }

  for (std::size_t k = 0; k < lanes; ++k) {
    auto& lt = terms_.lanes[k];
    std::copy(state.u[k].begin(), state.u[k].end(), padded_.begin());
    convolve_interfaces_into(padded_, ghost, weights_, options_.compensated_sum, lt.c_half);

    const std::size_t shift = options_.center_convention == CenterConvention::symmetric ? 0 : 1;
    for (std::size_t i = 0; i < n; ++i) {
      lt.c_center[i] = 0.5 * (lt.c_half[i + shift] + lt.c_half[i + shift + 1]);
    }
    if (options_.include_convection) {
      const auto& lane = spec_.lanes[k];
      for (std::size_t j = 0; j <= n; ++j) {
        lt.nu_iface[j] = lane.velocity(grid_.interface(j), lt.c_half[j]);
      }
    }
  }

  for (std::size_t k = 0; k + 1 < lanes; ++k) {
    auto& s = terms_.exchange[k];
    if (!options_.include_source) {
      std::fill(s.begin(), s.end(), 0.0);
      continue;
    }
    const auto& lower = spec_.lanes[k];
    const auto& upper = spec_.lanes[k + 1];
    const auto& a = state.u[k];
    const auto& b = state.u[k + 1];
    const auto& ca = terms_.lanes[k].c_center;
    const auto& cb = terms_.lanes[k + 1].c_center;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = exchange_rate(lower, upper, grid_.center(i), a[i], b[i], ca[i], cb[i]);
    }
  }

  for (std::size_t k = 0; k < lanes; ++k) {
    auto& r = terms_.lanes[k].source;
    for (std::size_t i = 0; i < n; ++i) {
      const double in = k > 0 ? terms_.exchange[k - 1][i] : 0.0;
      const double out = k + 1 < lanes ? terms_.exchange[k][i] : 0.0;
      r[i] = in - out;
    }
  }
}

void Stepper::advance(SystemState& state, double dt) {
  evaluate(state);
  const std::size_t n = grid_.n_cells;
  const double lambda = dt / grid_.dx;
  terms_.lambda = lambda;
  terms_.viscosity_lambda = grid_.lambda;
  terms_.dt = dt;

  for (std::size_t k = 0; k < spec_.lanes.size(); ++k) {
    auto& lt = terms_.lanes[k];
    auto& u = state.u[k];
    if (options_.include_convection) {
      const auto& lane = spec_.lanes[k];
      for (std::size_t j = 0; j <= n; ++j) {
        const double left = j > 0 ? u[j - 1] : 0.0;
        const double right = j < n ? u[j] : 0.0;
        lt.flux[j] = lf_flux(lane, left, right, lt.nu_iface[j], grid_.beta, grid_.lambda);
      }
      for (std::size_t i = 0; i < n; ++i) {
        u[i] = u[i] - lambda * (lt.flux[i + 1] - lt.flux[i]) + dt * lt.source[i];
      }
    } else {
      std::fill(lt.flux.begin(), lt.flux.end(), 0.0);
      for (std::size_t i = 0; i < n; ++i) u[i] = u[i] + dt * lt.source[i];
    }
  }
  state.t += dt;
  if (options_.check_support) check_support(state);
}

void Stepper::check_support(const SystemState& state) const {
  const std::size_t n = grid_.n_cells;
  const std::size_t reach = std::min(n, weights_.n_eta);
  const double tol = options_.support_tolerance;
  for (std::size_t k = 0; k < state.u.size(); ++k) {
    const auto& u = state.u[k];
    if (n > 0 && std::abs(u[0]) > tol) {
      throw Error(ErrorCode::SupportOverflow,
                  "lane " + std::to_string(k + 1) + " has density " + std::to_string(u[0]) +
                      " at the left boundary at t = " + std::to_string(state.t) +
                      "; enlarge the domain");
    }
    for (std::size_t i = n - reach; i < n; ++i) {
      if (std::abs(u[i]) > tol) {
        throw Error(ErrorCode::SupportOverflow,
                    "lane " + std::to_string(k + 1) + " has density " + std::to_string(u[i]) +
                        " within the kernel reach of the right boundary (cell " +
                        std::to_string(i) + ") at t = " + std::to_string(state.t) +
                        "; enlarge the domain");
      }
    }
  }
}

SystemState step(const SystemState& state, const KernelWeights& weights, const SystemSpec& spec,
                 const GridSpec& grid, StepOptions options) {
  Stepper stepper(spec, weights, grid, options);
  SystemState next = state;
  stepper.advance(next, grid.dt);
  return next;
}

namespace {

DiagnosticsRow diagnostics_row(std::size_t step_index, const SystemState& state, double dx) {
  DiagnosticsRow row;
  row.step = step_index;
  row.t = state.t;
  const auto mass = total_mass(state, dx);
  row.mass = mass.per_lane;
  row.mass_total = mass.total;
  row.tv = total_variation(state);
  row.min_u = std::numeric_limits<double>::infinity();
  row.max_u = -std::numeric_limits<double>::infinity();
  for (const auto& lane : state.u) {
    for (double v : lane) {
      row.min_u = std::min(row.min_u, v);
      row.max_u = std::max(row.max_u, v);
    }
  }
  return row;
}

}  // namespace

Trajectory run(const RunSettings& settings) {
  validate_grid(settings.grid);
  if (settings.initial.size() != settings.spec.lanes.size()) {
    throw Error(ErrorCode::InvalidArgument, "one initial profile per lane is required");
  }
  return run_from(settings, project_initial_data(settings.initial, settings.grid));
}

Trajectory run_from(const RunSettings& settings, SystemState state) {
  const GridSpec& grid = settings.grid;
  Trajectory traj;
  traj.weights = discretize(settings.spec.kernel, grid.dx, settings.n_eta);

  std::vector<double> targets;
  for (double t : settings.output_times) {
    if (t > 0.0 && t < grid.t_final) targets.push_back(t);
  }
  targets.push_back(grid.t_final);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  const bool wants_initial =
      grid.t_final <= 0.0 ||
      std::any_of(settings.output_times.begin(), settings.output_times.end(),
                  [](double t) { return t <= 0.0; });

  Stepper stepper(settings.spec, traj.weights, grid, settings.options);
  std::optional<SplitStepper> splitter;
  if (settings.integrator == Integrator::split) {
    splitter.emplace(settings.spec, traj.weights, grid, settings.options);
  }
  if (settings.options.check_support) stepper.check_support(state);

  if (wants_initial) traj.snapshots.push_back(state);
  if (settings.record_diagnostics) traj.log.push_back(diagnostics_row(0, state, grid.dx));
  if (grid.t_final <= 0.0) return traj;

  SystemState before;
  double t = state.t;
  std::size_t next = 0;
  while (next < targets.size()) {
    const double target = targets[next];
    const double remaining = target - t;
    if (remaining <= 0.0) {
      ++next;
      continue;
    }
    const bool lands = remaining <= grid.dt * (1.0 + 1e-9);
    const double h = lands ? remaining : grid.dt;

    if (settings.observer) before = state;
    if (splitter) {
      splitter->advance(state, h);
    } else {
      stepper.advance(state, h);
    }
    t = lands ? target : t + h;
    state.t = t;
    ++traj.steps;

    if (settings.observer) {
      const StepTerms& terms = splitter ? splitter->terms() : stepper.terms();
      settings.observer(StepEvent{traj.steps, before, state, terms});
    }
    if (settings.record_diagnostics) {
      traj.log.push_back(diagnostics_row(traj.steps, state, grid.dx));
    }
    if (lands) {
      traj.snapshots.push_back(state);
      ++next;
    }
  }
  return traj;
}

}  // namespace nlfv
