#include "nlfv/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "nlfv/error.hpp"

namespace nlfv {

MassReport total_mass(const SystemState& state, double dx) {
  MassReport report;
  report.per_lane.reserve(state.u.size());
  for (const auto& lane : state.u) {
    double sum = 0.0;
    for (double v : lane) sum += v;
    report.per_lane.push_back(dx * sum);
  }
  for (double m : report.per_lane) report.total += m;
  return report;
}

std::vector<double> total_variation(const SystemState& state) {
  std::vector<double> tv;
  tv.reserve(state.u.size());
  for (const auto& lane : state.u) {
    if (lane.empty()) {
      tv.push_back(0.0);
      continue;
    }
    double sum = std::abs(lane.front());
    for (std::size_t i = 0; i + 1 < lane.size(); ++i) sum += std::abs(lane[i + 1] - lane[i]);
    sum += std::abs(lane.back());
    tv.push_back(sum);
  }
  return tv;
}

std::vector<std::vector<double>> entropy_residual(const SystemState& before,
                                                  const SystemState& after, double alpha,
                                                  const StepTerms& terms, const SystemSpec& spec,
                                                  const GridSpec& grid) {
  const std::size_t n = before.cell_count();
  const double lambda = terms.lambda;
  const double viscosity_lambda = terms.viscosity_lambda > 0.0 ? terms.viscosity_lambda : grid.lambda;
  const double dt = terms.dt;
  const double beta = grid.beta;
  std::vector<std::vector<double>> residual(spec.lanes.size(), std::vector<double>(n, 0.0));

  for (std::size_t k = 0; k < spec.lanes.size(); ++k) {
    const auto& lane = spec.lanes[k];
    const auto& u = before.u[k];
    const auto& lt = terms.lanes[k];
    const auto cell = [&](std::size_t j) { return j < n ? u[j] : 0.0; };

    // G_{j-1/2} for j = 0..n, with zero ghost cells on both sides.
    std::vector<double> g(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
      const double a = j > 0 ? u[j - 1] : 0.0;
      const double b = cell(j);
      const double nu = lt.nu_iface[j];
      g[j] = lf_flux(lane, std::max(a, alpha), std::max(b, alpha), nu, beta, viscosity_lambda) -
             lf_flux(lane, std::min(a, alpha), std::min(b, alpha), nu, beta, viscosity_lambda);
    }

    const double f_alpha = lane.flux(alpha);
    for (std::size_t i = 0; i < n; ++i) {
      const double sign = kruzkov_sign(after.u[k][i] - alpha);
      residual[k][i] = std::abs(after.u[k][i] - alpha) - std::abs(u[i] - alpha) +
                       lambda * (g[i + 1] - g[i]) +
                       lambda * sign * f_alpha * (lt.nu_iface[i + 1] - lt.nu_iface[i]) -
                       dt * sign * lt.source[i];
    }
  }
  return residual;
}

std::vector<std::vector<double>> entropy_residual(const SystemState& before,
                                                  const SystemState& after, double alpha,
                                                  const KernelWeights& weights,
                                                  const SystemSpec& spec, const GridSpec& grid,
                                                  StepOptions options) {
  Stepper stepper(spec, weights, grid, options);
  stepper.evaluate(before);
  StepTerms terms = stepper.terms();
  terms.dt = after.t > before.t ? after.t - before.t : grid.dt;
  terms.lambda = terms.dt / grid.dx;
  terms.viscosity_lambda = grid.lambda;
  return entropy_residual(before, after, alpha, terms, spec, grid);
}

double local_update(const SystemSpec& spec, const LocalStencil& s, std::size_t k, double beta,
                    double lambda, double dt) {
  const auto& lane = spec.lanes[k];
  const std::size_t lanes = spec.lanes.size();
  const double right = lf_flux(lane, s.u_center[k], s.u_right[k],
                               lane.velocity(s.x_right, s.c_right[k]), beta, lambda);
  const double left = lf_flux(lane, s.u_left[k], s.u_center[k],
                              lane.velocity(s.x_left, s.c_left[k]), beta, lambda);
  const double in = k > 0 ? exchange_rate(spec.lanes[k - 1], lane, s.x_center, s.u_center[k - 1],
                                          s.u_center[k], s.c_center[k - 1], s.c_center[k])
                          : 0.0;
  const double out = k + 1 < lanes
                         ? exchange_rate(lane, spec.lanes[k + 1], s.x_center, s.u_center[k],
                                         s.u_center[k + 1], s.c_center[k], s.c_center[k + 1])
                         : 0.0;
  return s.u_center[k] - lambda * (right - left) + dt * (in - out);
}

MonotonicityReport monotonicity_probe(const SystemSpec& spec, const GridSpec& grid,
                                      std::size_t trials, std::uint64_t seed) {
  constexpr double kStep = 1e-7;
  constexpr double kTolerance = 1e-12;
  const std::size_t lanes = spec.lanes.size();
  const double lambda = grid.lambda;
  const double dt = grid.lambda * grid.dx;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> position(grid.x_min, grid.x_max);

  MonotonicityReport report;
  report.trials = trials;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    LocalStencil s;
    s.x_center = position(rng);
    s.x_left = s.x_center - 0.5 * grid.dx;
    s.x_right = s.x_center + 0.5 * grid.dx;
    const auto draw = [&](std::vector<double>& v) {
      v.resize(lanes);
      for (auto& x : v) x = unit(rng);
    };
    draw(s.u_left);
    draw(s.u_center);
    draw(s.u_right);
    draw(s.c_left);
    draw(s.c_right);
    draw(s.c_center);

    for (std::size_t k = 0; k < lanes; ++k) {
      const double base = local_update(spec, s, k, grid.beta, lambda, dt);
      const auto probe = [&](std::vector<double>& field, std::size_t index, const char* name) {
        const double saved = field[index];
        field[index] = std::min(1.0, saved + kStep);
        const double bumped = local_update(spec, s, k, grid.beta, lambda, dt);
        field[index] = saved;
        ++report.probes;
        if (bumped - base < -kTolerance) {
          report.violations.push_back({trial, k, name, base - bumped});
        }
      };
      probe(s.u_left, k, "u_{i-1}");
      probe(s.u_center, k, "u_i");
      probe(s.u_right, k, "u_{i+1}");
      if (k > 0) probe(s.u_center, k - 1, "u^{k-1}_i");
      if (k + 1 < lanes) probe(s.u_center, k + 1, "u^{k+1}_i");
    }
  }
  return report;
}

L1Distance l1_distance(const SystemState& a, double dx_a, const SystemState& b, double dx_b) {
  if (a.u.size() != b.u.size()) {
    throw Error(ErrorCode::NonNestedGrids, "states have different lane counts");
  }
  const SystemState* coarse = &a;
  const SystemState* fine = &b;
  double dx_fine = dx_b;
  std::size_t ratio = 1;
  const double r = dx_a / dx_b;
  if (std::abs(r - 1.0) <= 1e-12) {
    ratio = 1;
  } else if (std::abs(r - 2.0) <= 1e-12) {
    ratio = 2;
  } else if (std::abs(r - 0.5) <= 1e-12) {
    ratio = 2;
    std::swap(coarse, fine);
    dx_fine = dx_a;
  } else {
    throw Error(ErrorCode::NonNestedGrids, "grid ratio " + std::to_string(r) + " is not 1 or 2");
  }
  if (fine->cell_count() != ratio * coarse->cell_count()) {
    throw Error(ErrorCode::NonNestedGrids, "cell counts are not nested");
  }

  L1Distance d;
  for (std::size_t k = 0; k < a.u.size(); ++k) {
    const auto& uc = coarse->u[k];
    const auto& uf = fine->u[k];
    double sum = 0.0;
    for (std::size_t j = 0; j < uf.size(); ++j) sum += std::abs(uc[j / ratio] - uf[j]);
    d.per_lane.push_back(dx_fine * sum);
  }
  for (double v : d.per_lane) d.total += v;
  return d;
}

double source_telescoping_ratio(const StepTerms& terms) {
  double worst = 0.0;
  if (terms.lanes.empty()) return worst;
  const std::size_t n = terms.lanes.front().source.size();
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (const auto& lane : terms.lanes) sum += lane.source[i];
    double scale = 0.0;
    for (const auto& s : terms.exchange) scale = std::max(scale, std::abs(s[i]));
    if (scale == 0.0) {
      if (sum != 0.0) return std::numeric_limits<double>::infinity();
      continue;
    }
    worst = std::max(worst, std::abs(sum) / scale);
  }
  return worst;
}

}  // namespace nlfv
