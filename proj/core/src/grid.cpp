#include "nlfv/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "nlfv/error.hpp"

namespace nlfv {

namespace {

constexpr std::array<double, 5> kGaussNodes = {
    -0.9061798459386639927976269, -0.5384693101056830910363144, 0.0,
    0.5384693101056830910363144, 0.9061798459386639927976269};
constexpr std::array<double, 5> kGaussWeights = {
    0.2369268850561890875142640, 0.4786286704993664680412915, 0.5688888888888888888888889,
    0.4786286704993664680412915, 0.2369268850561890875142640};

double gauss_average(const InitialProfile& profile, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  double sum = 0.0;
  for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
    sum += kGaussWeights[q] * profile.value(mid + half * kGaussNodes[q]);
  }
  return 0.5 * sum;
}

// Integral of sin^2(k x) (sign = -1) or cos^2(k x) (sign = +1) over [a, b], written so that
// short intervals do not cancel against the antiderivative's magnitude.
double trig_square_integral(double k, double a, double b, double sign) {
  const double len = b - a;
  return 0.5 * len + sign * std::cos(k * (a + b)) * std::sin(k * len) / (2.0 * k);
}

}  // namespace

GridSpec make_grid(double x_min, double x_max, double dx, double beta, double lambda,
                   double t_final) {
  if (!(dx > 0.0) || !(x_max > x_min)) {
    throw Error(ErrorCode::InvalidArgument, "grid needs dx > 0 and x_max > x_min");
  }
  GridSpec grid;
  grid.x_min = x_min;
  grid.x_max = x_max;
  grid.dx = dx;
  grid.n_cells = static_cast<std::size_t>(std::llround((x_max - x_min) / dx));
  grid.beta = beta;
  grid.lambda = lambda;
  grid.dt = lambda * dx;
  grid.t_final = t_final;
  validate_grid(grid);
  return grid;
}

void validate_grid(const GridSpec& grid) {
  const double length = grid.x_max - grid.x_min;
  if (grid.n_cells == 0 ||
      std::abs(static_cast<double>(grid.n_cells) * grid.dx - length) > 1e-12 * length) {
    throw Error(ErrorCode::InvalidArgument, "dx does not divide [x_min, x_max]");
  }
  if (!(grid.beta > 0.0 && grid.beta < 2.0 / 3.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "beta = " + std::to_string(grid.beta) + " outside (0, 2/3)");
  }
  if (!(grid.lambda > 0.0) || !std::isfinite(grid.lambda)) {
    throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  }
  if (!(grid.t_final >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "t_final must be non-negative");
  }
}

double InitialProfile::value(double x) const {
  const bool inside = x > lo && x < hi;
  switch (kind) {
    case Kind::constant: return amplitude;
    case Kind::sin2: {
      if (!inside) return 0.0;
      const double s = std::sin(frequency * std::numbers::pi * x);
      return amplitude * s * s;
    }
    case Kind::cos2: {
      if (!inside) return 0.0;
      const double c = std::cos(frequency * std::numbers::pi * x);
      return amplitude * c * c;
    }
    case Kind::indicator: return inside ? amplitude : 0.0;
    case Kind::tabulated: {
      if (x < lo || x > hi || values.empty()) return 0.0;
      if (values.size() == 1) return values.front();
      const double h = (hi - lo) / static_cast<double>(values.size() - 1);
      const auto j = std::min(static_cast<std::size_t>((x - lo) / h), values.size() - 2);
      const double theta = (x - lo - static_cast<double>(j) * h) / h;
      return (1.0 - theta) * values[j] + theta * values[j + 1];
    }
    case Kind::function: return fn(x);
  }
  return 0.0;
}

InitialProfile InitialProfile::constant(double value) {
  InitialProfile p;
  p.kind = Kind::constant;
  p.amplitude = value;
  return p;
}

InitialProfile InitialProfile::sin2(double frequency, double lo, double hi, double amplitude) {
  InitialProfile p;
  p.kind = Kind::sin2;
  p.frequency = frequency;
  p.lo = lo;
  p.hi = hi;
  p.amplitude = amplitude;
  return p;
}

InitialProfile InitialProfile::cos2(double frequency, double lo, double hi, double amplitude) {
  InitialProfile p = sin2(frequency, lo, hi, amplitude);
  p.kind = Kind::cos2;
  return p;
}

InitialProfile InitialProfile::indicator(double lo, double hi, double amplitude) {
  InitialProfile p;
  p.kind = Kind::indicator;
  p.lo = lo;
  p.hi = hi;
  p.amplitude = amplitude;
  return p;
}

double cell_average(const InitialProfile& profile, double a, double b) {
  using Kind = InitialProfile::Kind;
  const double width = b - a;
  switch (profile.kind) {
    case Kind::constant: return profile.amplitude;
    case Kind::sin2:
    case Kind::cos2: {
      const double left = std::max(a, profile.lo);
      const double right = std::min(b, profile.hi);
      if (!(right > left)) return 0.0;
      const double k = profile.frequency * std::numbers::pi;
      const double sign = profile.kind == Kind::sin2 ? -1.0 : 1.0;
      return profile.amplitude * trig_square_integral(k, left, right, sign) / width;
    }
    case Kind::indicator: {
      const double overlap = std::min(b, profile.hi) - std::max(a, profile.lo);
      return overlap > 0.0 ? profile.amplitude * overlap / width : 0.0;
    }
    case Kind::tabulated:
    case Kind::function: break;
  }
  return gauss_average(profile, a, b);
}

SystemState project_initial_data(std::span<const InitialProfile> profiles, const GridSpec& grid) {
  SystemState state;
  state.t = 0.0;
  state.u.assign(profiles.size(), std::vector<double>(grid.n_cells, 0.0));
  for (std::size_t k = 0; k < profiles.size(); ++k) {
    for (std::size_t i = 0; i < grid.n_cells; ++i) {
      const double a = grid.interface(i);
      const double b = grid.interface(i + 1);
      double avg = cell_average(profiles[k], a, b);
      if (!(avg >= -1e-12 && avg <= 1.0 + 1e-12)) {
        throw Error(ErrorCode::RangeViolation, "lane " + std::to_string(k + 1) + " cell " +
                                                   std::to_string(i) + " average " +
                                                   std::to_string(avg));
      }
      state.u[k][i] = std::clamp(avg, 0.0, 1.0);
    }
  }
  return state;
}

}  // namespace nlfv
