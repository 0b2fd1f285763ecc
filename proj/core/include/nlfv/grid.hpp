#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace nlfv {

/// Uniform mesh on [x_min, x_max] with cells [x_min + i dx, x_min + (i+1) dx).
struct GridSpec {
  double x_min = 0.0;
  double x_max = 1.0;
  double dx = 0.0;
  std::size_t n_cells = 0;
  double lambda = 0.0;  ///< dt / dx
  double dt = 0.0;
  double t_final = 0.0;
  double beta = 1.0 / 3.0;  ///< numerical viscosity, in (0, 2/3)

  [[nodiscard]] double center(std::size_t i) const noexcept {
    return x_min + (static_cast<double>(i) + 0.5) * dx;
  }
  /// Position of the interface to the left of cell j (j may equal n_cells).
  [[nodiscard]] double interface(std::size_t j) const noexcept {
    return x_min + static_cast<double>(j) * dx;
  }
};

/// Builds a grid, deriving n_cells from dx and dt from lambda. Throws InvalidArgument.
GridSpec make_grid(double x_min, double x_max, double dx, double beta, double lambda,
                   double t_final);

/// Throws InvalidArgument when the grid invariants do not hold.
void validate_grid(const GridSpec& grid);

/// Piecewise-constant densities for every lane at one time level.
struct SystemState {
  double t = 0.0;
  std::vector<std::vector<double>> u;  ///< u[lane][cell]

  [[nodiscard]] std::size_t lane_count() const noexcept { return u.size(); }
  [[nodiscard]] std::size_t cell_count() const noexcept { return u.empty() ? 0 : u[0].size(); }
};

/// Initial density of one lane.
struct InitialProfile {
  enum class Kind {
    constant,   ///< amplitude everywhere
    sin2,       ///< amplitude * sin^2(frequency * pi * x) on (lo, hi)
    cos2,       ///< amplitude * cos^2(frequency * pi * x) on (lo, hi)
    indicator,  ///< amplitude on (lo, hi)
    tabulated,  ///< piecewise-linear through `values` at equispaced nodes on [lo, hi]
    function,   ///< arbitrary callable, cell averages by 5-point Gauss
  };

  Kind kind = Kind::constant;
  double amplitude = 1.0;
  double frequency = 0.5;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> values;
  std::function<double(double)> fn;

  [[nodiscard]] double value(double x) const;

  static InitialProfile constant(double value);
  static InitialProfile sin2(double frequency, double lo, double hi, double amplitude = 1.0);
  static InitialProfile cos2(double frequency, double lo, double hi, double amplitude = 1.0);
  static InitialProfile indicator(double lo, double hi, double amplitude = 1.0);
};

/// Exact (closed forms) or 5-point Gauss (tabulated, function) cell averages.
/// Throws RangeViolation when an average leaves [0, 1] by more than 1e-12.
SystemState project_initial_data(std::span<const InitialProfile> profiles, const GridSpec& grid);

/// Average of one profile over [a, b].
double cell_average(const InitialProfile& profile, double a, double b);

}  // namespace nlfv
