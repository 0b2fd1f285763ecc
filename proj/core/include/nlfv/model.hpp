#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace nlfv {

/// Closed-form choices for the flux factor g in f(u) = u g(u).
enum class FluxFactor {
  lwr,     ///< g(u) = 1 - u
  unit,    ///< g(u) = 1, i.e. f(u) = u
  custom,  ///< user-supplied callable
};

/// Closed-form choices for the velocity shape in nu(x, c) = v_scale * factor(x) * shape(c).
enum class VelocityShape {
  linear_decreasing,  ///< shape(c) = 1 - c
  custom,
};

using ScalarMap = std::function<double(double)>;

/// One lane: flux f(u) = u g(u) and velocity nu(x, c) evaluated at the nonlocal average c.
struct LaneModel {
  double v_scale = 1.0;
  FluxFactor flux_factor = FluxFactor::lwr;
  ScalarMap custom_g;             // used when flux_factor == custom
  ScalarMap custom_g_derivative;  // optional; central differences otherwise
  VelocityShape velocity_shape = VelocityShape::linear_decreasing;
  ScalarMap custom_shape;          // used when velocity_shape == custom
  ScalarMap position_factor;       // optional; identically 1 when empty
  double position_factor_sup = 1.0;

  // Filled by finalize_lane().
  double lip_f = 0.0;
  double nu_sup = 0.0;

  [[nodiscard]] double g(double u) const {
    switch (flux_factor) {
      case FluxFactor::lwr: return 1.0 - u;
      case FluxFactor::unit: return 1.0;
      case FluxFactor::custom: break;
    }
    return custom_g(u);
  }

  [[nodiscard]] double g_derivative(double u) const;

  [[nodiscard]] double flux(double u) const { return u * g(u); }

  [[nodiscard]] double shape(double c) const {
    if (velocity_shape == VelocityShape::linear_decreasing) return 1.0 - c;
    return custom_shape(c);
  }

  [[nodiscard]] double velocity(double x, double c) const {
    const double factor = position_factor ? position_factor(x) : 1.0;
    return v_scale * factor * shape(c);
  }
};

/// Recomputes lip_f and nu_sup by sampling [0,1] (1001 points).
void finalize_lane(LaneModel& lane);

/// g(u) = 1 - u, nu = v_scale (1 - c).
LaneModel make_lwr_lane(double v_scale);

/// g(u) = 1 (linear flux f(u) = u), nu = v_scale (1 - c).
LaneModel make_linear_flux_lane(double v_scale);

enum class KernelShape { linear_decreasing, constant, tabulated };

/// Look-ahead kernel on [0, eta].
///
/// linear_decreasing is omega(s) = 2 (eta - s) / eta^2, constant is 1 / eta. A tabulated
/// kernel is the piecewise-linear interpolant of `samples` at equispaced nodes covering
/// [0, eta] (first sample at s = 0, last at s = eta).
struct KernelSpec {
  KernelShape shape = KernelShape::linear_decreasing;
  double eta = 0.0625;
  bool pre_normalized = false;
  std::vector<double> samples;

  /// Kernel value before normalization; zero outside [0, eta].
  [[nodiscard]] double raw_density(double s) const;
};

struct SystemSpec {
  std::vector<LaneModel> lanes;
  KernelSpec kernel;
  double source_lipschitz = 0.0;

  [[nodiscard]] std::size_t lane_count() const noexcept { return lanes.size(); }
};

/// 2 * max_k v_scale_k * max(1, max_u |g_k'(u)|).
double default_source_lipschitz(const std::vector<LaneModel>& lanes);

/// Two lanes with g(u) = 1 - u, nu^1 = 1.5 (1 - c), nu^2 = 2.5 (1 - c) and a linear kernel.
SystemSpec make_two_lane_system(double eta);

struct Violation {
  std::string assumption;  // "A1" .. "A4" or "N"
  int lane = -1;           // -1 when not lane specific
  double witness = 0.0;    // sample point exhibiting the violation
  std::string detail;
};

/// Checks the structural assumptions on flux, velocity and kernel. Violations are data.
std::vector<Violation> validate_system(const SystemSpec& spec);

/// Exchange rate between a lower lane (density a, average a_avg) and the lane above it.
inline double exchange_rate(const LaneModel& lower, const LaneModel& upper, double x, double a,
                            double b, double a_avg, double b_avg) {
  const double dv = upper.g(b) * upper.velocity(x, b_avg) - lower.g(a) * lower.velocity(x, a_avg);
  return dv > 0.0 ? dv * a : dv * b;
}

/// Rate of vehicles leaving lane k for lane k + 1 (lanes numbered 1..N).
///
/// Returns zero for the boundary indices k = 0 and k = N.
double source_exchange(const SystemSpec& spec, std::size_t k, double x, double a, double b,
                       double a_avg, double b_avg);

}  // namespace nlfv
