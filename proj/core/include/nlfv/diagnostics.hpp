#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "nlfv/grid.hpp"
#include "nlfv/kernel.hpp"
#include "nlfv/model.hpp"
#include "nlfv/scheme.hpp"

namespace nlfv {

struct MassReport {
  std::vector<double> per_lane;
  double total = 0.0;
};

/// dx * sum_i u_i per lane, summed left to right.
MassReport total_mass(const SystemState& state, double dx);

/// sum_i |u_{i+1} - u_i| per lane, counting the jumps to the zero ghost cells at both ends.
std::vector<double> total_variation(const SystemState& state);

/// Kruzkov sign with sgn(0) = 0.
inline double kruzkov_sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

/// Left-hand side minus right-hand side of the cell entropy inequality for the Kruzkov
/// pair with constant `alpha`; non-positive for a monotone step. Indexed [lane][cell].
///
/// `terms` must hold the quantities the step from `before` to `after` was computed with.
std::vector<std::vector<double>> entropy_residual(const SystemState& before,
                                                  const SystemState& after, double alpha,
                                                  const StepTerms& terms, const SystemSpec& spec,
                                                  const GridSpec& grid);

/// Convenience form that recomputes the step quantities from `before` using grid.dt.
std::vector<std::vector<double>> entropy_residual(const SystemState& before,
                                                  const SystemState& after, double alpha,
                                                  const KernelWeights& weights,
                                                  const SystemSpec& spec, const GridSpec& grid,
                                                  StepOptions options = {});

/// Frozen-average local update of cell i in lane k (0-based), the map that must be
/// non-decreasing in the five density arguments.
struct LocalStencil {
  double x_left = 0.0, x_center = 0.0, x_right = 0.0;
  std::vector<double> u_left;       ///< u_{i-1}^k per lane
  std::vector<double> u_center;     ///< u_i^k per lane
  std::vector<double> u_right;      ///< u_{i+1}^k per lane
  std::vector<double> c_left;       ///< c_{i-1/2}^k per lane
  std::vector<double> c_right;      ///< c_{i+1/2}^k per lane
  std::vector<double> c_center;     ///< c_i^k per lane
};

double local_update(const SystemSpec& spec, const LocalStencil& stencil, std::size_t lane,
                    double beta, double lambda, double dt);

struct MonotonicityViolation {
  std::size_t trial = 0;
  std::size_t lane = 0;
  std::string argument;  ///< "u_{i-1}", "u_i", "u_{i+1}", "u^{k-1}_i", "u^{k+1}_i"
  double decrease = 0.0;
};

struct MonotonicityReport {
  std::size_t trials = 0;
  std::size_t probes = 0;
  std::vector<MonotonicityViolation> violations;

  [[nodiscard]] bool passed() const noexcept { return violations.empty(); }
};

/// Perturbs each density argument by +1e-7 (clamped to [0,1]) on random admissible states
/// and records every decrease of the updated value beyond 1e-12.
MonotonicityReport monotonicity_probe(const SystemSpec& spec, const GridSpec& grid,
                                      std::size_t trials, std::uint64_t seed = 20240611);

struct L1Distance {
  std::vector<double> per_lane;
  double total = 0.0;
};

/// L1 distance after injecting the coarser state onto the finer grid. The grids must be
/// identical or nested with ratio 2; throws NonNestedGrids otherwise.
L1Distance l1_distance(const SystemState& a, double dx_a, const SystemState& b, double dx_b);

/// Largest |sum_k R_i^k| relative to max_k |S^k| at the same cell; 0 where all S vanish.
double source_telescoping_ratio(const StepTerms& terms);

}  // namespace nlfv
