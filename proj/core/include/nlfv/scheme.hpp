#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "nlfv/grid.hpp"
#include "nlfv/kernel.hpp"
#include "nlfv/model.hpp"

namespace nlfv {

struct CflResult {
  double lambda = 0.0;
  double dt = 0.0;
  double lambda_without_source = 0.0;
};

/// Largest admissible dt/dx for the Lax-Friedrichs-type scheme.
///
/// The source term's own dependence on dt is resolved with one fixed-point pass: the bound
/// is first computed with the source ignored, and then recomputed using the resulting dt.
CflResult cfl_time_step(double dx, double beta, const SystemSpec& spec);

/// Nonlocal Lax-Friedrichs flux at one interface, with nu already evaluated there.
inline double lf_flux(const LaneModel& lane, double u_l, double u_r, double nu_iface, double beta,
                      double lambda) {
  return 0.5 * nu_iface * (lane.flux(u_l) + lane.flux(u_r)) - beta / (2.0 * lambda) * (u_r - u_l);
}

struct StepOptions {
  bool include_convection = true;
  bool include_source = true;
  bool compensated_sum = false;
  CenterConvention center_convention = CenterConvention::symmetric;
  bool check_support = true;
  double support_tolerance = 1e-10;
};

/// Quantities of one lane evaluated from the state at the start of a step.
struct LaneTerms {
  std::vector<double> c_half;    ///< c_{j-1/2}, j = 0..n+1
  std::vector<double> c_center;  ///< c_i, i = 0..n-1
  std::vector<double> nu_iface;  ///< nu(x_{j-1/2}, c_{j-1/2}), j = 0..n
  std::vector<double> flux;      ///< F_{j-1/2}, j = 0..n (filled by advance)
  std::vector<double> source;    ///< R_i
};

struct StepTerms {
  std::vector<LaneTerms> lanes;
  /// exchange[k - 1][i] = S^k at cell i for k = 1..N-1.
  std::vector<std::vector<double>> exchange;
  double lambda = 0.0;            ///< dt / dx actually used
  double viscosity_lambda = 0.0;  ///< the grid's lambda, which sets beta / (2 lambda)
  double dt = 0.0;
};

/// Explicit marching scheme for the coupled system. Reuses its buffers across steps.
class Stepper {
 public:
  Stepper(const SystemSpec& spec, KernelWeights weights, const GridSpec& grid,
          StepOptions options = {});

  /// Nonlocal averages, interface velocities and lane-exchange source of `state`.
  void evaluate(const SystemState& state);

  /// One step of length dt, in place. Throws SupportOverflow.
  ///
  /// The viscosity coefficient beta / (2 lambda) always uses the grid's lambda, so a step
  /// shorter than grid.dt is the blend (1 - theta) u + theta H(u) of a full step H.
  void advance(SystemState& state, double dt);

  [[nodiscard]] const StepTerms& terms() const noexcept { return terms_; }
  [[nodiscard]] const KernelWeights& weights() const noexcept { return weights_; }
  [[nodiscard]] const GridSpec& grid() const noexcept { return grid_; }
  [[nodiscard]] const SystemSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] const StepOptions& options() const noexcept { return options_; }

  /// Throws SupportOverflow if mass sits where the ghost zones would cut it off.
  void check_support(const SystemState& state) const;

 private:
  SystemSpec spec_;
  KernelWeights weights_;
  GridSpec grid_;
  StepOptions options_;
  StepTerms terms_;
  std::vector<double> padded_;
};

/// One marching step from `state` using the grid's dt.
SystemState step(const SystemState& state, const KernelWeights& weights, const SystemSpec& spec,
                 const GridSpec& grid, StepOptions options = {});

enum class Integrator { unsplit, split };

struct StepEvent {
  std::size_t step = 0;
  const SystemState& before;
  const SystemState& after;
  const StepTerms& terms;
};

using StepObserver = std::function<void(const StepEvent&)>;

struct DiagnosticsRow {
  std::size_t step = 0;
  double t = 0.0;
  double mass_total = 0.0;
  std::vector<double> mass;
  std::vector<double> tv;
  double min_u = 0.0;
  double max_u = 0.0;
};

struct RunSettings {
  SystemSpec spec;
  GridSpec grid;
  std::size_t n_eta = 1;
  std::vector<InitialProfile> initial;
  /// Times at which states are recorded; t_final is always recorded.
  std::vector<double> output_times;
  Integrator integrator = Integrator::unsplit;
  StepOptions options;
  bool record_diagnostics = false;
  StepObserver observer;
};

struct Trajectory {
  std::vector<SystemState> snapshots;
  std::vector<DiagnosticsRow> log;
  KernelWeights weights;
  std::size_t steps = 0;
};

/// Marches from the projected initial data to grid.t_final, shortening the step that
/// lands on each output time.
Trajectory run(const RunSettings& settings);

/// Same, from an already projected state.
Trajectory run_from(const RunSettings& settings, SystemState initial);

}  // namespace nlfv
