#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "nlfv/diagnostics.hpp"
#include "nlfv/scheme.hpp"

namespace nlfv {

/// Numerical viscosity used by the reference experiments.
inline constexpr double kReferenceBeta = 0.3333;
/// dt/dx quoted for the reference experiments; larger than the computed CFL bound.
inline constexpr double kReferenceLambda = 0.1286;

/// Number of cells covering `eta`; throws MismatchedSupport unless eta is a multiple of dx.
std::size_t kernel_cells(double eta, double dx);

/// Two-lane road: g(u) = 1 - u, nu^1 = 1.5 (1 - c), nu^2 = 2.5 (1 - c), linear look-ahead
/// kernel, u^1_0 = sin^2(pi x / 2) and u^2_0 = cos^2(pi x / 4) on (-2, 2).
struct ScenarioOptions {
  double dx = 0.00625;
  double eta = 0.0625;
  std::optional<double> lambda;  ///< computed CFL bound when empty
  double beta = kReferenceBeta;
  double t_final = 0.5;
  std::vector<double> snapshot_times = {0.0, 0.017, 0.33, 0.5};
  double x_min = -4.0;
  /// Right end of the computational domain; defaults to 5 + eta so the kernel window at
  /// the right boundary stays clear of the rarefaction tail.
  std::optional<double> x_max;
  bool single_lane = false;  ///< keep only the first lane (no exchange)
  bool linear_flux = false;  ///< g(u) = 1 instead of 1 - u
  StepOptions options;
  bool record_diagnostics = false;
};

RunSettings two_lane_settings(const ScenarioOptions& options);

Trajectory two_lane_scenario(const ScenarioOptions& options);

struct RateTableRow {
  double dx = 0.0;
  double e = 0.0;                ///< sum over lanes of the L1 distance to the dx/2 solution
  std::optional<double> alpha;   ///< log2(e / e_next), absent on the last row
};

struct LevelSolution {
  double dx = 0.0;
  SystemState state;
  double seconds = 0.0;  ///< wall time of the run
};

/// Rows from solutions ordered coarse to fine. Throws DegenerateStudy when any e is 0.
std::vector<RateTableRow> rate_table(std::span<const LevelSolution> solutions);

struct ConvergenceOptions {
  double dx_coarsest = 0.00625;
  std::size_t levels = 5;  ///< rows of the table; levels + 1 resolutions are run
  double eta = 0.0625;
  double t_final = 0.5;
  std::optional<double> lambda;
  double beta = kReferenceBeta;
  StepOptions options;
  std::size_t threads = 1;
};

struct ConvergenceResult {
  std::vector<RateTableRow> rows;
  std::vector<LevelSolution> solutions;
};

ConvergenceResult convergence_study(const ConvergenceOptions& options);

struct NonlocalToLocalOptions {
  double dx = 0.00625;
  std::vector<std::size_t> eta_cells = {100, 50, 10};
  double t_final = 0.5;
  std::vector<double> snapshot_times = {0.33, 0.5};
  std::optional<double> lambda;
  double beta = kReferenceBeta;
  bool single_lane = false;
  StepOptions options;
  std::size_t threads = 1;
};

struct NonlocalToLocalRow {
  double eta = 0.0;
  std::size_t eta_cells = 0;
  double distance = 0.0;  ///< sum over lanes of ||u^eta(T) - u^loc(T)||_L1
};

struct NonlocalToLocalResult {
  std::vector<NonlocalToLocalRow> rows;
  Trajectory local;
  std::vector<Trajectory> nonlocal;
  GridSpec grid;  ///< grid shared by every run
};

/// All runs share one computational domain, sized for the widest kernel.
NonlocalToLocalResult nonlocal_to_local_study(const NonlocalToLocalOptions& options);

struct SplitCompareRow {
  double dt = 0.0;
  double distance = 0.0;  ///< sum over lanes of ||split(T) - unsplit(T)||_L1
};

struct SplitCompareResult {
  std::vector<SplitCompareRow> rows;
  std::optional<double> slope;  ///< least-squares slope of log2(distance) vs log2(dt)
};

/// Runs `settings` with both integrators at dt, dt/2, ..., dt/2^(refinements-1).
SplitCompareResult split_compare(const RunSettings& settings, std::size_t refinements = 4,
                                 std::size_t threads = 1);

/// Worker count from NLFV_THREADS, capped at the hardware concurrency (at least 1).
std::size_t worker_count_from_env();

}  // namespace nlfv
