#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlfv/grid.hpp"
#include "nlfv/kernel.hpp"
#include "nlfv/model.hpp"
#include "nlfv/scheme.hpp"

namespace nlfv {

struct LaneConfig {
  double v_scale = 1.0;
  FluxFactor flux_factor = FluxFactor::lwr;
  InitialProfile initial;
};

/// Parsed run configuration.
///
/// The file format is one `key = value` per line with dotted keys, `#` comments, and
/// optional double quotes around values. Lists are comma separated.
///
///     grid.x_min = -4          run.t_final = 0.5        kernel.shape = linear
///     grid.x_max = 5.0625      run.beta = 0.3333        kernel.eta = 0.0625 | dx
///     grid.dx = 0.00078125     run.lambda = 0.06        kernel.samples = 1, 0.5, 0
///     lanes.0.v_scale = 1.5    run.kahan = false        kernel.pre_normalized = false
///     lanes.0.g = lwr | unit   run.center_convention = symmetric | paper-proof
///     lanes.0.u0 = sin2 | cos2 | constant | indicator | tabulated
///     lanes.0.u0.frequency, lanes.0.u0.lo, lanes.0.u0.hi, lanes.0.u0.amplitude,
///     lanes.0.u0.values        model.source_lipschitz   integrator = unsplit | split
///     local = false            outputs.snapshot_times = 0, 0.017, 0.33, 0.5
///     outputs.diagnostics = true
struct RunConfig {
  double x_min = -4.0;
  double x_max = 4.0;
  double dx = 0.00625;
  double t_final = 0.5;
  double beta = 0.3333;
  std::optional<double> lambda;
  bool kahan = false;
  CenterConvention center_convention = CenterConvention::symmetric;
  KernelSpec kernel;
  bool eta_is_dx = false;
  std::vector<LaneConfig> lanes;
  std::optional<double> source_lipschitz;
  Integrator integrator = Integrator::unsplit;
  bool local = false;
  std::vector<double> snapshot_times;
  bool diagnostics = true;

  /// Keys that were absent and fell back to their defaults, with the value used.
  std::vector<std::string> defaults_applied;
};

/// Throws ParseError (with line number and key) or ValidationError.
RunConfig parse_config_text(std::string_view text);

RunConfig parse_config(const std::filesystem::path& path);

SystemSpec build_system(const RunConfig& config);

struct PreparedRun {
  RunSettings settings;
  double cfl_lambda = 0.0;
  std::vector<std::string> warnings;
};

/// Builds run settings; an explicit lambda above the computed bound is kept and warned about.
PreparedRun prepare_run(const RunConfig& config);

}  // namespace nlfv
