#include "app.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "nlfv/config.hpp"
#include "nlfv/diagnostics.hpp"
#include "nlfv/error.hpp"
#include "nlfv/experiments.hpp"
#include "output.hpp"

namespace nlfv::cli {

namespace fs = std::filesystem;

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct GlobalFlags {
  std::string out_dir = ".";
  bool paper_lambda = false;
  bool svg = false;
  bool kahan = false;
  std::string center_convention = "symmetric";
};

StepOptions step_options(const GlobalFlags& flags) {
  StepOptions options;
  options.compensated_sum = flags.kahan;
  options.center_convention = flags.center_convention == "symmetric"
                                  ? CenterConvention::symmetric
                                  : CenterConvention::forward;
  return options;
}

std::string snapshot_name(std::size_t index, double t) {
  std::ostringstream name;
  name << "snapshot_" << index << "_t" << t << ".csv";
  return name.str();
}

bool is_config_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::MismatchedSupport:
    case ErrorCode::NegativeWeight:
    case ErrorCode::NonPositiveCfl:
      return true;
    default:
      return false;
  }
}

PreparedRun load_run(const std::string& path, const GlobalFlags& flags, std::ostream& err) {
  RunConfig config = parse_config(path);
  for (const auto& d : config.defaults_applied) err << "default: " << d << '\n';
  if (flags.kahan) config.kahan = true;
  if (flags.center_convention != "symmetric") config.center_convention = CenterConvention::forward;
  if (flags.paper_lambda) config.lambda = kReferenceLambda;
  PreparedRun prepared = prepare_run(config);
  for (const auto& w : prepared.warnings) err << "warning: " << w << '\n';
  err << "lambda = " << format_double(prepared.settings.grid.lambda)
      << " (computed bound " << format_double(prepared.cfl_lambda) << "), "
      << prepared.settings.grid.n_cells << " cells, n_eta = " << prepared.settings.n_eta << '\n';
  return prepared;
}

void plot_snapshots(const fs::path& path, const std::string& title,
                    const std::vector<SystemState>& snapshots, const GridSpec& grid,
                    std::size_t lane) {
  std::vector<PlotSeries> series;
  for (std::size_t s = 0; s < snapshots.size(); ++s) {
    PlotSeries line;
    std::ostringstream label;
    label << "t = " << snapshots[s].t;
    line.label = label.str();
    line.color = kPalette[s % std::size(kPalette)];
    const auto& u = snapshots[s].u[lane];
    for (std::size_t i = 0; i < u.size(); ++i) {
      line.x.push_back(grid.center(i));
      line.y.push_back(u[i]);
    }
    series.push_back(std::move(line));
  }
  write_line_plot(path, {title, "x", "u", false, false}, series);
}

void write_snapshots(const fs::path& dir, const Trajectory& traj, const GridSpec& grid,
                     bool svg, std::ostream& err) {
  for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
    const fs::path file = dir / snapshot_name(s, traj.snapshots[s].t);
    write_snapshot_csv(file, traj.snapshots[s], grid);
    err << "wrote " << file.string() << '\n';
  }
  if (svg && !traj.snapshots.empty()) {
    for (std::size_t k = 0; k < traj.snapshots.front().u.size(); ++k) {
      const fs::path file = dir / ("snapshots_lane" + std::to_string(k + 1) + ".svg");
      plot_snapshots(file, "lane " + std::to_string(k + 1), traj.snapshots, grid, k);
    }
  }
}

int cmd_run(const std::string& config_path, const GlobalFlags& flags, std::ostream& out,
            std::ostream& err) {
  PreparedRun prepared = load_run(config_path, flags, err);
  const Trajectory traj = run(prepared.settings);
  const fs::path dir = flags.out_dir;
  write_snapshots(dir, traj, prepared.settings.grid, flags.svg, err);
  if (prepared.settings.record_diagnostics) {
    write_diagnostics_csv(dir / "diagnostics.csv", traj.log);
  }
  out << "steps: " << traj.steps << '\n';
  return kSuccess;
}

// With g = 1 nothing slows the fast lane, and halving lambda raises the numerical
// viscosity; the tails outrun the default domain on both sides.
constexpr double kSplitDomainLeft = -8.0;
constexpr double kSplitDomainRight = 10.0;

constexpr double kNoAlpha = std::numeric_limits<double>::quiet_NaN();

struct CheckViolation {
  std::string kind;
  std::size_t step = 0;
  std::size_t lane = 0;
  std::size_t cell = 0;
  double alpha = kNoAlpha;
  double value = 0.0;
};

int cmd_check(const std::string& config_path, const GlobalFlags& flags, bool dump_weights,
              std::size_t trials, std::ostream& out, std::ostream& err) {
  PreparedRun prepared = load_run(config_path, flags, err);
  RunSettings settings = prepared.settings;
  const GridSpec grid = settings.grid;
  const fs::path dir = flags.out_dir;

  const SystemState initial = project_initial_data(settings.initial, grid);
  double data_min = 1.0, data_max = 0.0;
  for (const auto& lane : initial.u) {
    for (double v : lane) {
      data_min = std::min(data_min, v);
      data_max = std::max(data_max, v);
    }
  }
  std::vector<double> alphas;
  for (int a = 0; a <= 10; ++a) alphas.push_back(a / 10.0);
  alphas.push_back(data_min);
  alphas.push_back(data_max);

  const bool entropy_applies = settings.integrator == Integrator::unsplit;
  if (!entropy_applies) err << "note: entropy check skipped for the split integrator\n";

  std::vector<CheckViolation> violations;
  double max_entropy = -std::numeric_limits<double>::infinity();
  double max_telescoping = 0.0;
  double min_u = 1.0, max_u = 0.0;
  const MassReport mass0 = total_mass(initial, grid.dx);

  settings.observer = [&](const StepEvent& ev) {
    for (std::size_t k = 0; k < ev.after.u.size(); ++k) {
      for (std::size_t i = 0; i < ev.after.u[k].size(); ++i) {
        const double v = ev.after.u[k][i];
        min_u = std::min(min_u, v);
        max_u = std::max(max_u, v);
        if (v < -1e-12 || v > 1.0 + 1e-12) violations.push_back({"range", ev.step, k + 1, i, kNoAlpha, v});
      }
    }
    const double tele = source_telescoping_ratio(ev.terms);
    max_telescoping = std::max(max_telescoping, tele);
    if (tele > 1e-15) violations.push_back({"telescoping", ev.step, 0, 0, kNoAlpha, tele});
    if (!entropy_applies) return;
    for (double alpha : alphas) {
      const auto res = entropy_residual(ev.before, ev.after, alpha, ev.terms, settings.spec, grid);
      for (std::size_t k = 0; k < res.size(); ++k) {
        for (std::size_t i = 0; i < res[k].size(); ++i) {
          max_entropy = std::max(max_entropy, res[k][i]);
          if (res[k][i] > 1e-12) {
            violations.push_back({"entropy", ev.step, k + 1, i, alpha, res[k][i]});
          }
        }
      }
    }
  };
  settings.output_times = {grid.t_final};
  const Trajectory traj = run(settings);

  const MassReport mass1 = total_mass(traj.snapshots.back(), grid.dx);
  const double drift = std::abs(mass1.total - mass0.total) / std::max(mass0.total, 1e-300);
  if (drift > 1e-10) violations.push_back({"mass", traj.steps, 0, 0, kNoAlpha, drift});

  const MonotonicityReport mono = monotonicity_probe(settings.spec, grid, trials);
  for (const auto& v : mono.violations) {
    violations.push_back({"monotonicity", v.trial, v.lane + 1, 0, kNoAlpha, -v.decrease});
  }

  {
    std::ofstream csv;
    fs::create_directories(dir);
    csv.open(dir / "violations.csv");
    csv << "kind,step,lane,cell,alpha,value\n";
    for (const auto& v : violations) {
      csv << v.kind << ',' << v.step << ',' << v.lane << ',' << v.cell << ','
          << (std::isnan(v.alpha) ? std::string() : format_double(v.alpha)) << ','
          << format_double(v.value) << '\n';
    }
  }
  if (dump_weights) write_weights_csv(dir / "weights.csv", traj.weights);

  out << "steps: " << traj.steps << '\n'
      << "range: [" << format_double(min_u) << ", " << format_double(max_u) << "]\n"
      << "mass drift: " << format_double(drift) << '\n'
      << "telescoping ratio: " << format_double(max_telescoping) << '\n';
  if (entropy_applies) out << "max entropy residual: " << format_double(max_entropy) << '\n';
  out << "monotonicity: " << mono.violations.size() << " violations in " << mono.probes
      << " probes\n"
      << "violations: " << violations.size() << '\n';
  return violations.empty() ? kSuccess : kDiagnosticFailure;
}

double fitted_slope(const std::vector<RateTableRow>& rows) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    const double x = std::log2(r.dx), y = std::log2(r.e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int cmd_converge(const GlobalFlags& flags, ConvergenceOptions options, std::ostream& out,
                 std::ostream& err) {
  options.options = step_options(flags);
  options.threads = worker_count_from_env();
  if (flags.paper_lambda) options.lambda = kReferenceLambda;
  err << "convergence study: dx = " << options.dx_coarsest << ", " << options.levels
      << " rows, eta = " << options.eta << ", threads = " << options.threads << '\n';
  const ConvergenceResult result = convergence_study(options);
  const fs::path dir = flags.out_dir;
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "rate_table.csv");
    csv << "dx,e,alpha\n";
    for (const auto& r : result.rows) {
      csv << format_double(r.dx) << ',' << format_double(r.e) << ','
          << (r.alpha ? format_double(*r.alpha) : std::string()) << '\n';
    }
  }
  bool floor_ok = true;
  for (const auto& r : result.rows) {
    out << "dx = " << format_double(r.dx) << "  e = " << format_double(r.e);
    if (r.alpha) {
      out << "  alpha = " << format_double(*r.alpha);
      if (*r.alpha < 0.5) floor_ok = false;
    }
    out << '\n';
  }
  if (flags.svg && result.rows.size() >= 2) {
    PlotSeries measured{"e(dx)", {}, {}, kPalette[0], false};
    for (const auto& r : result.rows) {
      measured.x.push_back(r.dx);
      measured.y.push_back(r.e);
    }
    const double slope = fitted_slope(result.rows);
    const double x0 = result.rows.front().dx, y0 = result.rows.front().e;
    PlotSeries half{"slope 0.5", {}, {}, kPalette[1], true};
    std::ostringstream fit_label;
    fit_label.precision(3);
    fit_label << "fitted slope " << slope;
    PlotSeries fit{fit_label.str(), {}, {}, kPalette[2], true};
    for (const auto& r : result.rows) {
      half.x.push_back(r.dx);
      half.y.push_back(y0 * std::pow(r.dx / x0, 0.5));
      fit.x.push_back(r.dx);
      fit.y.push_back(y0 * std::pow(r.dx / x0, slope));
    }
    write_line_plot(dir / "rate_table.svg", {"self-convergence", "dx", "e", true, true},
                    {measured, half, fit});
  }
  if (!floor_ok) err << "error: observed order below 0.5\n";
  return floor_ok ? kSuccess : kDiagnosticFailure;
}

int cmd_nl2l(const GlobalFlags& flags, NonlocalToLocalOptions options, std::ostream& out,
             std::ostream& err) {
  options.options = step_options(flags);
  options.threads = worker_count_from_env();
  if (flags.paper_lambda) options.lambda = kReferenceLambda;
  const NonlocalToLocalResult result = nonlocal_to_local_study(options);
  const fs::path dir = flags.out_dir;
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "nl2l.csv");
    csv << "eta,distance\n";
    for (const auto& r : result.rows) {
      csv << format_double(r.eta) << ',' << format_double(r.distance) << '\n';
      out << "eta = " << format_double(r.eta) << " (" << r.eta_cells
          << " cells)  distance = " << format_double(r.distance) << '\n';
    }
  }
  write_snapshots(dir / "local", result.local, result.grid, false, err);
  for (std::size_t r = 0; r < result.nonlocal.size(); ++r) {
    write_snapshots(dir / ("eta_" + std::to_string(result.rows[r].eta_cells) + "dx"),
                    result.nonlocal[r], result.grid, false, err);
  }
  if (flags.svg) {
    const std::size_t lanes = result.local.snapshots.back().u.size();
    for (std::size_t k = 0; k < lanes; ++k) {
      std::vector<PlotSeries> series;
      auto add = [&](const std::string& label, const Trajectory& traj, std::size_t c) {
        PlotSeries line{label, {}, {}, kPalette[c % std::size(kPalette)], false};
        const auto& u = traj.snapshots.back().u[k];
        for (std::size_t i = 0; i < u.size(); ++i) {
          line.x.push_back(result.grid.center(i));
          line.y.push_back(u[i]);
        }
        series.push_back(std::move(line));
      };
      for (std::size_t r = 0; r < result.nonlocal.size(); ++r) {
        add("eta = " + std::to_string(result.rows[r].eta_cells) + " dx", result.nonlocal[r], r);
      }
      add("local", result.local, result.nonlocal.size());
      write_line_plot(dir / ("nl2l_lane" + std::to_string(k + 1) + ".svg"),
                      {"lane " + std::to_string(k + 1) + " at final time", "x", "u", false, false},
                      series);
    }
  }
  bool ordered = true;
  for (std::size_t r = 1; r < result.rows.size(); ++r) {
    if (result.rows[r].eta < result.rows[r - 1].eta &&
        !(result.rows[r].distance < result.rows[r - 1].distance)) {
      ordered = false;
    }
  }
  if (!ordered) err << "error: distance does not decrease with eta\n";
  return ordered ? kSuccess : kDiagnosticFailure;
}

int cmd_split(const std::string& config_path, const GlobalFlags& flags, double dx, double eta,
              std::size_t refinements, std::ostream& out, std::ostream& err) {
  RunSettings settings;
  if (!config_path.empty()) {
    settings = load_run(config_path, flags, err).settings;
  } else {
    ScenarioOptions scenario;
    scenario.dx = dx;
    scenario.eta = eta;
    scenario.linear_flux = true;
    scenario.x_min = kSplitDomainLeft;
    scenario.x_max = kSplitDomainRight;
    scenario.options = step_options(flags);
    if (flags.paper_lambda) scenario.lambda = kReferenceLambda;
    settings = two_lane_settings(scenario);
    err << "split-compare: two-lane scenario with g = 1, dx = " << dx << '\n';
  }
  const SplitCompareResult result =
      split_compare(settings, refinements, worker_count_from_env());
  const fs::path dir = flags.out_dir;
  fs::create_directories(dir);
  std::ofstream csv(dir / "split_compare.csv");
  csv << "dt,distance\n";
  for (const auto& r : result.rows) {
    csv << format_double(r.dt) << ',' << format_double(r.distance) << '\n';
    out << "dt = " << format_double(r.dt) << "  distance = " << format_double(r.distance) << '\n';
  }
  if (!result.slope) {
    out << "slope: undefined (split and unsplit agree)\n";
    return kSuccess;
  }
  out << "slope: " << format_double(*result.slope) << '\n';
  if (*result.slope < 0.9) {
    err << "error: splitting error decays slower than first order\n";
    return kDiagnosticFailure;
  }
  return kSuccess;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-volume solver for nonlocal multilane traffic", "nlfv"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags flags;
  app.add_option("--out-dir", flags.out_dir, "Directory for output files");
  app.add_flag("--paper-lambda", flags.paper_lambda, "Use lambda = 0.1286 instead of the CFL bound");
  app.add_flag("--svg", flags.svg, "Also write SVG line plots");
  app.add_flag("--kahan", flags.kahan, "Compensated summation in the convolution");
  app.add_option("--center-convention", flags.center_convention, "Cell-centre average")
      ->check(CLI::IsMember({"symmetric", "paper-proof"}));

  std::string config_path;

  auto* run_cmd = app.add_subcommand("run", "Run a configuration and write snapshot CSVs");
  run_cmd->add_option("config", config_path, "Configuration file")->required();

  auto* check_cmd = app.add_subcommand("check", "Run a configuration under the diagnostics suite");
  check_cmd->add_option("config", config_path, "Configuration file")->required();
  bool dump_weights = false;
  std::size_t trials = 1000;
  check_cmd->add_flag("--dump-weights", dump_weights, "Write kernel weights to weights.csv");
  check_cmd->add_option("--trials", trials, "Monotonicity probe trials");

  auto* conv_cmd = app.add_subcommand("converge", "Self-convergence rate table");
  ConvergenceOptions conv;
  conv_cmd->add_option("--dx", conv.dx_coarsest, "Coarsest mesh size");
  conv_cmd->add_option("--levels", conv.levels, "Rows of the rate table");
  conv_cmd->add_option("--eta", conv.eta, "Kernel support");
  conv_cmd->add_option("--t-final", conv.t_final, "Final time");

  auto* nl2l_cmd = app.add_subcommand("nl2l", "Nonlocal-to-local limit study");
  NonlocalToLocalOptions nl2l;
  nl2l_cmd->add_option("--dx", nl2l.dx, "Mesh size");
  nl2l_cmd->add_option("--eta-cells", nl2l.eta_cells, "Kernel supports in cells")->delimiter(',');
  nl2l_cmd->add_option("--t-final", nl2l.t_final, "Final time");
  nl2l_cmd->add_flag("--single-lane", nl2l.single_lane, "Drop the second lane");

  auto* split_cmd = app.add_subcommand("split-compare", "Lie splitting versus the unsplit scheme");
  split_cmd->add_option("config", config_path, "Configuration file (optional)");
  double split_dx = 0.0125;
  double split_eta = 0.0625;
  std::size_t refinements = 4;
  split_cmd->add_option("--dx", split_dx, "Mesh size when no configuration is given");
  split_cmd->add_option("--eta", split_eta, "Kernel support when no configuration is given");
  split_cmd->add_option("--refinements", refinements, "Number of time-step halvings");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  if (nl2l.t_final != 0.5) nl2l.snapshot_times = {nl2l.t_final};

  try {
    if (*run_cmd) return cmd_run(config_path, flags, out, err);
    if (*check_cmd) return cmd_check(config_path, flags, dump_weights, trials, out, err);
    if (*conv_cmd) return cmd_converge(flags, conv, out, err);
    if (*nl2l_cmd) return cmd_nl2l(flags, nl2l, out, err);
    if (*split_cmd) return cmd_split(config_path, flags, split_dx, split_eta, refinements, out, err);
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return is_config_error(e.code()) ? kConfigError : kDiagnosticFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDiagnosticFailure;
  }
  return kConfigError;
}

}  // namespace nlfv::cli
