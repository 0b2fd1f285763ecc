#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nlfv/grid.hpp"
#include "nlfv/kernel.hpp"
#include "nlfv/scheme.hpp"

namespace nlfv::cli {

/// %.17g, enough digits to round-trip a double.
std::string format_double(double value);

/// Columns: t, lane, x_center, u (lanes numbered from 1).
void write_snapshot_csv(const std::filesystem::path& path, const SystemState& state,
                        const GridSpec& grid);

/// Columns: step, t, mass_total, mass_1.., tv_1.., min_u, max_u.
void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<DiagnosticsRow>& log);

void write_weights_csv(const std::filesystem::path& path, const KernelWeights& weights);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool dashed = false;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

/// Static SVG line chart, no external dependencies.
void write_line_plot(const std::filesystem::path& path, const PlotSpec& spec,
                     const std::vector<PlotSeries>& series);

}  // namespace nlfv::cli
