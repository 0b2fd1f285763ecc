#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "nlfv/error.hpp"

namespace nlfv::cli {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  return out;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_snapshot_csv(const std::filesystem::path& path, const SystemState& state,
                        const GridSpec& grid) {
  auto out = open_output(path);
  out << "t,lane,x_center,u\n";
  const std::string t = format_double(state.t);
  for (std::size_t k = 0; k < state.u.size(); ++k) {
    for (std::size_t i = 0; i < state.u[k].size(); ++i) {
      out << t << ',' << (k + 1) << ',' << format_double(grid.center(i)) << ','
          << format_double(state.u[k][i]) << '\n';
    }
  }
}

void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<DiagnosticsRow>& log) {
  auto out = open_output(path);
  const std::size_t lanes = log.empty() ? 0 : log.front().mass.size();
  out << "step,t,mass_total";
  for (std::size_t k = 1; k <= lanes; ++k) out << ",mass_" << k;
  for (std::size_t k = 1; k <= lanes; ++k) out << ",tv_" << k;
  out << ",min_u,max_u\n";
  for (const auto& row : log) {
    out << row.step << ',' << format_double(row.t) << ',' << format_double(row.mass_total);
    for (double m : row.mass) out << ',' << format_double(m);
    for (double v : row.tv) out << ',' << format_double(v);
    out << ',' << format_double(row.min_u) << ',' << format_double(row.max_u) << '\n';
  }
}

void write_weights_csv(const std::filesystem::path& path, const KernelWeights& weights) {
  auto out = open_output(path);
  out << "p,zeta\n";
  for (std::size_t p = 0; p < weights.zeta.size(); ++p) {
    out << p << ',' << format_double(weights.zeta[p]) << '\n';
  }
}

void write_line_plot(const std::filesystem::path& path, const PlotSpec& spec,
                     const std::vector<PlotSeries>& series) {
  constexpr double kWidth = 720, kHeight = 440;
  constexpr double kLeft = 70, kRight = 170, kTop = 40, kBottom = 55;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  const auto tx = [&](double v) { return spec.log_x ? std::log10(v) : v; };
  const auto ty = [&](double v) { return spec.log_y ? std::log10(v) : v; };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if ((spec.log_x && !(s.x[i] > 0)) || (spec.log_y && !(s.y[i] > 0))) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  const auto px = [&](double v) { return kLeft + (tx(v) - x0) / (x1 - x0) * plot_w; };
  const auto py = [&](double v) { return kTop + (1.0 - (ty(v) - y0) / (y1 - y0)) * plot_h; };

  auto out = open_output(path);
  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
                "stroke=\"black\"/>\n",
                kLeft, kTop, plot_w, plot_h);
  out << buf;
  out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(spec.title) << "</text>\n";
  out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << kTop + plot_h / 2 << "\" text-anchor=\"middle\" "
      << "transform=\"rotate(-90 16 " << kTop + plot_h / 2 << ")\">" << escape(spec.y_label)
      << "</text>\n";

  for (int t = 0; t <= 4; ++t) {
    const double fx = x0 + (x1 - x0) * t / 4.0;
    const double fy = y0 + (y1 - y0) * t / 4.0;
    const double sx = kLeft + plot_w * t / 4.0;
    const double sy = kTop + plot_h * (1.0 - t / 4.0);
    std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%.4g</text>\n",
                  sx, kTop + plot_h + 16, spec.log_x ? std::pow(10.0, fx) : fx);
    out << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">%.4g</text>\n",
                  kLeft - 6, sy + 4, spec.log_y ? std::pow(10.0, fy) : fy);
    out << buf;
  }

  double legend_y = kTop + 10;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
        << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if ((spec.log_x && !(s.x[i] > 0)) || (spec.log_y && !(s.y[i] > 0))) continue;
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(s.x[i]), py(s.y[i]));
      out << buf;
    }
    out << "\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"%s\" "
                  "stroke-width=\"2\"%s/>\n",
                  kLeft + plot_w + 10, legend_y, kLeft + plot_w + 34, legend_y, s.color.c_str(),
                  s.dashed ? " stroke-dasharray=\"6 4\"" : "");
    out << buf;
    out << "<text x=\"" << kLeft + plot_w + 40 << "\" y=\"" << legend_y + 4 << "\">"
        << escape(s.label) << "</text>\n";
    legend_y += 18;
  }
  out << "</svg>\n";
}

}  // namespace nlfv::cli
