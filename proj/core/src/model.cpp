#include "nlfv/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlfv/error.hpp"

namespace nlfv {

namespace {

constexpr int kLaneSamples = 1001;
constexpr int kMonotoneSamples = 101;
constexpr double kFiniteDifferenceStep = 1e-6;

std::string describe(double value) {
  std::ostringstream os;
  os.precision(17);
  os << value;
  return os.str();
}

}  // namespace

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MismatchedSupport: return "MismatchedSupport";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::GhostZoneTooSmall: return "GhostZoneTooSmall";
    case ErrorCode::RangeViolation: return "RangeViolation";
    case ErrorCode::NonPositiveCfl: return "NonPositiveCfl";
    case ErrorCode::SupportOverflow: return "SupportOverflow";
    case ErrorCode::NonNestedGrids: return "NonNestedGrids";
    case ErrorCode::DegenerateStudy: return "DegenerateStudy";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

double LaneModel::g_derivative(double u) const {
  switch (flux_factor) {
    case FluxFactor::lwr: return -1.0;
    case FluxFactor::unit: return 0.0;
    case FluxFactor::custom: break;
  }
  if (custom_g_derivative) return custom_g_derivative(u);
  const double h = kFiniteDifferenceStep;
  return (custom_g(u + h) - custom_g(u - h)) / (2.0 * h);
}

void finalize_lane(LaneModel& lane) {
  double lip = 0.0;
  double shape_sup = 0.0;
  for (int j = 0; j < kLaneSamples; ++j) {
    const double u = static_cast<double>(j) / (kLaneSamples - 1);
    lip = std::max(lip, std::abs(lane.g(u) + u * lane.g_derivative(u)));
    shape_sup = std::max(shape_sup, std::abs(lane.shape(u)));
  }
  lane.lip_f = lip;
  lane.nu_sup = std::abs(lane.v_scale) * std::abs(lane.position_factor_sup) * shape_sup;
}

LaneModel make_lwr_lane(double v_scale) {
  LaneModel lane;
  lane.v_scale = v_scale;
  lane.flux_factor = FluxFactor::lwr;
  lane.velocity_shape = VelocityShape::linear_decreasing;
  lane.lip_f = 1.0;
  lane.nu_sup = std::abs(v_scale);
  return lane;
}

LaneModel make_linear_flux_lane(double v_scale) {
  LaneModel lane = make_lwr_lane(v_scale);
  lane.flux_factor = FluxFactor::unit;
  lane.lip_f = 1.0;
  return lane;
}

double KernelSpec::raw_density(double s) const {
  if (s < 0.0 || s > eta) return 0.0;
  switch (shape) {
    case KernelShape::linear_decreasing: return 2.0 * (eta - s) / (eta * eta);
    case KernelShape::constant: return 1.0 / eta;
    case KernelShape::tabulated: break;
  }
  if (samples.empty()) return 0.0;
  if (samples.size() == 1) return samples.front();
  const double h = eta / static_cast<double>(samples.size() - 1);
  const auto j = std::min(static_cast<std::size_t>(s / h), samples.size() - 2);
  const double theta = (s - static_cast<double>(j) * h) / h;
  return (1.0 - theta) * samples[j] + theta * samples[j + 1];
}

double default_source_lipschitz(const std::vector<LaneModel>& lanes) {
  double v_max = 0.0;
  double gp_max = 1.0;
  for (const auto& lane : lanes) {
    v_max = std::max(v_max, std::abs(lane.v_scale));
    for (int j = 0; j < kLaneSamples; ++j) {
      const double u = static_cast<double>(j) / (kLaneSamples - 1);
      gp_max = std::max(gp_max, std::abs(lane.g_derivative(u)));
    }
  }
  return 2.0 * v_max * gp_max;
}

SystemSpec make_two_lane_system(double eta) {
  SystemSpec spec;
  spec.lanes = {make_lwr_lane(1.5), make_lwr_lane(2.5)};
  spec.kernel.shape = KernelShape::linear_decreasing;
  spec.kernel.eta = eta;
  spec.source_lipschitz = default_source_lipschitz(spec.lanes);
  return spec;
}

std::vector<Violation> validate_system(const SystemSpec& spec) {
  std::vector<Violation> report;
  if (spec.lanes.empty()) {
    report.push_back({"N", -1, 0.0, "system has no lanes"});
    return report;
  }

  for (std::size_t k = 0; k < spec.lanes.size(); ++k) {
    const auto& lane = spec.lanes[k];
    const int id = static_cast<int>(k) + 1;
    if (lane.flux_factor == FluxFactor::custom && !lane.custom_g) {
      report.push_back({"A1", id, 0.0, "custom flux factor without a callable"});
      continue;
    }
    if (lane.velocity_shape == VelocityShape::custom && !lane.custom_shape) {
      report.push_back({"A2", id, 0.0, "custom velocity shape without a callable"});
      continue;
    }

    // (A1): g(1) = 0, g non-increasing, f Lipschitz with the recorded constant.
    const double g_one = lane.g(1.0);
    if (std::abs(g_one) > 1e-14) {
      report.push_back({"A1", id, 1.0, "g(1) = " + describe(g_one) + " != 0"});
    }
    double prev = lane.g(0.0);
    for (int j = 1; j < kMonotoneSamples; ++j) {
      const double u = static_cast<double>(j) / (kMonotoneSamples - 1);
      const double cur = lane.g(u);
      if (cur > prev + 1e-14) {
        report.push_back({"A1", id, u, "g increases near u = " + describe(u)});
        break;
      }
      prev = cur;
    }
    for (int j = 0; j < kMonotoneSamples; ++j) {
      const double u = static_cast<double>(j) / (kMonotoneSamples - 1);
      const double slope = std::abs(lane.g(u) + u * lane.g_derivative(u));
      if (slope > lane.lip_f * (1.0 + 1e-12) + 1e-14) {
        report.push_back({"A1", id, u, "|f'(u)| = " + describe(slope) + " exceeds lip_f"});
        break;
      }
    }

    // (A2): nu bounded and non-negative on [0,1], with a finite recorded bound.
    if (!std::isfinite(lane.nu_sup) || lane.nu_sup <= 0.0) {
      report.push_back({"A2", id, 0.0, "nu_sup must be finite and positive"});
    }
    for (int j = 0; j < kMonotoneSamples; ++j) {
      const double c = static_cast<double>(j) / (kMonotoneSamples - 1);
      const double v = lane.v_scale * lane.shape(c);
      if (!std::isfinite(v) || std::abs(v) > lane.nu_sup * (1.0 + 1e-12) + 1e-14) {
        report.push_back({"A2", id, c, "velocity exceeds nu_sup at c = " + describe(c)});
        break;
      }
    }

    // (A3): the spatial factor must be bounded by its recorded sup.
    if (!std::isfinite(lane.position_factor_sup)) {
      report.push_back({"A3", id, 0.0, "position factor bound is not finite"});
    }
  }

  // (A4): kernel non-negative, non-increasing, positive support.
  const auto& kernel = spec.kernel;
  if (!(kernel.eta > 0.0) || !std::isfinite(kernel.eta)) {
    report.push_back({"A4", -1, kernel.eta, "kernel support must be positive"});
  } else if (kernel.shape == KernelShape::tabulated) {
    if (kernel.samples.empty()) {
      report.push_back({"A4", -1, 0.0, "tabulated kernel without samples"});
    }
    const double h = kernel.samples.size() > 1
                         ? kernel.eta / static_cast<double>(kernel.samples.size() - 1)
                         : 0.0;
    for (std::size_t j = 0; j < kernel.samples.size(); ++j) {
      if (kernel.samples[j] < 0.0) {
        report.push_back({"A4", -1, static_cast<double>(j) * h, "negative kernel sample"});
        break;
      }
    }
    for (std::size_t j = 1; j < kernel.samples.size(); ++j) {
      if (kernel.samples[j] > kernel.samples[j - 1]) {
        report.push_back(
            {"A4", -1, static_cast<double>(j) * h, "kernel increases between samples"});
        break;
      }
    }
  }

  if (!(spec.source_lipschitz >= 0.0)) {
    report.push_back({"A2", -1, spec.source_lipschitz, "source Lipschitz bound is negative"});
  }
  return report;
}

double source_exchange(const SystemSpec& spec, std::size_t k, double x, double a, double b,
                       double a_avg, double b_avg) {
  const std::size_t n = spec.lanes.size();
  if (k == 0 || k >= n) return 0.0;
  return exchange_rate(spec.lanes[k - 1], spec.lanes[k], x, a, b, a_avg, b_avg);
}

}  // namespace nlfv
