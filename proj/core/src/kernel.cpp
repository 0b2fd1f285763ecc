#include "nlfv/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "nlfv/error.hpp"

namespace nlfv {

namespace {

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGaussNodes = {
    -0.9061798459386639927976269, -0.5384693101056830910363144, 0.0,
    0.5384693101056830910363144, 0.9061798459386639927976269};
constexpr std::array<double, 5> kGaussWeights = {
    0.2369268850561890875142640, 0.4786286704993664680412915, 0.5688888888888888888888889,
    0.4786286704993664680412915, 0.2369268850561890875142640};

double gauss_cell_integral(const KernelSpec& kernel, double lo, double hi) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double sum = 0.0;
  for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
    sum += kGaussWeights[q] * kernel.raw_density(mid + half * kGaussNodes[q]);
  }
  return half * sum;
}

}  // namespace

KernelWeights discretize(const KernelSpec& kernel, double dx, std::size_t n_eta) {
  if (n_eta == 0 || !(dx > 0.0)) {
    throw Error(ErrorCode::MismatchedSupport, "n_eta must be >= 1 and dx positive");
  }
  const double expected = static_cast<double>(n_eta) * dx;
  if (std::abs(kernel.eta - expected) > 1e-12 * std::abs(kernel.eta)) {
    throw Error(ErrorCode::MismatchedSupport,
                "eta = " + std::to_string(kernel.eta) + " is not n_eta * dx = " +
                    std::to_string(expected));
  }

  KernelWeights w;
  w.eta = kernel.eta;
  w.n_eta = n_eta;
  w.zeta.resize(n_eta);
  const double n = static_cast<double>(n_eta);

  switch (kernel.shape) {
    case KernelShape::linear_decreasing:
      // Integral of 2 (eta - s) / eta^2 over [p dx, (p+1) dx).
      for (std::size_t p = 0; p < n_eta; ++p) {
        w.zeta[p] = (2.0 * (n - static_cast<double>(p)) - 1.0) / (n * n);
      }
      return w;
    case KernelShape::constant:
      for (auto& z : w.zeta) z = 1.0 / n;
      return w;
    case KernelShape::tabulated:
      break;
  }

  double sum = 0.0;
  for (std::size_t p = 0; p < n_eta; ++p) {
    const double z = gauss_cell_integral(kernel, static_cast<double>(p) * dx,
                                         static_cast<double>(p + 1) * dx);
    if (z < 0.0) {
      throw Error(ErrorCode::NegativeWeight, "cell " + std::to_string(p) + " integrates to " +
                                                 std::to_string(z));
    }
    w.zeta[p] = z;
    sum += z;
  }
  if (!(sum > 0.0)) {
    throw Error(ErrorCode::NegativeWeight, "tabulated kernel has zero mass");
  }
  if (!(kernel.pre_normalized && std::abs(sum - 1.0) <= 1e-10)) {
    for (auto& z : w.zeta) z /= sum;
  }
  return w;
}

void convolve_interfaces_into(std::span<const double> u, std::size_t ghost,
                              const KernelWeights& weights, bool compensated,
                              std::vector<double>& out) {
  const std::size_t n_eta = weights.n_eta;
  if (ghost < n_eta || u.size() < ghost) {
    throw Error(ErrorCode::GhostZoneTooSmall, "ghost zone of " + std::to_string(ghost) +
                                                  " cells, kernel needs " +
                                                  std::to_string(n_eta));
  }
  const std::size_t count = u.size() - n_eta + 1;
  out.assign(count, 0.0);

  // Windows touching only zero cells stay zero.
  std::size_t lo = 0;
  while (lo < u.size() && u[lo] == 0.0) ++lo;
  if (lo == u.size()) return;
  std::size_t hi = u.size() - 1;
  while (u[hi] == 0.0) --hi;
  const std::size_t j_begin = lo + 1 > n_eta ? lo + 1 - n_eta : 0;
  const std::size_t j_end = std::min(hi + 1, count);

  const double* zeta = weights.zeta.data();
  const double* src = u.data();
  double* dst = out.data();
  if (!compensated) {
    for (std::size_t p = 0; p < n_eta; ++p) {
      const double z = zeta[p];
      for (std::size_t j = j_begin; j < j_end; ++j) dst[j] += z * src[j + p];
    }
    return;
  }

  std::vector<double> carry(count, 0.0);
  double* comp = carry.data();
  for (std::size_t p = 0; p < n_eta; ++p) {
    const double z = zeta[p];
    for (std::size_t j = j_begin; j < j_end; ++j) {
      const double y = z * src[j + p] - comp[j];
      const double t = dst[j] + y;
      comp[j] = (t - dst[j]) - y;
      dst[j] = t;
    }
  }
}

std::vector<double> convolve_interfaces(std::span<const double> u, std::size_t ghost,
                                        const KernelWeights& weights, bool compensated) {
  std::vector<double> out;
  convolve_interfaces_into(u, ghost, weights, compensated, out);
  return out;
}

std::vector<double> center_values(std::span<const double> c_half, CenterConvention convention) {
  const std::size_t offset = convention == CenterConvention::symmetric ? 1 : 2;
  if (c_half.size() < offset) return {};
  std::vector<double> c(c_half.size() - offset);
  const std::size_t shift = offset - 1;
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = 0.5 * (c_half[i + shift] + c_half[i + shift + 1]);
  }
  return c;
}

}  // namespace nlfv
