#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "nlfv/error.hpp"
#include "nlfv/kernel.hpp"

using namespace nlfv;

namespace {

// Midpoint rule with 10^4 subintervals per cell on the normalized kernel.
std::vector<double> midpoint_weights(const KernelSpec& kernel, double dx, std::size_t n) {
  std::vector<double> z(n, 0.0);
  const int m = 10000;
  const double h = dx / m;
  double total = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    for (int q = 0; q < m; ++q) z[p] += kernel.raw_density(p * dx + (q + 0.5) * h) * h;
    total += z[p];
  }
  for (double& v : z) v /= total;
  return z;
}

// c_{j-1/2} = sum_p zeta_p u_{j+p} with u = 0 outside the stored range.
std::vector<double> naive_convolution(const std::vector<double>& u, const std::vector<double>& z,
                                      std::size_t count) {
  std::vector<double> c(count, 0.0);
  for (std::size_t j = 0; j < count; ++j) {
    for (std::size_t p = 0; p < z.size(); ++p) {
      if (j + p < u.size()) c[j] += z[p] * u[j + p];
    }
  }
  return c;
}

std::vector<double> padded(std::vector<double> u, std::size_t ghost) {
  u.resize(u.size() + ghost, 0.0);
  return u;
}

}  // namespace

TEST_CASE("linear kernel weights: closed form and midpoint oracle") {
  KernelSpec kernel;
  kernel.eta = 0.0625;
  const double dx = kernel.eta / 10;
  const KernelWeights w = discretize(kernel, dx, 10);
  REQUIRE(w.zeta.size() == 10);
  CHECK(w.zeta[0] == doctest::Approx(0.19).epsilon(1e-14));
  CHECK(w.zeta[9] == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(std::accumulate(w.zeta.begin(), w.zeta.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  const auto oracle = midpoint_weights(kernel, dx, 10);
  for (std::size_t p = 0; p < 10; ++p) CHECK(std::abs(w.zeta[p] - oracle[p]) < 1e-9);
}

TEST_CASE("constant kernel weights are uniform") {
  KernelSpec kernel;
  kernel.shape = KernelShape::constant;
  kernel.eta = 0.35;
  const KernelWeights w = discretize(kernel, 0.05, 7);
  for (double z : w.zeta) CHECK(z == doctest::Approx(1.0 / 7).epsilon(1e-15));
}

TEST_CASE("single-cell support gives weight one for every shape") {
  for (auto shape : {KernelShape::linear_decreasing, KernelShape::constant, KernelShape::tabulated}) {
    KernelSpec kernel;
    kernel.shape = shape;
    kernel.eta = 0.1;
    kernel.samples = {2.0, 1.0, 0.5};
    const KernelWeights w = discretize(kernel, 0.1, 1);
    REQUIRE(w.zeta.size() == 1);
    CHECK(w.zeta[0] == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("tabulated kernel matches the midpoint oracle and is normalized") {
  KernelSpec kernel;
  kernel.shape = KernelShape::tabulated;
  kernel.eta = 0.2;
  kernel.samples = {3.0, 2.5, 1.0, 0.4, 0.0};
  const double dx = 0.025;
  const KernelWeights w = discretize(kernel, dx, 8);
  const auto oracle = midpoint_weights(kernel, dx, 8);
  for (std::size_t p = 0; p < 8; ++p) CHECK(std::abs(w.zeta[p] - oracle[p]) < 1e-8);
  CHECK(std::accumulate(w.zeta.begin(), w.zeta.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("discretize rejects bad supports and negative weights") {
  KernelSpec kernel;
  kernel.eta = 0.0625;
  CHECK_THROWS_AS(discretize(kernel, 0.025, 3), Error);
  try {
    discretize(kernel, 0.025, 3);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MismatchedSupport);
  }
  KernelSpec neg;
  neg.shape = KernelShape::tabulated;
  neg.eta = 0.1;
  neg.samples = {1.0, -1.0};
  try {
    discretize(neg, 0.05, 2);
    FAIL("expected NegativeWeight");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NegativeWeight);
  }
}

TEST_CASE("convolution of simple data") {
  KernelSpec kernel;
  kernel.eta = 0.05;
  const KernelWeights w = discretize(kernel, 0.01, 5);

  const auto c = convolve_interfaces(padded(std::vector<double>(20, 0.4), 5), 5, w);
  for (std::size_t j = 0; j + 5 <= 20; ++j) CHECK(c[j] == doctest::Approx(0.4).epsilon(1e-15));

  const auto zero = convolve_interfaces(padded(std::vector<double>(20, 0.0), 5), 5, w);
  for (double v : zero) CHECK(v == 0.0);

  // Step data: with a symmetric split of the window the average is half the jump.
  KernelSpec flat;
  flat.shape = KernelShape::constant;
  flat.eta = 0.04;
  const KernelWeights wf = discretize(flat, 0.01, 4);
  std::vector<double> step(12, 0.0);
  for (std::size_t i = 0; i < 6; ++i) step[i] = 1.0;
  const auto cs = convolve_interfaces(padded(step, 4), 4, wf);
  CHECK(cs[4] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("convolution matches the naive double loop, with and without compensation") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  KernelSpec kernel;
  kernel.eta = 0.3;
  const std::size_t n_eta = 30;
  const KernelWeights w = discretize(kernel, 0.01, n_eta);
  std::vector<double> u(200, 0.0);
  for (std::size_t i = 20; i < 150; ++i) u[i] = unit(rng);
  const auto in = padded(u, n_eta + 2);
  const auto oracle = naive_convolution(in, w.zeta, 201);
  for (bool kahan : {false, true}) {
    const auto c = convolve_interfaces(in, n_eta + 2, w, kahan);
    REQUIRE(c.size() >= 201);
    for (std::size_t j = 0; j < 201; ++j) CHECK(std::abs(c[j] - oracle[j]) < 1e-14);
  }
}

TEST_CASE("ghost zone narrower than the kernel is rejected") {
  KernelSpec kernel;
  kernel.eta = 0.05;
  const KernelWeights w = discretize(kernel, 0.01, 5);
  try {
    convolve_interfaces(padded(std::vector<double>(10, 0.1), 3), 3, w);
    FAIL("expected GhostZoneTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GhostZoneTooSmall);
  }
}

TEST_CASE("convolution properties on random data") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  KernelSpec kernel;
  kernel.eta = 0.12;
  const std::size_t n_eta = 12, n = 120;
  const KernelWeights w = discretize(kernel, 0.01, n_eta);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> u(n, 0.0), v(n, 0.0);
    for (std::size_t i = 5; i + 5 < n; ++i) u[i] = unit(rng), v[i] = unit(rng);
    const auto cu = convolve_interfaces(padded(u, n_eta), n_eta, w);
    const auto cv = convolve_interfaces(padded(v, n_eta), n_eta, w);

    SUBCASE("convexity") {
      for (std::size_t j = 0; j + n_eta <= n; ++j) {
        const auto lo = *std::min_element(u.begin() + j, u.begin() + j + n_eta);
        const auto hi = *std::max_element(u.begin() + j, u.begin() + j + n_eta);
        CHECK(cu[j] >= lo - 1e-15);
        CHECK(cu[j] <= hi + 1e-15);
      }
    }
    SUBCASE("linearity") {
      const double a = 0.3, b = 0.6;
      std::vector<double> mix(n);
      for (std::size_t i = 0; i < n; ++i) mix[i] = a * u[i] + b * v[i];
      const auto cm = convolve_interfaces(padded(mix, n_eta), n_eta, w);
      for (std::size_t j = 0; j < cm.size(); ++j) {
        CHECK(std::abs(cm[j] - (a * cu[j] + b * cv[j])) < 1e-13);
      }
    }
    SUBCASE("shift equivariance") {
      std::vector<double> shifted(n, 0.0);
      for (std::size_t i = 1; i < n; ++i) shifted[i] = u[i - 1];
      const auto cs = convolve_interfaces(padded(shifted, n_eta), n_eta, w);
      for (std::size_t j = 0; j + 1 < cu.size(); ++j) CHECK(cs[j + 1] == cu[j]);
    }
    SUBCASE("total variation does not grow") {
      double tv_u = u.front() + u.back(), tv_c = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) tv_u += std::abs(u[i + 1] - u[i]);
      for (std::size_t j = 0; j + 1 < cu.size(); ++j) tv_c += std::abs(cu[j + 1] - cu[j]);
      CHECK(tv_c <= tv_u + 1e-13);
    }
  }
}

TEST_CASE("centre averages") {
  const std::vector<double> flat(6, 0.3);
  for (double v : center_values(flat)) CHECK(v == doctest::Approx(0.3).epsilon(1e-15));
  const std::vector<double> pair = {0.2, 0.4, 0.8};
  const auto sym = center_values(pair, CenterConvention::symmetric);
  REQUIRE(sym.size() == 2);
  CHECK(sym[0] == doctest::Approx(0.3).epsilon(1e-15));
  const auto fwd = center_values(pair, CenterConvention::forward);
  REQUIRE(fwd.size() == 1);
  CHECK(fwd[0] == doctest::Approx(0.6).epsilon(1e-15));
}
