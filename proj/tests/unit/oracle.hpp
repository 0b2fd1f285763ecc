#pragma once

#include <vector>

#include "nlfv/grid.hpp"
#include "nlfv/model.hpp"

namespace nlfv::test {

/// One marching step written out term by term from the scheme's definition, with zero
/// densities outside the grid and symmetric centre averages. Lanes share `zeta`.
inline SystemState marching_oracle(const SystemSpec& spec, const std::vector<double>& zeta,
                                   const GridSpec& grid, const SystemState& s) {
  const int n = static_cast<int>(grid.n_cells);
  const int lanes = static_cast<int>(spec.lanes.size());
  const double lambda = grid.lambda;
  const double dt = grid.dt;
  const auto u = [&](int k, int i) { return (i >= 0 && i < n) ? s.u[k][i] : 0.0; };
  const auto c_half = [&](int k, int j) {
    double c = 0.0;
    for (int p = 0; p < static_cast<int>(zeta.size()); ++p) c += zeta[p] * u(k, j + p);
    return c;
  };
  const auto c_mid = [&](int k, int i) { return 0.5 * (c_half(k, i) + c_half(k, i + 1)); };
  const auto flux = [&](int k, int j) {
    const LaneModel& lane = spec.lanes[k];
    const double ul = u(k, j - 1), ur = u(k, j);
    const double nu = lane.velocity(grid.interface(j), c_half(k, j));
    return 0.5 * nu * (ul * lane.g(ul) + ur * lane.g(ur)) - grid.beta / (2.0 * lambda) * (ur - ul);
  };
  // Exchange from lane m-1 into lane m (0-based), zero at the outer edges.
  const auto exchange = [&](int m, int i) {
    if (m <= 0 || m >= lanes) return 0.0;
    const LaneModel& lo = spec.lanes[m - 1];
    const LaneModel& up = spec.lanes[m];
    const double x = grid.center(i);
    const double a = u(m - 1, i), b = u(m, i);
    const double dv = up.g(b) * up.velocity(x, c_mid(m, i)) - lo.g(a) * lo.velocity(x, c_mid(m - 1, i));
    const double pos = dv > 0 ? dv : 0.0;
    const double neg = dv < 0 ? -dv : 0.0;
    return pos * a - neg * b;
  };
  SystemState next;
  next.t = s.t + dt;
  next.u.assign(lanes, std::vector<double>(n, 0.0));
  for (int k = 0; k < lanes; ++k) {
    for (int i = 0; i < n; ++i) {
      const double r = exchange(k, i) - exchange(k + 1, i);
      next.u[k][i] = u(k, i) - lambda * (flux(k, i + 1) - flux(k, i)) + dt * r;
    }
  }
  return next;
}

}  // namespace nlfv::test
