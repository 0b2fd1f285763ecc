#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "nlfv/grid.hpp"
#include "nlfv/model.hpp"

namespace nlfv::test {

inline SystemSpec single_lane(double v_scale, double eta) {
  SystemSpec spec;
  spec.lanes.push_back(make_lwr_lane(v_scale));
  spec.kernel.eta = eta;
  spec.source_lipschitz = default_source_lipschitz(spec.lanes);
  return spec;
}

/// Random lanes vanishing in the first `pad_left` and last `pad_right` cells.
inline SystemState random_state(std::size_t lanes, std::size_t n, std::size_t pad_left,
                                std::size_t pad_right, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SystemState s;
  s.u.assign(lanes, std::vector<double>(n, 0.0));
  for (auto& lane : s.u) {
    for (std::size_t i = pad_left; i + pad_right < n; ++i) lane[i] = unit(rng);
  }
  return s;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace nlfv::test
