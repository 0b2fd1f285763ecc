#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nlfv/model.hpp"

namespace nlfv {

/// Cell integrals zeta_p of the normalized kernel over [p dx, (p+1) dx), p = 0..n_eta-1.
struct KernelWeights {
  std::vector<double> zeta;
  double eta = 0.0;
  std::size_t n_eta = 0;
};

/// Which pair of interface averages forms the cell-centre average c_i.
enum class CenterConvention {
  symmetric,    ///< c_i = (c_{i-1/2} + c_{i+1/2}) / 2
  forward,      ///< c_i = (c_{i+1/2} + c_{i+3/2}) / 2
};

KernelWeights discretize(const KernelSpec& kernel, double dx, std::size_t n_eta);

/// Interface averages c_{j-1/2} = sum_p zeta_p u_{j+p} for a lane stored as `n` interior
/// cells followed by `ghost` zero cells (ghost >= n_eta).
///
/// Entry j of the result is the interface to the left of cell j; there are
/// n + 1 + (ghost - n_eta) entries. Accumulation runs p = 0..n_eta-1 for every interface.
std::vector<double> convolve_interfaces(std::span<const double> u_with_ghost, std::size_t ghost,
                                        const KernelWeights& weights, bool compensated = false);

/// Same as above, writing into `out` (resized as needed). Skips windows that lie entirely
/// in the zero region of `u_with_ghost`.
void convolve_interfaces_into(std::span<const double> u_with_ghost, std::size_t ghost,
                              const KernelWeights& weights, bool compensated,
                              std::vector<double>& out);

/// Cell averages from interface averages. Symmetric yields c_half.size() - 1 values,
/// forward yields c_half.size() - 2.
std::vector<double> center_values(std::span<const double> c_half,
                                  CenterConvention convention = CenterConvention::symmetric);

}  // namespace nlfv
