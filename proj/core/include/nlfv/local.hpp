#pragma once

#include "nlfv/scheme.hpp"

namespace nlfv {

/// Rewrites a run so the kernel covers exactly one cell (eta = dx, zeta_0 = 1).
///
/// The nonlocal averages then reduce to c_{i+1/2} = u_{i+1}, which turns the scheme into a
/// Lax-Friedrichs-type discretization of the local multilane balance law.
RunSettings make_local(RunSettings settings);

/// Runs the local counterpart of `settings` through the nonlocal code path.
Trajectory local_run(const RunSettings& settings);

}  // namespace nlfv
