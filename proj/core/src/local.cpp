#include "nlfv/local.hpp"

namespace nlfv {

RunSettings make_local(RunSettings settings) {
  settings.spec.kernel.eta = settings.grid.dx;
  settings.n_eta = 1;
  return settings;
}

Trajectory local_run(const RunSettings& settings) { return run(make_local(settings)); }

}  // namespace nlfv
