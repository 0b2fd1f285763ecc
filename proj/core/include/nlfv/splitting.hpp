#pragma once

#include "nlfv/grid.hpp"
#include "nlfv/kernel.hpp"
#include "nlfv/model.hpp"
#include "nlfv/scheme.hpp"

namespace nlfv {

/// Marching step with the lane-exchange source dropped.
SystemState convective_substep(const SystemState& state, const KernelWeights& weights,
                               const SystemSpec& spec, const GridSpec& grid, double dt,
                               StepOptions options = {});

/// Forward Euler on du/dt = R(u), averages taken from `state`.
SystemState source_substep(const SystemState& state, const KernelWeights& weights,
                           const SystemSpec& spec, const GridSpec& grid, double dt,
                           StepOptions options = {});

/// Lie splitting: convection over dt, then the source over dt.
SystemState split_step(const SystemState& state, const KernelWeights& weights,
                       const SystemSpec& spec, const GridSpec& grid, double dt,
                       StepOptions options = {});

/// Buffered version of split_step for time loops.
class SplitStepper {
 public:
  SplitStepper(const SystemSpec& spec, const KernelWeights& weights, const GridSpec& grid,
               StepOptions options = {});

  void advance(SystemState& state, double dt);

  /// Terms of the most recent convective substep.
  [[nodiscard]] const StepTerms& terms() const noexcept { return convective_.terms(); }

 private:
  Stepper convective_;
  Stepper source_;
};

}  // namespace nlfv
