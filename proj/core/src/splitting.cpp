#include "nlfv/splitting.hpp"

namespace nlfv {

namespace {

StepOptions convective_options(StepOptions options) {
  options.include_convection = true;
  options.include_source = false;
  return options;
}

StepOptions source_options(StepOptions options) {
  options.include_convection = false;
  options.include_source = true;
  return options;
}

}  // namespace

SystemState convective_substep(const SystemState& state, const KernelWeights& weights,
                               const SystemSpec& spec, const GridSpec& grid, double dt,
                               StepOptions options) {
  Stepper stepper(spec, weights, grid, convective_options(options));
  SystemState next = state;
  stepper.advance(next, dt);
  return next;
}

SystemState source_substep(const SystemState& state, const KernelWeights& weights,
                           const SystemSpec& spec, const GridSpec& grid, double dt,
                           StepOptions options) {
  Stepper stepper(spec, weights, grid, source_options(options));
  SystemState next = state;
  stepper.advance(next, dt);
  return next;
}

SystemState split_step(const SystemState& state, const KernelWeights& weights,
                       const SystemSpec& spec, const GridSpec& grid, double dt,
                       StepOptions options) {
  SplitStepper stepper(spec, weights, grid, options);
  SystemState next = state;
  stepper.advance(next, dt);
  return next;
}

SplitStepper::SplitStepper(const SystemSpec& spec, const KernelWeights& weights,
                           const GridSpec& grid, StepOptions options)
    : convective_(spec, weights, grid, convective_options(options)),
      source_(spec, weights, grid, source_options(options)) {}

void SplitStepper::advance(SystemState& state, double dt) {
  const double t0 = state.t;
  convective_.advance(state, dt);
  state.t = t0;
  source_.advance(state, dt);
}

}  // namespace nlfv
