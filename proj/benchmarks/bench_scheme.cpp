#include <benchmark/benchmark.h>

#include <vector>

#include "nlfv/experiments.hpp"
#include "nlfv/kernel.hpp"
#include "nlfv/scheme.hpp"

namespace {

void BM_Convolve(benchmark::State& state) {
  const auto n_eta = static_cast<std::size_t>(state.range(0));
  const std::size_t n = 1440;
  const double dx = 0.00625;
  nlfv::KernelSpec kernel;
  kernel.eta = static_cast<double>(n_eta) * dx;
  const auto w = nlfv::discretize(kernel, dx, n_eta);
  std::vector<double> u(n + n_eta + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) u[i] = 0.5 + 0.4 * ((i * 7919) % 101) / 101.0;
  std::vector<double> out;
  const bool kahan = state.range(1) != 0;
  for (auto _ : state) {
    nlfv::convolve_interfaces_into(u, n_eta + 1, w, kahan, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n * n_eta));
}
BENCHMARK(BM_Convolve)->Args({10, 0})->Args({100, 0})->Args({100, 1})->Args({80, 0});

void BM_Step(benchmark::State& state) {
  nlfv::ScenarioOptions options;
  options.dx = 0.00625;
  options.eta = static_cast<double>(state.range(0)) * options.dx;
  const nlfv::RunSettings settings = nlfv::two_lane_settings(options);
  const auto w = nlfv::discretize(settings.spec.kernel, settings.grid.dx, settings.n_eta);
  nlfv::Stepper stepper(settings.spec, w, settings.grid, settings.options);
  const nlfv::SystemState initial = nlfv::project_initial_data(settings.initial, settings.grid);
  for (auto _ : state) {
    nlfv::SystemState s = initial;
    stepper.advance(s, settings.grid.dt);
    benchmark::DoNotOptimize(s.u[0].data());
  }
}
BENCHMARK(BM_Step)->Arg(10)->Arg(100);

}  // namespace
BENCHMARK_MAIN();
