// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include "preq/invariants.hpp"

namespace {

using namespace preq;

Exec exec_of(const benchmark::State& state) { return state.range(1) ? Exec::Parallel : Exec::Serial; }

void BM_Toeplitz(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const QuantumSpace space = build_space(k);
  const ScalarField f = make_preset("shear")->sample(space.grid, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(toeplitz(space, f, exec_of(state)).matrix.data());
}
BENCHMARK(BM_Toeplitz)->ArgsProduct({{16, 64, 128}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_KostantSouriau(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const QuantumSpace space = build_space(k);
  const SymbolField f = symbol(space.grid, *make_preset("twist"), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(kostant_souriau(space, f, exec_of(state)).matrix.data());
}
BENCHMARK(BM_KostantSouriau)->ArgsProduct({{16, 64}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_Flow(benchmark::State& state) {
  const SphereGrid grid = make_grid(static_cast<int>(state.range(0)), 2 * static_cast<int>(state.range(0)));
  const auto path = make_preset("mixed");
  FlowOptions opt;
  opt.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(integrate_flow(*path, grid.nodes, {1.0}, opt).size());
}
BENCHMARK(BM_Flow)->ArgsProduct({{16, 32}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_Curvature(benchmark::State& state) {
  const SphereGrid grid = make_grid(static_cast<int>(state.range(0)), 2 * static_cast<int>(state.range(0)));
  const auto j = ComplexStructureField::deformed(0.2);
  for (auto _ : state) benchmark::DoNotOptimize(scalar_curvature(j, grid, exec_of(state)).values.values.data());
}
BENCHMARK(BM_Curvature)->ArgsProduct({{16, 32}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
