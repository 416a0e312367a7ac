#include <benchmark/benchmark.h>

#include <cmath>

#include "chemolab/diagnostics.hpp"
#include "chemolab/grid.hpp"
#include "chemolab/scenarios.hpp"
#include "chemolab/stepper.hpp"

using namespace chemolab;

namespace {

Field smooth_field(const RadialGrid& g) {
  Field f(g.cells());
  for (std::size_t i = 0; i < g.cells(); ++i) f[i] = 1.0 + 0.5 * std::cos(3.0 * g.centers()[i]);
  return f;
}

void BM_ApplyLaplacian(benchmark::State& st) {
  const RadialGrid g(3, 1.0, static_cast<std::size_t>(st.range(0)));
  const Field f = smooth_field(g);
  for (auto _ : st) benchmark::DoNotOptimize(apply_laplacian(g, f));
  st.SetComplexityN(st.range(0));
}

void BM_HelmholtzSolve(benchmark::State& st) {
  const RadialGrid g(3, 1.0, static_cast<std::size_t>(st.range(0)));
  const Field f = smooth_field(g);
  for (auto _ : st) benchmark::DoNotOptimize(helmholtz_solve(g, f));
  st.SetComplexityN(st.range(0));
}

void BM_Step(benchmark::State& st) {
  const RadialGrid g(3, 1.0, static_cast<std::size_t>(st.range(0)));
  const auto spec = MotilitySpec::exponential();
  const State s = make_initial(g, ScenarioSpec::negative_energy_bump(10.0, 0.125));
  for (auto _ : st) benchmark::DoNotOptimize(step(g, spec, s, 1e-4));
  st.SetComplexityN(st.range(0));
}

void BM_Record(benchmark::State& st) {
  const RadialGrid g(3, 1.0, static_cast<std::size_t>(st.range(0)));
  const auto spec = MotilitySpec::exponential();
  const State s = make_initial(g, ScenarioSpec::negative_energy_bump(10.0, 0.125));
  const Field w0 = aux_w(g, s);
  for (auto _ : st) benchmark::DoNotOptimize(make_record(g, spec, s, w0, 1e-4, 0.0));
}

}  // namespace

BENCHMARK(BM_ApplyLaplacian)->RangeMultiplier(4)->Range(64, 4096)->Complexity(benchmark::oN);
BENCHMARK(BM_HelmholtzSolve)->RangeMultiplier(4)->Range(64, 4096)->Complexity(benchmark::oN);
BENCHMARK(BM_Step)->RangeMultiplier(4)->Range(64, 4096)->Complexity(benchmark::oN);
BENCHMARK(BM_Record)->Arg(128)->Arg(1024);
BENCHMARK_MAIN();
