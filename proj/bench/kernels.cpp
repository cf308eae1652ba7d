#include <benchmark/benchmark.h>

#include <cmath>

#include "qhj/ensemble.hpp"
#include "qhj/evolution.hpp"
#include "qhj/hamilton_jacobi.hpp"
#include "qhj/madelung.hpp"
#include "qhj/potential.hpp"

using namespace qhj;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::Parallel : Execution::Serial; }

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) ? "openmp x" + std::to_string(max_threads()) : "serial");
}

void BM_Ensemble(benchmark::State& state) {
  const PhysicalConstants c;
  const Grid1D g = build_grid(-12.0, 12.0, 2401);
  const ClassicalPotential ho(potential::Harmonic{1.0}, g, c);
  EnsembleSpec spec;
  spec.values = {0.5, 1.5, 2.5, 3.5};
  spec.probabilities = {0.1, 0.2, 0.3, 0.4};
  spec.n_samples = 20000;
  spec.seed = 1;
  const auto launch = launch_from(ho, 0.0, c);
  EnsembleRun run;
  run.t_final = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_classical_ensemble(spec, ho, launch, run, c, mode(state)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(spec.n_samples));
  label(state);
}

void BM_Characteristics(benchmark::State& state) {
  const PhysicalConstants c;
  const Grid1D g = build_grid(-5.0, 5.0, 4001);
  const ClassicalPotential ho(potential::Harmonic{1.0}, g, c);
  const RealField s0(g.size(), 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(principal_function_from_characteristics(ho, s0, 1e-3, 500, c, 50, mode(state)));
  }
  label(state);
}

void BM_MadelungResiduals(benchmark::State& state) {
  const PhysicalConstants c;
  const Grid1D g = build_grid(-10.0, 10.0, 20001);
  const RealField v = eval_potential(potential::Harmonic{1.0}, g, c);
  const EvolutionResult series = evolve(gaussian_packet(g, 1.0, 0.5, 0.7, c), v, 1e-3, 20, c);
  for (auto _ : state) {
    benchmark::DoNotOptimize(madelung_residuals(series.slices, v, c, mode(state)));
  }
  label(state);
}

}  // namespace

BENCHMARK(BM_Ensemble)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Characteristics)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MadelungResiduals)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
