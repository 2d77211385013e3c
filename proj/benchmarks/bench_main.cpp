#include <benchmark/benchmark.h>

#include "qsllab/dynamics.hpp"
#include "qsllab/speed_limit.hpp"
#include "qsllab/sweep.hpp"

using namespace qsllab;

static void BM_EvolveClosedForm(benchmark::State& state) {
  const ModelParams p = ModelParams::from_delta(0.9);
  const DensityMatrix rho0 = DensityMatrix::mixed(0.6);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve_closed_form(rho0, p, t));
    t += 1e-3;
  }
}
BENCHMARK(BM_EvolveClosedForm);

static void BM_EvolvePropagator(benchmark::State& state) {
  const ModelParams p = ModelParams::from_delta(0.9);
  const DensityMatrix rho0 = DensityMatrix::mixed(0.6);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve_propagator(rho0, p, t));
    t += 1e-3;
  }
}
BENCHMARK(BM_EvolvePropagator);

static void BM_IntegrateOde(benchmark::State& state) {
  const ModelParams p = ModelParams::from_delta(2.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        integrate_ode(DensityMatrix::excited(), p, 1.0, static_cast<int>(state.range(0))));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IntegrateOde)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_QslPure(benchmark::State& state) {
  const ModelParams p = ModelParams::from_delta(0.9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qsl_pure(DensityMatrix::excited(), p, 1.0, 201));
  }
}
BENCHMARK(BM_QslPure)->Unit(benchmark::kMicrosecond);

static void BM_QslMixed(benchmark::State& state) {
  const ModelParams p = ModelParams::from_delta(0.9);
  const DensityMatrix start = evolve_closed_form(DensityMatrix::mixed(0.6), p, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qsl_mixed(start, p, 2.0, 1.0, 201));
  }
}
BENCHMARK(BM_QslMixed)->Unit(benchmark::kMicrosecond);

static void BM_Fig1Sweep(benchmark::State& state) {
  SweepSpec spec;
  spec.delta_steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_fig1(spec, 1));
}
BENCHMARK(BM_Fig1Sweep)->Arg(61)->Arg(601)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
