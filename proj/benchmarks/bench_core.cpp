#include <benchmark/benchmark.h>

#include "dqap/adiabatic.hpp"
#include "dqap/optimizer.hpp"

using namespace dqap;

static void BM_BondLayer(benchmark::State &state) {
    const auto spec = LatticeSpec::half_filled(static_cast<int>(state.range(0)), -1);
    SlaterState s = initial_state(spec);
    for (auto _ : state) {
        apply_bond_layer_inplace(s.orbitals, Bond::V2, 0.3, TimeMode::Real, spec.gamma, spec.t);
        benchmark::DoNotOptimize(s.orbitals.data());
    }
}
BENCHMARK(BM_BondLayer)->Arg(40)->Arg(160)->Arg(640);

static void BM_Workspace(benchmark::State &state) {
    const auto spec = LatticeSpec::half_filled(static_cast<int>(state.range(0)), -1);
    const auto backend = state.range(1) ? MetricBackend::Translation : MetricBackend::General;
    const CMatrix h = build_hamiltonian(spec);
    const auto p = linear_schedule_params(static_cast<int>(state.range(0)) / 8, 0.3);
    for (auto _ : state) benchmark::DoNotOptimize(assemble_dqap_workspace(spec, p, h, backend));
}
BENCHMARK(BM_Workspace)->Args({40, 0})->Args({40, 1})->Args({80, 0})->Args({80, 1})->Unit(benchmark::kMillisecond);

static void BM_MagnusStep(benchmark::State &state) {
    const auto spec = LatticeSpec::half_filled(static_cast<int>(state.range(0)), 1);
    const EvolutionPlan plan{10.0, 1000, static_cast<int>(state.range(1))};
    const SlaterState psi = initial_state(spec);
    for (auto _ : state) benchmark::DoNotOptimize(magnus_step(psi, 2.0, 2.01, plan, spec));
}
BENCHMARK(BM_MagnusStep)->Args({20, 1})->Args({20, 2})->Args({60, 1})->Args({60, 2});

static void BM_BlochEpsilon(benchmark::State &state) {
    const auto spec = LatticeSpec::closed_shell(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(linear_schedule_error(spec, EvolutionPlan::with_max_step(100.0, 0.01)));
}
BENCHMARK(BM_BlochEpsilon)->Arg(20)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
