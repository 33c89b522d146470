#include <benchmark/benchmark.h>

#include "phasekit/couplings.hpp"
#include "phasekit/homodyne.hpp"
#include "phasekit/phase_observables.hpp"
#include "phasekit/phase_space.hpp"
#include "phasekit/states.hpp"

using namespace phasekit;

static void BM_radial_grid(benchmark::State& state) {
    const int q = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(QuadratureGrid::radial(q));
}
BENCHMARK(BM_radial_grid)->Arg(64)->Arg(96);

static void BM_phase_distribution(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const DensityMatrix rho = DensityMatrix::pure(coherent_state(Complex(1.0, 0.0), d));
    const PhaseMatrix can = PhaseMatrix::canonical(d);
    const AnglePartition part = AnglePartition::uniform(360);
    for (auto _ : state) benchmark::DoNotOptimize(phase_distribution(rho, can, part));
}
BENCHMARK(BM_phase_distribution)->Arg(16)->Arg(32);

static void BM_w_matrix(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const QuadratureGrid grid = QuadratureGrid::radial(2 * d);
    for (auto _ : state) benchmark::DoNotOptimize(w_matrix(d, grid));
}
BENCHMARK(BM_w_matrix)->Arg(16)->Arg(32);

static void BM_psc_effect(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const QuadratureGrid grid = QuadratureGrid::radial(64);
    const RadialProfile g1 = profile_g(1, grid, d);
    const RadialBinSet full = all_nodes(g1);
    for (auto _ : state) benchmark::DoNotOptimize(psc_effect(g1, full, 0.3, 2.4));
}
BENCHMARK(BM_psc_effect)->Arg(16)->Arg(32);

static void BM_double_homodyne(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    const QuadratureGrid grid = QuadratureGrid::radial(2 * d);
    const AnglePartition part = AnglePartition::uniform(32);
    const DensityMatrix rho = DensityMatrix::pure(coherent_state(Complex(1.0, 0.0), d));
    const DensityMatrix sigma = DensityMatrix::pure(number_state(0, d));
    for (auto _ : state)
        benchmark::DoNotOptimize(double_homodyne_dist(rho, sigma, grid, part));
}
BENCHMARK(BM_double_homodyne)->Arg(16)->Arg(24);

static void BM_modified_scheme(benchmark::State& state) {
    const int d = 24;
    const QuadratureGrid grid = QuadratureGrid::radial(64);
    const AnglePartition part = AnglePartition::uniform(64);
    const DensityMatrix rho = DensityMatrix::pure(coherent_state(Complex(1.0, 0.0), d));
    const int kmax = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(modified_scheme_phase_dist(rho, grid, part, kmax));
}
BENCHMARK(BM_modified_scheme)->Arg(4096)->Arg(65536);

BENCHMARK_MAIN();
