#include <benchmark/benchmark.h>

#include "cslfa/kgrid.hpp"
#include "cslfa/krylov.hpp"
#include "cslfa/linalg.hpp"
#include "cslfa/multigrid.hpp"

using namespace cslfa;

static void BM_AssembleEigenmatrix(benchmark::State& state) {
    KGridPlan p;
    p.dimension = static_cast<int>(state.range(0));
    p.levels = static_cast<int>(state.range(1));
    p.intervals = 64;
    p.sigma = -1000.0;
    p.beta = 0.4;
    const Frequency f = p.dimension == 1 ? Frequency::of(0.37) : Frequency::of(0.37, -0.81);
    for (auto _ : state) benchmark::DoNotOptimize(assemble_eigenmatrix(p, f));
}
BENCHMARK(BM_AssembleEigenmatrix)->Args({1, 2})->Args({1, 4})->Args({2, 2})->Args({2, 4});

static void BM_SpectralRadius(benchmark::State& state) {
    KGridPlan p;
    p.dimension = 2;
    p.levels = static_cast<int>(state.range(0));
    p.intervals = 64;
    p.sigma = -1000.0;
    p.beta = 0.4;
    const CMatrix m = *assemble_eigenmatrix(p, Frequency::of(0.37, -0.81));
    for (auto _ : state) benchmark::DoNotOptimize(spectral_radius(m));
}
BENCHMARK(BM_SpectralRadius)->Arg(2)->Arg(3)->Arg(4);

static void BM_VCycle(benchmark::State& state) {
    const GridShape s{2, static_cast<int>(state.range(0))};
    MultigridCycle mg(s, Complex(-1000.0, -400.0), CycleSpec{0, 1, 0, {}});
    CVector u = CVector::Zero(s.size());
    const CVector f = CVector::Ones(s.size());
    for (auto _ : state) {
        mg.apply(u, f);
        benchmark::DoNotOptimize(u.data());
    }
    state.SetItemsProcessed(state.iterations() * s.size());
}
BENCHMARK(BM_VCycle)->Arg(32)->Arg(64)->Arg(256);

static void BM_GmresSolve(benchmark::State& state) {
    const HelmholtzProblem prob{2, 32, -1000.0};
    const CslSpec pc{static_cast<int>(state.range(0)), CycleSpec{2, 1, 0, {}}, 0.4};
    for (auto _ : state) benchmark::DoNotOptimize(solve_helmholtz(prob, KrylovSpec{}, pc).iterations);
}
BENCHMARK(BM_GmresSolve)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
