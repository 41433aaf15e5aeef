#include <benchmark/benchmark.h>

#include <vector>

#include "ebm/inversion.hpp"
#include "ebm/numerics.hpp"
#include "ebm/relaxation.hpp"
#include "ebm/sampling.hpp"
#include "ebm/spectrum.hpp"

namespace {

using namespace ebm;

SampledSystem fixture(int max_n) {
    Rng rng(1234);
    ModelSampleOptions opt;
    opt.max_n = max_n;
    opt.require_prony_ordering = true;
    opt.min_beta_gap_ratio = 1.2;
    SampledSystem sys = sample_system(rng, opt);
    while (sys.prony.n != max_n) sys = sample_system(rng, opt);
    return sys;
}

void BM_JacobiEigh(benchmark::State& state) {
    int order = static_cast<int>(state.range(0));
    Rng rng(5);
    DenseMatrix m(order);
    for (int i = 0; i < order; ++i)
        for (int j = i; j < order; ++j) m(i, j) = m(j, i) = rng.uniform(-2.0, 2.0);
    for (auto _ : state) benchmark::DoNotOptimize(jacobi_eigh(m));
}
BENCHMARK(BM_JacobiEigh)->Arg(4)->Arg(8)->Arg(16);

void BM_Expm(benchmark::State& state) {
    SampledSystem sys = fixture(4);
    DenseMatrix l1s = assemble(sys.model, ModeKind::shear).matrix;
    for (auto _ : state) benchmark::DoNotOptimize(expm(l1s, 1.0));
}
BENCHMARK(BM_Expm);

void BM_PolyRoots(benchmark::State& state) {
    SampledSystem sys = fixture(3);
    RadialMode mode = solve_mode(sys.model.elements[0].lambda, sys.model.elements[0].mu, 1.0, 1);
    Poly p = char_poly_ell(sys.prony, mode.R * mode.R / (mode.r * mode.r));
    for (auto _ : state) benchmark::DoNotOptimize(poly_roots(p));
}
BENCHMARK(BM_PolyRoots);

void BM_ComputeSpectrum(benchmark::State& state) {
    SampledSystem sys = fixture(4);
    for (auto _ : state) benchmark::DoNotOptimize(compute_spectrum(sys.model));
}
BENCHMARK(BM_ComputeSpectrum);

void BM_SolveMode(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(solve_mode(2.0, 1.0, 1.0, 7));
}
BENCHMARK(BM_SolveMode);

void BM_ClusterRoots(benchmark::State& state) {
    SampledSystem sys = fixture(3);
    RadialMode mode = solve_mode(sys.model.elements[0].lambda, sys.model.elements[0].mu, 1.0, 1);
    for (auto _ : state) benchmark::DoNotOptimize(cluster_roots(sys.prony, mode));
}
BENCHMARK(BM_ClusterRoots);

void BM_RecoverProny(benchmark::State& state) {
    SampledSystem sys = fixture(3);
    double lam = sys.model.elements[0].lambda, mu = sys.model.elements[0].mu;
    ClusterData d1 = cluster_data_from(cluster_roots(sys.prony, solve_mode(lam, mu, 1.0, 1)));
    ClusterData d2 = cluster_data_from(cluster_roots(sys.prony, solve_mode(lam, mu, 1.0, 2)));
    for (auto _ : state) benchmark::DoNotOptimize(recover_prony(d1, d2));
}
BENCHMARK(BM_RecoverProny);

void BM_SelfConsistentInvert(benchmark::State& state) {
    SampledSystem sys = fixture(2);
    double lam = sys.model.elements[0].lambda, mu = sys.model.elements[0].mu;
    ClusterData d1 = cluster_data_from(cluster_roots(sys.prony, solve_mode(lam, mu, 1.0, 1)));
    ClusterData d2 = cluster_data_from(cluster_roots(sys.prony, solve_mode(lam, mu, 1.0, 2)));
    for (auto _ : state)
        benchmark::DoNotOptimize(self_consistent_invert(d1.roots, d2.roots, 1, 2, 1.0));
}
BENCHMARK(BM_SelfConsistentInvert);

void BM_StressHistory(benchmark::State& state) {
    SampledSystem sys = fixture(3);
    int steps = static_cast<int>(state.range(0));
    std::vector<double> times(static_cast<size_t>(steps) + 1);
    std::vector<SymTensor3> strain(times.size());
    for (size_t k = 0; k < times.size(); ++k) {
        times[k] = 2.0 * static_cast<double>(k) / steps;
        strain[k] = SymTensor3::diag(1.0, -0.5, -0.5) * times[k];
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(stress_from_strain_history(sys.spectrum, times, strain));
}
BENCHMARK(BM_StressHistory)->Arg(1000)->Arg(10000);

} // namespace

BENCHMARK_MAIN();
