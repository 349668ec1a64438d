#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "squeezent/closedform.hpp"
#include "squeezent/dme.hpp"
#include "squeezent/measures.hpp"
#include "squeezent/numkit.hpp"
#include "squeezent/oracle.hpp"

using namespace squeezent;

namespace {

constexpr double kPi = std::numbers::pi;

SystemParams bench_params() {
    SystemParams p;
    p.g = 1.0 / std::sqrt(2.0);
    p.lambda = 1.0 / std::sqrt(72.0);
    p.Omega = 3.0 * kPi;
    p.r = 1.1;
    p.phi_xi = 0.9;
    return p;
}

ComplexMatrix random_hermitian(std::size_t n) {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> dist(0.0, 1.0);
    ComplexMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const cplx v(dist(rng), dist(rng));
            h(i, j) = v;
            h(j, i) = std::conj(v);
        }
    for (std::size_t i = 0; i < n; ++i) h(i, i) = h(i, i).real();
    return h;
}

}  // namespace

static void BM_HermitianEig(benchmark::State& state) {
    const auto m = random_hermitian(std::size_t(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(numkit::hermitian_eig(m));
}
BENCHMARK(BM_HermitianEig)->Arg(64)->Arg(256);

static void BM_OrthoCoefficients(benchmark::State& state) {
    const auto p = bench_params();
    for (auto _ : state) benchmark::DoNotOptimize(closedform::ortho_coefficients(p));
}
BENCHMARK(BM_OrthoCoefficients);

static void BM_MeasureAll(benchmark::State& state) {
    const auto s = closedform::evolved_state(bench_params());
    for (auto _ : state) benchmark::DoNotOptimize(measures::measure_all(s));
}
BENCHMARK(BM_MeasureAll);

static void BM_CoherentSqueezed(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(oracle::coherent_squeezed_fixed(0.5, 2.0, 0.3, 486));
}
BENCHMARK(BM_CoherentSqueezed);

static void BM_Propagate(benchmark::State& state) {
    auto p = bench_params();
    const auto v0 = oracle::coherent_squeezed(p.beta, p.r, p.phi_xi);
    for (auto _ : state) benchmark::DoNotOptimize(oracle::propagate(0, 1, v0, p));
}
BENCHMARK(BM_Propagate);

static void BM_DmeRhs(benchmark::State& state) {
    const std::size_t n_f = std::size_t(state.range(0));
    dme::DissipationParams d;
    d.kappa = 0.2;
    d.gamma = 1e-2;
    d.qubit_relax = 1e-3;
    d.qubit_dephasing = 1e-2;
    d.n_v = 50.0;
    const auto model = dme::build_model(bench_params(), d, n_f);
    const auto init = dme::initial_state(bench_params(), n_f);
    ComplexMatrix out(model.dim, model.dim);
    for (auto _ : state) {
        dme::rhs_apply(model, init.rho.mat, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_DmeRhs)->Arg(48)->Arg(96);

BENCHMARK_MAIN();
