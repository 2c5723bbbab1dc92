#include "inls/diagnostics.hpp"
#include "inls/geometry.hpp"
#include "inls/initial_data.hpp"
#include "inls/scaling.hpp"
#include "inls/solver.hpp"
#include "inls/spectral.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace inls;

namespace {

SolverConfig bench_config(int n, const char* p) {
    SolverConfig c;
    c.grid = Grid(n, 64.0);
    c.dt = 1e-2;
    c.t_end = 0.1;
    c.snapshot_stride = 1000;
    c.p = Power::parse(p);
    c.weight = catalog_weight("gaussian");
    c.escape_policy = EscapePolicy::record;
    return c;
}

void BM_FftRoundTrip(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Grid g(n, 64.0);
    const Field f = make_initial_data({"gaussian", {}}, g);
    std::vector<cplx> spec(g.size()), back(g.size());
    for (auto _ : state) {
        fft_forward(n, f.values(), spec);
        fft_inverse(n, spec, back);
        benchmark::DoNotOptimize(back.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_FftRoundTrip)->Arg(128)->Arg(256)->Arg(512);

void BM_NonlinearSubstep(benchmark::State& state) {
    static const char* powers[] = {"1", "2", "3", "3/2"};
    const SolverConfig cfg = bench_config(256, powers[state.range(0)]);
    const auto pre = precompute(cfg);
    const Field f = make_initial_data({"gaussian", {}}, cfg.grid);
    std::vector<cplx> u(f.values().begin(), f.values().end());
    for (auto _ : state) {
        benchmark::DoNotOptimize(nonlinear_substep_inplace(u, pre->a, pre->p_value, 1e-3));
    }
    state.SetLabel(std::string("p = ") + powers[state.range(0)]);
    state.SetItemsProcessed(state.iterations() * static_cast<long>(u.size()));
}
BENCHMARK(BM_NonlinearSubstep)->DenseRange(0, 3);

void BM_RunTenSteps(benchmark::State& state) {
    const SolverConfig cfg = bench_config(static_cast<int>(state.range(0)), "2");
    const Field u0 = make_initial_data({"gaussian", {}}, cfg.grid);
    for (auto _ : state) {
        auto res = run(cfg, u0);
        benchmark::DoNotOptimize(res.monitors.max_sup);
    }
}
BENCHMARK(BM_RunTenSteps)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_ZNorm(benchmark::State& state) {
    const Grid g(static_cast<int>(state.range(0)), 32.0);
    const Field f = make_initial_data({"gaussian", {{"width", 2.0}}}, g);
    for (auto _ : state) benchmark::DoNotOptimize(z_norm(f, 4.0));
}
BENCHMARK(BM_ZNorm)->Arg(128)->Arg(256);

void BM_ExponentIdentities(benchmark::State& state) {
    long k = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(verify_identities(Power(Rational(k, 20))).all_pass());
        k = k % 200 + 1;
    }
}
BENCHMARK(BM_ExponentIdentities);

void BM_TriangularCutoffEval(benchmark::State& state) {
    const TriangularCutoff c(30, {16.0 * std::pow(2.0, 30), 1.0 / 30}, 0.0, 3.0);
    double u = 0.2;
    for (auto _ : state) {
        benchmark::DoNotOptimize(c.eval_scaled({u, 0.1}));
        u = u > 1.7 ? 0.2 : u + 1e-3;
    }
}
BENCHMARK(BM_TriangularCutoffEval);

void BM_PointwiseCheck(benchmark::State& state) {
    const auto samples = random_pointwise_samples(10000, 3, 1);
    for (auto _ : state) benchmark::DoNotOptimize(pointwise_inequality_check(samples, 3, 1.5));
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_PointwiseCheck);

}  // namespace

BENCHMARK_MAIN();
