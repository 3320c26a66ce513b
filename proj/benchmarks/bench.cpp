#include <cornermap/curve_tracer.hpp>
#include <cornermap/harmonic_map.hpp>
#include <cornermap/validation.hpp>
#include <cornermap/winslow.hpp>

#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <vector>

using namespace cornermap;

namespace {

HarmonicCornerMap bench_map(double beta, int n_terms) {
    Rng rng(7);
    return make_map(CornerConfig{beta, 1.3, 0.8, 1.0}, draw_generic_coeffs(rng, n_terms));
}

void BM_evaluate(benchmark::State& state) {
    const auto m = bench_map(1.5, static_cast<int>(state.range(0)));
    double r = 1e-3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate(m, r, 0.2));
        r = r < 0.9 ? r * 1.0001 : 1e-3;
    }
}
BENCHMARK(BM_evaluate)->Arg(2)->Arg(8)->Arg(32);

void BM_jacobian(benchmark::State& state) {
    const auto m = bench_map(1.5, 8);
    for (auto _ : state) benchmark::DoNotOptimize(jacobian(m, 1e-3, 0.2));
}
BENCHMARK(BM_jacobian);

void BM_trace_inverse(benchmark::State& state) {
    const auto m = bench_map(1.5, 8);
    const auto kit = make_kit(m);
    const auto radii = log_spaced_radii(1e-6, 1e-2, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        const auto curve = trace_inverse_ray(m, kit.theta_star + 0.4, radii);
        benchmark::DoNotOptimize(curve.ordinate.back());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(radii.size()));
}
BENCHMARK(BM_trace_inverse)->Arg(12)->Arg(48);

void BM_fit_from_arc(benchmark::State& state) {
    const int n_terms = static_cast<int>(state.range(0));
    const CornerConfig cfg{0.75, 1.3, 0.8, 1.0};
    const auto m = bench_map(0.75, n_terms);
    const double pi = std::acos(-1.0);
    std::vector<ArcSample> samples;
    for (int k = 1; k < 2048; ++k) {
        const double phi = cfg.beta * (pi * k / 2048 - pi / 2);
        samples.push_back({phi, evaluate(m, cfg.radius, phi)});
    }
    const auto d = derive_params(cfg);
    for (auto _ : state) {
        auto fitted = fit_from_arc(cfg, d, samples, n_terms);
        benchmark::DoNotOptimize(fitted.a.back());
    }
}
BENCHMARK(BM_fit_from_arc)->Arg(4)->Arg(16);

void BM_winslow_solve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto domain = make_sector_domain(CornerConfig{0.5, 1.0, 1.0, 1.0});
    for (auto _ : state) {
        auto [grid, report] = solve(domain, n, n);
        benchmark::DoNotOptimize(report.iterations);
    }
}
BENCHMARK(BM_winslow_solve)->Arg(17)->Arg(33)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
