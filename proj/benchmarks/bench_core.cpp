#include <benchmark/benchmark.h>

#include "spikecert/determinant.hpp"
#include "spikecert/scan.hpp"
#include "spikecert/solver.hpp"

using namespace spikecert;

namespace {

Framework laplace_m2() {
    return Framework(Kernel::laplace(), SamplingMeasure::discrete_locations({0.5, 1.0, 1.5, 2.5}));
}

Framework laplace_m3() {
    return Framework(Kernel::laplace(), SamplingMeasure::discrete_locations({0.3, 0.9, 1.5, 2.3, 3.4, 4.6}));
}

void BM_eta_v_solve(benchmark::State& state) {
    Framework fw = laplace_m2();
    auto spikes = SpikeConfiguration::make({1.0, 2.0}, {1.0, 1.0});
    for (auto _ : state) {
        Certificate cert = compute_eta_V(fw, spikes);
        benchmark::DoNotOptimize(cert.coeffs.data());
    }
}
BENCHMARK(BM_eta_v_solve);

void BM_eta_v_solve_extended(benchmark::State& state) {
    Framework fw = laplace_m3();
    auto spikes = SpikeConfiguration::make({0.8, 1.9, 3.1}, {1.0, 1.0, 1.0});
    for (auto _ : state) {
        Certificate cert = compute_eta_V(fw, spikes);
        benchmark::DoNotOptimize(cert.coeffs.data());
    }
}
BENCHMARK(BM_eta_v_solve_extended);

void BM_certify_grid(benchmark::State& state) {
    Framework fw = laplace_m2();
    Certificate cert = compute_eta_V(fw, SpikeConfiguration::make({1.0, 2.0}, {1.0, 1.0}));
    ScanPolicy policy;
    policy.grid_points = int(state.range(0));
    for (auto _ : state) {
        CertificateVerdict v = certify(cert, policy);
        benchmark::DoNotOptimize(v.global_margin);
    }
    state.counters["points"] = double(policy.grid_points);
}
BENCHMARK(BM_certify_grid)->Arg(501)->Arg(4001);

void BM_det_v_point(benchmark::State& state) {
    Framework fw = laplace_m3();
    std::vector<double> xs{0.8, 1.9, 3.1};
    double t = 2.4;
    for (auto _ : state) {
        benchmark::DoNotOptimize(det_V(fw, xs, t));
        t += 1e-9; // defeat caching of the argument
    }
}
BENCHMARK(BM_det_v_point);

void BM_cauchy_binet_tuples(benchmark::State& state) {
    std::vector<double> locs;
    for (int i = 0; i < 10; ++i) locs.push_back(-2.0 + 0.45 * double(i));
    Framework fw(Kernel::gaussian(), SamplingMeasure::discrete_locations(locs));
    std::vector<double> xs{-0.4, 0.8};
    for (auto _ : state) {
        auto res = cauchy_binet_check(fw, xs, 1.7);
        benchmark::DoNotOptimize(res.d_residual);
    }
    state.counters["tuples"] = 210.0;
}
BENCHMARK(BM_cauchy_binet_tuples);

void BM_solve_pblasso(benchmark::State& state) {
    Framework fw(Kernel::laplace(), SamplingMeasure::discrete_locations({0.2, 0.8, 2.0, 5.0}));
    auto y = fw.forward(SpikeConfiguration::make({0.5, 2.5}, {1.0, 1.0}));
    for (auto _ : state) {
        SolverResult res = solve_pblasso(fw, y, 1e-5);
        benchmark::DoNotOptimize(res.objective);
    }
}
BENCHMARK(BM_solve_pblasso);

} // namespace

BENCHMARK_MAIN();
