#include <benchmark/benchmark.h>

#include <numbers>

#include "phf/gle.hpp"
#include "phf/heat.hpp"
#include "phf/oracle.hpp"

using namespace phf;

namespace {

constexpr double kW0 = 2 * std::numbers::pi;

LorentzianSpectralDensity bath() { return LorentzianSpectralDensity(0.3 * kW0 * kW0, 0.1 * kW0, kW0); }

TimeGrid grid_of(benchmark::State& st) { return TimeGrid::covering(0.0, 1.0 / 256.0, static_cast<double>(st.range(0))); }

}  // namespace

static void BM_NoiseSamples(benchmark::State& st) {
    const auto g = grid_of(st);
    for (auto _ : st) benchmark::DoNotOptimize(noise_samples(bath(), Temperature(70.0), g.dt, g.n));
}
BENCHMARK(BM_NoiseSamples)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_GreenEmbedding(benchmark::State& st) {
    const auto g = grid_of(st);
    const FrictionKernel k(bath(), true);
    for (auto _ : st) benchmark::DoNotOptimize(solve_green(k, kW0, g, {GreenMethod::embedding, true, 0}));
}
BENCHMARK(BM_GreenEmbedding)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_GreenVolterra(benchmark::State& st) {
    const auto g = grid_of(st);
    const FrictionKernel k(bath(), true);
    for (auto _ : st) benchmark::DoNotOptimize(solve_green(k, kW0, g, {GreenMethod::volterra, true, 0}));
}
BENCHMARK(BM_GreenVolterra)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_NoiseQuadraticForm(benchmark::State& st) {
    const auto g = grid_of(st);
    const auto eta = noise_samples(bath(), Temperature(70.0), g.dt, g.n);
    const auto gf = solve_green(FrictionKernel(bath(), true), kW0, g);
    for (auto _ : st) benchmark::DoNotOptimize(noise_quadratic_form(gf.G, gf.G, eta, g.dt));
}
BENCHMARK(BM_NoiseQuadraticForm)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_HeatKernelForm(benchmark::State& st) {
    const auto g = grid_of(st);
    const FrictionKernel k(bath(), true);
    const auto gf = solve_green(k, kW0, g);
    const auto eta = noise_samples(bath(), Temperature(70.0), g.dt, g.n);
    const auto mom = gibbs_initial_moments(kW0, Temperature(70.0));
    const GaussianPulse p(10.0, 5.0, 1.0, kW0);
    for (auto _ : st) benchmark::DoNotOptimize(heat_current_kernel_form(gf, k, eta, p, mom, g));
}
BENCHMARK(BM_HeatKernelForm)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_OracleNormalModes(benchmark::State& st) {
    const auto g = TimeGrid::covering(0.0, 1.0 / 256.0, 10.0);
    const auto db = discretize_bath(bath(), static_cast<std::size_t>(st.range(0)), 6 * kW0);
    const auto dyn = build_dynamics(db, kW0, GaussianPulse(10.0, 5.0, 1.0, kW0));
    const auto s0 = initial_state(db, kW0, Temperature(70.0));
    for (auto _ : st) benchmark::DoNotOptimize(propagate_normal_modes(s0, dyn, g));
}
BENCHMARK(BM_OracleNormalModes)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
