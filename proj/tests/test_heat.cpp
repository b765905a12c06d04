#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "phf/errors.hpp"
#include "phf/heat.hpp"
#include "test_support.hpp"

using namespace phf;
using phf::test::kW0;
using phf::test::max_abs;
using phf::test::max_abs_diff;
using phf::test::ref_bath;
using phf::test::ref_pulse;

namespace {

struct Case {
    TimeGrid grid;
    FrictionKernel kernel;
    GreenFunction gf;
    std::vector<double> eta;
    GibbsMoments mom;
    GaussianPulse pulse;

    Case(double horizon, double dt, double T, double amplitude, double tau = 1.0, double g_rel = 0.3)
        : grid(TimeGrid::covering(0.0, dt, horizon)),
          kernel(ref_bath(g_rel), true),
          gf(solve_green(kernel, kW0, grid)),
          eta(noise_samples(ref_bath(g_rel), Temperature(T), dt, grid.n)),
          mom(gibbs_initial_moments(kW0, Temperature(T))),
          pulse(ref_pulse(tau, amplitude)) {}

    HeatSeries kernel_form() const { return heat_current_kernel_form(gf, kernel, eta, pulse, mom, grid); }
    TrajectoryBundle traj() const { return variance_series(gf, pulse, eta, mom, grid); }
};

TimeGrid uniform(std::size_t n) { return TimeGrid(0.0, 0.1, n); }

}  // namespace

TEST(HeatKernelForm, DecompositionAndRunningIntegral) {
    const Case s(20.0, 1.0 / 128.0, 70.0, 10.0);
    const auto hs = s.kernel_form();
    ASSERT_EQ(hs.J_kernel.size(), s.grid.n);
    for (std::size_t i = 0; i < s.grid.n; ++i) ASSERT_EQ(hs.J_kernel[i], hs.J_dissipative[i] + hs.J_fluctuation[i]);
    const auto q = cumulative_trapezoid(hs.J_kernel, s.grid.dt);
    EXPECT_LE(max_abs_diff(q, hs.Q_integrated), 1e-12 * max_abs(q));
    EXPECT_EQ(integrated_heat(hs, 0.0), 0.0);
    EXPECT_NEAR(integrated_heat(hs, s.grid.t_end()), hs.Q_integrated.back(), 1e-12 * max_abs(q));
}

TEST(HeatKernelForm, RowAssemblyAgreesForAnyThreadCount) {
    // Rows integrate C(t, s) over s after the two-time trapezoid; the closed form
    // integrates per term. Both are second order, so they differ at O(dt^2).
    const auto gap = [](double dt) {
        const Case s(6.0, dt, 70.0, 10.0);
        const auto fast = s.kernel_form();
        const auto rows = heat_current_kernel_rows(s.gf, s.kernel, s.eta, s.pulse, s.mom, s.grid, 1);
        if (dt == 1.0 / 64.0) {
            const auto rows3 = heat_current_kernel_rows(s.gf, s.kernel, s.eta, s.pulse, s.mom, s.grid, 3);
            EXPECT_EQ(rows.J_kernel, rows3.J_kernel);
            EXPECT_EQ(rows.J_fluctuation, fast.J_fluctuation);
        }
        return max_abs_diff(fast.J_kernel, rows.J_kernel) / max_abs(fast.J_kernel);
    };
    const double a = gap(1.0 / 64.0), b = gap(1.0 / 128.0);
    EXPECT_LE(a, 1e-3);
    EXPECT_GT(a / b, 3.5);
}

TEST(HeatKernelForm, AgreesWithEnergyBalance) {
    const Case s(40.0, 1.0 / 256.0, 70.0, 10.0);
    auto hs = s.kernel_form();
    const auto direct = heat_current_direct(s.traj(), s.pulse, kW0, s.grid);
    EXPECT_TRUE(direct.resolution_ok);
    attach_direct(hs, direct);
    EXPECT_LE(max_abs_diff(hs.J_direct, hs.J_kernel), 0.02 * max_abs(hs.J_kernel));
    EXPECT_THROW(attach_direct(hs, DirectHeat{std::vector<double>(3), 0.0, true}), GridMismatch);
}

TEST(HeatKernelForm, DrivenRunEndsWithHeatInTheBath) {
    const Case s(40.0, 1.0 / 256.0, 70.0, 10.0);
    const auto hs = s.kernel_form();
    const double tp = pulse_end_time(s.pulse);
    const double tmax = relaxation_time(s.traj().mean_Q, hs.J_kernel, s.grid, tp);
    EXPECT_LT(integrated_heat(hs, tmax), 0.0);
}

TEST(HeatKernelForm, ExtrapolationRemovesStepBias) {
    const double dt = 1.0 / 128.0;
    const Case coarse(40.0, dt, 70.0, 0.0), ref(40.0, dt / 8.0, 70.0, 0.0);
    const auto plain = coarse.kernel_form();
    const auto fine = ref.kernel_form();
    const auto extra = heat_current_extrapolated(coarse.kernel, Temperature(70.0), kW0, coarse.pulse, coarse.grid);
    ASSERT_EQ(extra.grid, coarse.grid);
    double e_plain = 0.0, e_extra = 0.0;
    for (std::size_t i = 0; i < coarse.grid.n; ++i) {
        e_plain = std::max(e_plain, std::abs(plain.J_kernel[i] - fine.J_kernel[8 * i]));
        e_extra = std::max(e_extra, std::abs(extra.J_kernel[i] - fine.J_kernel[8 * i]));
        ASSERT_EQ(extra.J_kernel[i], extra.J_dissipative[i] + extra.J_fluctuation[i]);
    }
    EXPECT_LT(e_extra, 0.1 * e_plain);
}

TEST(HeatKernelForm, ZeroPointSaturation) {
    // T = 0, undriven: both parts stay finite while the sum relaxes to zero.
    const Case s(40.0, 1.0 / 256.0, 0.0, 0.0);
    const auto hs = heat_current_extrapolated(s.kernel, Temperature(0.0), kW0, s.pulse, s.grid);
    const std::size_t i = s.grid.n - 1;
    const double sum = std::abs(hs.J_dissipative[i] + hs.J_fluctuation[i]);
    EXPECT_GT(std::abs(hs.J_dissipative[i]), 100.0 * sum);
    EXPECT_GT(std::abs(hs.J_fluctuation[i]), 100.0 * sum);
    EXPECT_LT(hs.J_dissipative[i], 0.0);
    EXPECT_GT(hs.J_fluctuation[i], 0.0);
}

TEST(HeatDirect, ClosedOscillatorConservesEnergy) {
    const Case s(20.0, 1.0 / 256.0, 70.0, 0.0, 1.0, 0.0);
    const auto d = heat_current_direct(s.traj(), s.pulse, kW0, s.grid);
    EXPECT_LE(max_abs(d.J), 1e-3 * Temperature(70.0).thermal_energy());
}

TEST(Markovian, FixedPointAndSubstitution) {
    const Temperature T(70.0);
    const MarkovianModel mm(0.3, T);
    const double kT = T.thermal_energy();
    const auto j = markovian_heat_current(mm, {kT, 2 * kT, 0.0});
    EXPECT_EQ(j[0], 0.0);
    EXPECT_DOUBLE_EQ(j[1], -0.3 * kT);
    EXPECT_DOUBLE_EQ(j[2], 0.3 * kT);
    EXPECT_THROW(MarkovianModel(0.0, T), std::invalid_argument);
}

TEST(Markovian, MatchedRateIsHalfCosineTransform) {
    const FrictionKernel k(ref_bath(), true);
    const auto sd = ref_bath();
    EXPECT_NEAR(matched_markov_rate(k, kW0), std::numbers::pi * spectral_density(sd, kW0) / (2 * kW0), 1e-9);
    EXPECT_DOUBLE_EQ(initial_slip_time(sd), 20.0 / sd.gamma());
}

TEST(NonMarkovianity, TrivialCasesAndScaling) {
    const auto g = uniform(101);
    std::vector<double> neg(101), pos(101), mixed(101);
    for (std::size_t i = 0; i < 101; ++i) {
        neg[i] = -1.0 - 0.01 * i;
        pos[i] = 0.5 + std::sin(0.1 * i) * 0.1;
        mixed[i] = std::sin(0.4 * i) - 0.3;
    }
    EXPECT_EQ(nonmarkovianity_indicator(neg, g, 1.0, 9.0).value, 0.0);
    EXPECT_EQ(nonmarkovianity_indicator(pos, g, 1.0, 9.0).value, 1.0);
    const auto m = nonmarkovianity_indicator(mixed, g, 1.0, 9.0);
    EXPECT_TRUE(m.defined);
    EXPECT_GT(m.value, 0.0);
    EXPECT_LT(m.value, 1.0);
    auto scaled = mixed;
    for (auto& x : scaled) x *= 7.5;
    EXPECT_NEAR(nonmarkovianity_indicator(scaled, g, 1.0, 9.0).value, m.value, 1e-14);
    EXPECT_FALSE(nonmarkovianity_indicator(std::vector<double>(101, 0.0), g, 1.0, 9.0).defined);
}

TEST(Signatures, SignChangesAndFraction) {
    const auto g = uniform(101);
    std::vector<double> j(101);
    for (std::size_t i = 0; i < 101; ++i) j[i] = std::sin(std::numbers::pi * 0.1 * i + 0.3);
    EXPECT_EQ(sign_changes(j, g, 0.0, 10.0), 10u);
    EXPECT_EQ(sign_changes(j, g, 0.0, 10.0, 2.0), 0u);
    std::vector<double> half(101, -1.0);
    for (std::size_t i = 50; i < 101; ++i) half[i] = 1.0;
    EXPECT_NEAR(fraction_nonpositive(half, g, 0.0, 10.0), 50.0 / 101.0, 1e-12);
}

TEST(Signatures, EnvelopeRevivalAndMonotoneDecay) {
    const auto g = TimeGrid(0.0, 0.01, 4001);
    std::vector<double> decay(g.n), beat(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        const double t = g.t(i);
        decay[i] = std::exp(-0.1 * t) * std::sin(2 * std::numbers::pi * t);
        beat[i] = std::cos(0.2 * t) * std::sin(2 * std::numbers::pi * t);
    }
    const auto dp = envelope_peaks(decay, g, 1.0), bp = envelope_peaks(beat, g, 1.0);
    EXPECT_TRUE(decays_monotonically(dp));
    EXPECT_FALSE(has_revival(dp));
    EXPECT_TRUE(has_revival(bp));
    EXPECT_FALSE(decays_monotonically(bp));
}

TEST(Windows, PulseEndAndRelaxation) {
    const GaussianPulse p(10.0, 5.0, 1.0, kW0);
    EXPECT_DOUBLE_EQ(pulse_end_time(p), 8.0);
    const auto g = uniform(401);
    std::vector<double> q(401), j(401, 0.0);
    for (std::size_t i = 0; i < 401; ++i) q[i] = std::exp(-g.t(i));
    const double t = relaxation_time(q, j, g, 1.0, 5.0);
    EXPECT_GT(t, 1.0);
    EXPECT_LE(t, std::log(100.0) + 1.0 + 0.11);
    std::vector<double> forever(401, 1.0);
    EXPECT_DOUBLE_EQ(relaxation_time(forever, forever, g, 1.0, 5.0), g.t_end());
}
