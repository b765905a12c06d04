#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "phf/bath.hpp"
#include "phf/errors.hpp"
#include "test_support.hpp"

using namespace phf;
using phf::test::ref_bath;

namespace {

constexpr double kPi = std::numbers::pi;

// Closed-form gamma from the two upper-half-plane poles, written out independently.
double gamma_poles(const LorentzianSpectralDensity& sd, double t) {
    const double W = sd.omega(), G = sd.gamma();
    const double w1 = std::sqrt(W * W - G * G / 4);
    return sd.g() * sd.g() / (2 * W * W) * std::exp(-G * t / 2) * (std::cos(w1 * t) + G / (2 * w1) * std::sin(w1 * t));
}

}  // namespace

TEST(Units, ConstantsInAmuAngstromPs) {
    EXPECT_NEAR(kHbar, 6.350780, 1e-5);
    EXPECT_NEAR(kBoltzmann, 0.831446, 1e-5);
    EXPECT_DOUBLE_EQ(thz_to_rad_per_ps(1.0), 2 * kPi);
}

TEST(Units, ZeroTemperature) {
    const Temperature t0(0.0);
    EXPECT_TRUE(t0.is_zero());
    EXPECT_TRUE(std::isinf(t0.beta()));
    EXPECT_EQ(t0.coth_factor(0.1), 1.0);
    EXPECT_THROW(Temperature(-1.0), std::invalid_argument);
    EXPECT_THROW(Temperature(std::nan("")), std::invalid_argument);
}

TEST(SpectralDensity, VanishesAtZeroAndInfinity) {
    const auto sd = ref_bath();
    EXPECT_EQ(spectral_density(sd, 0.0), 0.0);
    EXPECT_LT(spectral_density(sd, 1e6), 1e-12);
}

TEST(SpectralDensity, ValueAtCentre) {
    const auto sd = ref_bath();
    const double w0 = sd.omega();
    EXPECT_NEAR(spectral_density(sd, w0), 0.09 / (0.1 * kPi) * w0 * w0, 1e-12 * w0 * w0);
    EXPECT_NEAR(spectral_density(sd, w0) / (w0 * w0), 0.28648, 1e-5);
}

TEST(SpectralDensity, PeakWithinOneWidthOfCentre) {
    const auto sd = ref_bath();
    double best = 0.0, arg = 0.0;
    for (int i = 1; i < 200000; ++i) {
        const double w = 3.0 * sd.omega() * i / 200000.0;
        const double j = spectral_density(sd, w);
        if (j > best) best = j, arg = w;
    }
    EXPECT_GE(arg, sd.omega() - sd.gamma());
    EXPECT_LE(arg, sd.omega() + sd.gamma());
}

TEST(FrictionKernel, ZeroTimeValue) {
    const auto sd = ref_bath();
    const auto r = friction_kernel(sd, 0.0);
    const double expect = sd.g() * sd.g() / (2 * sd.omega() * sd.omega());
    EXPECT_NEAR(r.value, expect, std::max(r.error, 1e-8 * expect));
}

TEST(FrictionKernel, MatchesPoleSumAndEnvelope) {
    const auto sd = ref_bath();
    const double g0 = gamma_poles(sd, 0.0);
    const double w1 = std::sqrt(sd.omega() * sd.omega() - sd.gamma() * sd.gamma() / 4);
    for (double t = 0.0; t <= 20.0; t += 0.37) {
        const double v = friction_kernel(sd, t).value;
        EXPECT_NEAR(v, gamma_poles(sd, t), 1e-7 * g0) << "t = " << t;
        EXPECT_LE(std::abs(v), g0 * std::exp(-sd.gamma() * t / 2) * (1 + sd.gamma() / (2 * w1)) + 1e-9 * g0);
    }
}

TEST(FrictionKernel, DecaysAtLongTimes) {
    const auto sd = ref_bath();
    EXPECT_LT(std::abs(friction_kernel(sd, 80.0).value), 1e-8 * gamma_poles(sd, 0.0));
}

TEST(FrictionKernel, FastPathValidatedForUnderdampedBath) {
    const FrictionKernel k(ref_bath(), true);
    ASSERT_TRUE(k.fast_path());
    EXPECT_TRUE(k.validation().passed);
    EXPECT_LE(k.validation().max_error, k.validation().tolerance);
    for (double t : {0.0, 1.3, 7.9}) EXPECT_NEAR(k(t), gamma_poles(ref_bath(), t), 1e-12 * k(0.0));
}

TEST(FrictionKernel, OverdampedFallsBackToQuadrature) {
    const double w = 2 * kPi;
    const LorentzianSpectralDensity sd(0.3 * w * w, 2.5 * w, w);
    const FrictionKernel k(sd, true);
    EXPECT_FALSE(k.fast_path());
    EXPECT_THROW(k.exponential(), NumericalError);
    EXPECT_NEAR(k(0.0), sd.g() * sd.g() / (2 * w * w), 1e-7 * k(0.0));
}

TEST(FrictionKernel, SamplesOnGrid) {
    const FrictionKernel fast(ref_bath(), true), slow(ref_bath(), false);
    const auto a = fast.samples(0.05, 40), b = slow.samples(0.05, 40, 3);
    ASSERT_EQ(a.size(), 40u);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-7 * a[0]);
}

TEST(KernelTransform, CosineTransformAtCentre) {
    const auto sd = ref_bath();
    const double W = sd.omega();
    EXPECT_NEAR(kernel_cosine_transform(sd, W), sd.g() * sd.g() / (sd.gamma() * W * W), 1e-12 * sd.g());
    EXPECT_LT(kernel_cosine_transform(sd, 1e5), 1e-12);
}

TEST(KernelTransform, CosineTransformMatchesSampledKernel) {
    const auto sd = ref_bath();
    // Trapezoid over the closed-form kernel; gamma'(0) = 0 so the end correction is fourth order.
    const double h = 1.0 / 128.0;
    const int n = 128 * 100;
    for (double f : {0.5, 1.0, 2.0}) {
        const double w = f * sd.omega();
        double s = 0.5 * gamma_poles(sd, 0.0);
        for (int i = 1; i < n; ++i) s += gamma_poles(sd, i * h) * std::cos(w * i * h);
        const double numeric = 2 * h * s;
        EXPECT_NEAR(numeric / kernel_cosine_transform(sd, w), 1.0, 1e-4) << "w = " << w;
    }
}

TEST(KernelTransform, CausalTransform) {
    const auto sd = ref_bath();
    const double W = sd.omega();
    const auto at = kernel_causal_transform(sd, W);
    EXPECT_NEAR(at.real() / (kPi * spectral_density(sd, W) / (2 * W)), 1.0, 1e-6);

    // int_0^inf gamma dt = A Gamma / Omega^2 from the pole form.
    const double integral = sd.g() * sd.g() / (2 * W * W) * sd.gamma() / (W * W);
    EXPECT_NEAR(kernel_causal_transform(sd, 0.0).real(), integral, 1e-7 * integral);

    for (double w : {0.3, 6.0, 11.0}) {
        EXPECT_NEAR(kernel_causal_transform(sd, -w).imag(), -kernel_causal_transform(sd, w).imag(), 1e-9);
        const auto fast = FrictionKernel(sd, true).causal_transform(w);
        const auto slow = kernel_causal_transform(sd, w);
        EXPECT_NEAR(std::abs(fast - slow), 0.0, 1e-6 * std::abs(fast));
    }
}

TEST(Noise, EvenInTime) {
    const auto sd = ref_bath();
    const Temperature T(70.0);
    for (double t : {0.4, 3.1}) EXPECT_DOUBLE_EQ(noise_correlation(sd, T, t).value, noise_correlation(sd, T, -t).value);
}

TEST(Noise, ZeroTemperatureEqualTime) {
    const auto sd = ref_bath();
    const auto r = noise_correlation(sd, Temperature(0.0), 0.0);
    auto j = [&](double w) { return spectral_density(sd, w); };
    double err = 0.0;
    const double ref = kHbar * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                                   j, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-12, &err);
    EXPECT_NEAR(r.value, ref, std::max(r.error, 1e-8 * ref));
    // Narrow Lorentzian: int J dw -> g^2 / (2 Omega).
    EXPECT_NEAR(r.value / (kHbar * sd.g() * sd.g() / (2 * sd.omega())), 1.0, 0.05);
}

TEST(Noise, HighTemperatureIsClassical) {
    const auto sd = ref_bath();
    const Temperature T(5000.0);
    const double scale = 2 * T.thermal_energy() * gamma_poles(sd, 0.0);
    for (double t = 0.0; t <= 5.0; t += 0.25) {
        EXPECT_LE(std::abs(noise_correlation(sd, T, t).value - 2 * T.thermal_energy() * gamma_poles(sd, t)) / scale, 1e-2);
    }
}

TEST(Noise, SamplesMatchPointwise) {
    const auto sd = ref_bath();
    const Temperature T(70.0);
    const auto s = noise_samples(sd, T, 0.1, 12, 2);
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(s[i], noise_correlation(sd, T, 0.1 * i).value, 1e-9 * s[0]);
}

TEST(Noise, ClassicalSeriesIsScaledKernel) {
    const FrictionKernel k(ref_bath(), true);
    const Temperature T(300.0);
    const auto c = noise_series(k, T, NoiseModel::classical, 0.1, 8);
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_DOUBLE_EQ(c[i], 2 * T.thermal_energy() * k(0.1 * i));
    EXPECT_EQ(parse_noise_model("classical"), NoiseModel::classical);
    EXPECT_EQ(to_string(NoiseModel::quantum), "quantum");
    EXPECT_THROW(parse_noise_model("white"), std::invalid_argument);
}

TEST(NoisePsd, SymmetricPositiveAndMonotoneInTemperature) {
    const auto sd = ref_bath();
    for (double w : {0.5, 6.0, 15.0}) {
        EXPECT_EQ(noise_psd(sd, Temperature(70.0), w), noise_psd(sd, Temperature(70.0), -w));
        const double s0 = noise_psd(sd, Temperature(0.0), w);
        EXPECT_DOUBLE_EQ(s0, kPi * kHbar * spectral_density(sd, w));
        EXPECT_GT(s0, 0.0);
        EXPECT_LT(s0, noise_psd(sd, Temperature(70.0), w));
        EXPECT_LT(noise_psd(sd, Temperature(70.0), w), noise_psd(sd, Temperature(300.0), w));
    }
    const Temperature T(70.0);
    EXPECT_NEAR(noise_psd(sd, T, 0.0) / noise_psd(sd, T, 1e-6), 1.0, 1e-6);
}

TEST(Fdt, AnalyticAndNumericPaths) {
    const auto sd = ref_bath();
    const SampledKernelTransform tr(sd);
    for (double T : {0.0, 70.0, 300.0}) {
        for (double f : {0.5, 1.0, 2.0}) {
            EXPECT_LE(fdt_residual(sd, Temperature(T), f * sd.omega(), FdtPath::analytic), 1e-10);
            EXPECT_LE(fdt_residual(sd, Temperature(T), f * sd.omega(), tr), 1e-4);
        }
    }
    EXPECT_LE(fdt_residual(sd, Temperature(70.0), sd.omega(), FdtPath::numeric), 1e-4);
}

TEST(Fdt, ClassicalLimit) {
    const auto sd = ref_bath();
    const Temperature T(5000.0);
    const double S = noise_psd(sd, T, sd.omega());
    EXPECT_LE(std::abs(S - 2 * T.thermal_energy() * kernel_cosine_transform(sd, sd.omega())) / S, 1e-2);
}

TEST(QuantumCriterion, Limits) {
    const double w = thz_to_rad_per_ps(2.0);
    EXPECT_EQ(quantum_criterion(w, Temperature(0.0)), 1.0);
    EXPECT_NEAR(quantum_criterion(w, Temperature(70.0)), 1.68, 0.01);
    const Temperature hot(5000.0);
    const double classical = 2 * hot.thermal_energy() / (kHbar * w);
    EXPECT_LE(std::abs(quantum_criterion(w, hot) / classical - 1.0), 1e-2);
    EXPECT_EQ(quantum_criterion(w, Temperature(1e-3)), 1.0);
}

TEST(QuantumCriterion, MonotoneInTemperatureAndFrequency) {
    const double w = thz_to_rad_per_ps(1.0);
    for (double T = 5.0; T < 1000.0; T += 5.0) {
        EXPECT_LT(quantum_criterion(w, Temperature(T)), quantum_criterion(w, Temperature(T + 5.0)));
        EXPECT_GT(quantum_criterion(w, Temperature(T)), quantum_criterion(1.1 * w, Temperature(T)));
    }
}
