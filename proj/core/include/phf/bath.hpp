#pragma once

// Lorentzian (Brownian-oscillator) bath: spectral density, friction kernel,
// noise correlation and the fluctuation-dissipation relations between them.

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "phf/quadrature.hpp"
#include "phf/units.hpp"

namespace phf {

/// J(w) = (1/pi) g^2 Gamma w / ((w^2 - Omega^2)^2 + Gamma^2 w^2)
class LorentzianSpectralDensity {
public:
    LorentzianSpectralDensity(double g, double gamma, double omega);

    double g() const noexcept { return g_; }
    double gamma() const noexcept { return gamma_; }
    double omega() const noexcept { return omega_; }

    /// The exponential-pair kernel representation needs an underdamped bath.
    bool underdamped() const noexcept { return gamma_ < 2.0 * omega_; }

    quad::SpectralScale scale() const noexcept { return {omega_, gamma_}; }

    /// Generic evaluation (double or autodiff types); no domain check.
    template <class R>
    R operator()(const R& w) const {
        const R w2 = w * w;
        const R d = w2 - omega_ * omega_;
        return (g_ * g_ * gamma_ / std::numbers::pi) * w / (d * d + (gamma_ * gamma_) * w2);
    }

    /// lim_{w->0} J(w)/w
    double slope_at_zero() const noexcept;

private:
    double g_, gamma_, omega_;
};

double spectral_density(const LorentzianSpectralDensity& sd, double omega);

/// gamma(t) = int_0^inf J(w)/w cos(w t) dw by quadrature. Throws NumericalError
/// with the achieved error estimate when the tolerance is not met.
quad::Result friction_kernel(const LorentzianSpectralDensity& sd, double t, const quad::Options& opt = {});

/// Full cosine transform of the even kernel, pi J(w)/w.
double kernel_cosine_transform(const LorentzianSpectralDensity& sd, double omega);

/// gamma(t) = A e^{-Gamma t/2} (cos W1 t + c sin W1 t), W1 = sqrt(Omega^2 - Gamma^2/4).
/// From the two poles of J(w)/w in the upper half plane:
///   A = g^2 / (2 Omega^2),  c = Gamma / (2 W1).
/// Equivalently gamma'' + Gamma gamma' + Omega^2 gamma = 0, gamma(0) = A, gamma'(0) = 0.
class ExponentialKernel {
public:
    explicit ExponentialKernel(const LorentzianSpectralDensity& sd);

    double amplitude() const noexcept { return a_; }
    double sine_weight() const noexcept { return c_; }
    double decay() const noexcept { return gamma_; }      // Gamma (envelope e^{-Gamma t/2})
    double frequency() const noexcept { return w1_; }     // W1
    double omega() const noexcept { return omega_; }      // Omega

    /// Even extension: evaluates at |t|.
    double operator()(double t) const noexcept;
    double derivative(double t) const noexcept;  // t >= 0

    /// int_0^inf gamma(t) e^{-i w t} dt = A (z + Gamma) / (z^2 + Gamma z + Omega^2), z = i w
    std::complex<double> causal_transform(double omega) const noexcept;

private:
    double a_, c_, gamma_, w1_, omega_;
};

struct KernelValidation {
    bool passed = false;
    double max_error = 0.0;   // max |fast - quadrature| / gamma(0)
    double tolerance = 0.0;
    double t_end = 0.0;
    std::string reason;
};

/// Compares the exponential pair against quadrature over [0, 20/Gamma].
KernelValidation validate_exponential_kernel(const LorentzianSpectralDensity& sd, double tolerance = 1e-8,
                                             std::size_t samples = 97);

/// Friction kernel evaluator: the exponential pair when requested and
/// validated, quadrature otherwise.
class FrictionKernel {
public:
    FrictionKernel(const LorentzianSpectralDensity& sd, bool prefer_fast_path);

    const LorentzianSpectralDensity& density() const noexcept { return sd_; }
    bool fast_path() const noexcept { return fast_.has_value(); }
    const KernelValidation& validation() const noexcept { return validation_; }

    /// Throws NumericalError if the fast path is not enabled.
    const ExponentialKernel& exponential() const;

    double operator()(double t) const;
    std::vector<double> samples(double h, std::size_t n, unsigned threads = 1) const;
    std::complex<double> causal_transform(double omega) const;

private:
    LorentzianSpectralDensity sd_;
    std::optional<ExponentialKernel> fast_;
    KernelValidation validation_;
};

/// gamma_hat(w) = int_0^inf gamma(t) e^{-iwt} dt from the spectral
/// representation: Re = pi J(w)/(2w), Im = -w PV int J(v)/v / (w^2 - v^2) dv.
std::complex<double> kernel_causal_transform(const LorentzianSpectralDensity& sd, double omega,
                                             const quad::Options& opt = {});

/// hbar J(w) coth(beta hbar w / 2), finite at w = 0.
class NoiseIntegrand {
public:
    NoiseIntegrand(const LorentzianSpectralDensity& sd, Temperature temp) : sd_(sd), temp_(temp) {}

    template <class R>
    R operator()(const R& w) const {
        const R j = sd_(w);
        if (temp_.is_zero()) return kHbar * j;
        if constexpr (std::is_same_v<R, double>) {
            if (w == 0.0) return 2.0 * temp_.thermal_energy() * sd_.slope_at_zero();
        }
        const double c = 0.5 * kHbar / temp_.thermal_energy();
        // coth = 1 to double precision; also keeps autodiff of tanh away from overflow.
        if (c * static_cast<double>(w) > 40.0) return kHbar * j;
        using std::tanh;
        return kHbar * j / tanh(c * w);
    }

private:
    LorentzianSpectralDensity sd_;
    Temperature temp_;
};

/// eta(t) = hbar int_0^inf J(w) coth(beta hbar w/2) cos(w t) dw
quad::Result noise_correlation(const LorentzianSpectralDensity& sd, Temperature temp, double t,
                               const quad::Options& opt = {});

/// eta on t_j = j h, j < n.
std::vector<double> noise_samples(const LorentzianSpectralDensity& sd, Temperature temp, double h, std::size_t n,
                                  unsigned threads = 1);

enum class NoiseModel { quantum, classical };

std::string to_string(NoiseModel m);
NoiseModel parse_noise_model(const std::string& s);

/// Classical noise 2 kB T gamma(t_j), the high-temperature limit of eta.
std::vector<double> classical_noise_samples(const FrictionKernel& kernel, Temperature temp, double h, std::size_t n,
                                            unsigned threads = 1);

/// eta on the grid for either noise model.
std::vector<double> noise_series(const FrictionKernel& kernel, Temperature temp, NoiseModel model, double h,
                                 std::size_t n, unsigned threads = 1);

/// S(w) = pi hbar J(|w|) coth(beta hbar |w|/2); S(0) = 2 kB T g^2 Gamma / Omega^4.
double noise_psd(const LorentzianSpectralDensity& sd, Temperature temp, double omega);

enum class FdtPath { analytic, numeric };

/// |S(w) - hbar w coth(beta hbar w/2) gamma~(|w|)| / S(w). The numeric path
/// takes gamma~ from a trapezoidal cosine sum over quadrature samples of gamma.
double fdt_residual(const LorentzianSpectralDensity& sd, Temperature temp, double omega,
                    FdtPath path = FdtPath::analytic);

/// 2 * trapezoid sum_j gamma(t_j) cos(w t_j) h over uniform samples starting at t = 0.
double cosine_transform_of_samples(const std::vector<double>& samples, double h, double omega);

/// Full cosine transform of gamma from quadrature samples of gamma(t); samples
/// extend until e^{-Gamma t/2} < 1e-11.
class SampledKernelTransform {
public:
    explicit SampledKernelTransform(const LorentzianSpectralDensity& sd, unsigned threads = 1);

    double operator()(double omega) const { return cosine_transform_of_samples(samples_, h_, omega); }
    double step() const noexcept { return h_; }
    const std::vector<double>& samples() const noexcept { return samples_; }

private:
    double h_;
    std::vector<double> samples_;
};

/// Numeric-path residual with a precomputed transform (shared across T and w).
double fdt_residual(const LorentzianSpectralDensity& sd, Temperature temp, double omega,
                    const SampledKernelTransform& transform);

/// coth(hbar w0 / (2 kB T)); exactly 1 at T = 0.
double quantum_criterion(double omega0, Temperature temp);

}  // namespace phf
