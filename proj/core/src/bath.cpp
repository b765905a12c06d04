#include "phf/bath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "phf/errors.hpp"

namespace phf {

namespace {

quad::Result require(const quad::Result& r, const quad::Options& opt, const char* what, double t) {
    if (!quad::converged(r, opt)) {
        std::ostringstream os;
        os << what << ": quadrature did not converge at t = " << t << " ps (achieved error " << r.error
           << ", L1 scale " << r.l1 << ")";
        throw NumericalError(os.str());
    }
    return r;
}

}  // namespace

LorentzianSpectralDensity::LorentzianSpectralDensity(double g, double gamma, double omega)
    : g_(g), gamma_(gamma), omega_(omega) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("coupling g must be finite and >= 0");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("bath width Gamma must be > 0");
    if (!(omega > 0.0) || !std::isfinite(omega)) throw std::invalid_argument("bath center Omega must be > 0");
}

double LorentzianSpectralDensity::slope_at_zero() const noexcept {
    const double o2 = omega_ * omega_;
    return g_ * g_ * gamma_ / (std::numbers::pi * o2 * o2);
}

double spectral_density(const LorentzianSpectralDensity& sd, double omega) {
    if (!(omega >= 0.0)) throw std::invalid_argument("spectral_density: omega must be >= 0 (pass |omega|)");
    return sd(omega);
}

quad::Result friction_kernel(const LorentzianSpectralDensity& sd, double t, const quad::Options& opt) {
    if (!(t >= 0.0)) throw std::invalid_argument("friction_kernel: t must be >= 0");
    auto f = [&sd](const auto& w) { return sd(w) / w; };
    return require(quad::cosine_integral(f, t, sd.scale(), opt), opt, "friction_kernel", t);
}

double kernel_cosine_transform(const LorentzianSpectralDensity& sd, double omega) {
    if (!(omega > 0.0)) throw std::invalid_argument("kernel_cosine_transform: omega must be > 0");
    return std::numbers::pi * sd(omega) / omega;
}

// ---------------------------------------------------------------------------
// Exponential pair

ExponentialKernel::ExponentialKernel(const LorentzianSpectralDensity& sd)
    : a_(0.0), c_(0.0), gamma_(sd.gamma()), w1_(0.0), omega_(sd.omega()) {
    if (!sd.underdamped()) throw NumericalError("exponential kernel requires Gamma < 2 Omega");
    w1_ = std::sqrt(omega_ * omega_ - 0.25 * gamma_ * gamma_);
    a_ = sd.g() * sd.g() / (2.0 * omega_ * omega_);
    c_ = gamma_ / (2.0 * w1_);
}

double ExponentialKernel::operator()(double t) const noexcept {
    t = std::abs(t);
    return a_ * std::exp(-0.5 * gamma_ * t) * (std::cos(w1_ * t) + c_ * std::sin(w1_ * t));
}

double ExponentialKernel::derivative(double t) const noexcept {
    // d/dt of the pair collapses to -A (Omega^2 / W1) e^{-Gamma t/2} sin(W1 t)
    return -a_ * (omega_ * omega_ / w1_) * std::exp(-0.5 * gamma_ * t) * std::sin(w1_ * t);
}

std::complex<double> ExponentialKernel::causal_transform(double omega) const noexcept {
    const std::complex<double> z(0.0, omega);
    return a_ * (z + gamma_) / (z * z + gamma_ * z + omega_ * omega_);
}

KernelValidation validate_exponential_kernel(const LorentzianSpectralDensity& sd, double tolerance,
                                             std::size_t samples) {
    KernelValidation v;
    v.tolerance = tolerance;
    v.t_end = 20.0 / sd.gamma();
    if (!sd.underdamped()) {
        v.reason = "bath is not underdamped (Gamma >= 2 Omega)";
        return v;
    }
    const ExponentialKernel fast(sd);
    const double scale = fast.amplitude();
    if (scale == 0.0) {
        v.passed = true;
        return v;
    }
    quad::Options opt;
    opt.rel_tol = 1e-12;
    opt.abs_tol = 1e-14 * scale;
    auto f = [&sd](const auto& w) { return sd(w) / w; };
    samples = std::max<std::size_t>(samples, 2);
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = v.t_end * static_cast<double>(i) / static_cast<double>(samples - 1);
        const auto q = quad::cosine_integral(f, t, sd.scale(), opt);
        v.max_error = std::max(v.max_error, std::abs(q.value - fast(t)) / scale);
    }
    v.passed = v.max_error <= tolerance;
    if (!v.passed) {
        std::ostringstream os;
        os << "exponential kernel deviates from quadrature by " << v.max_error << " (relative to gamma(0))";
        v.reason = os.str();
    }
    return v;
}

FrictionKernel::FrictionKernel(const LorentzianSpectralDensity& sd, bool prefer_fast_path) : sd_(sd) {
    if (!prefer_fast_path) {
        validation_.reason = "fast path not requested";
        return;
    }
    validation_ = validate_exponential_kernel(sd);
    if (validation_.passed) fast_.emplace(sd);
}

const ExponentialKernel& FrictionKernel::exponential() const {
    if (!fast_) throw NumericalError("exponential kernel unavailable: " + validation_.reason);
    return *fast_;
}

double FrictionKernel::operator()(double t) const {
    if (fast_) return (*fast_)(t);
    return friction_kernel(sd_, std::abs(t)).value;
}

std::vector<double> FrictionKernel::samples(double h, std::size_t n, unsigned threads) const {
    if (fast_) {
        std::vector<double> out(n);
        for (std::size_t j = 0; j < n; ++j) out[j] = (*fast_)(static_cast<double>(j) * h);
        return out;
    }
    auto f = [this](const auto& w) { return sd_(w) / w; };
    return quad::cosine_integral_on_grid(f, h, n, sd_.scale(), {}, threads);
}

std::complex<double> FrictionKernel::causal_transform(double omega) const {
    if (fast_) return fast_->causal_transform(omega);
    return kernel_causal_transform(sd_, omega);
}

// ---------------------------------------------------------------------------

std::complex<double> kernel_causal_transform(const LorentzianSpectralDensity& sd, double omega,
                                             const quad::Options& opt) {
    using boost::math::quadrature::gauss_kronrod;
    if (!std::isfinite(omega)) throw std::invalid_argument("kernel_causal_transform: omega must be finite");
    if (omega == 0.0) return {std::numbers::pi * sd.slope_at_zero() / 2.0, 0.0};
    const bool negative = omega < 0.0;
    const double w = std::abs(omega);

    const double re = 0.5 * std::numbers::pi * sd(w) / w;

    // PV int_0^inf psi(v) / (w - v) dv, psi(v) = J(v) / (v (w + v)). The
    // singular part is subtracted on [0, 2w] where PV int 1/(w - v) = 0.
    auto psi = [&](double v) { return sd(v) / (v * (w + v)); };
    const double psi_w = psi(w);

    std::vector<double> pts{0.0, w, 2.0 * w};
    for (int k = -8; k <= 8; ++k) pts.push_back(sd.omega() + 0.5 * k * sd.gamma());
    for (double m = 1.0; m <= 64.0; m *= 2.0) pts.push_back(sd.omega() + m * sd.gamma());
    std::erase_if(pts, [](double p) { return p < 0.0; });
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    double pv = 0.0, err_total = 0.0, l1_total = 0.0;
    auto accumulate = [&](auto&& fn, double a, double b) {
        double err = 0.0, l1 = 0.0;
        pv += gauss_kronrod<double, 31>::integrate(fn, a, b, opt.max_depth, opt.rel_tol, &err, &l1);
        err_total += err;
        l1_total += l1;
    };
    auto inner = [&](double v) { return (psi(v) - psi_w) / (w - v); };
    auto outer = [&](double v) { return psi(v) / (w - v); };
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] <= 2.0 * w) {
            accumulate(inner, pts[i], pts[i + 1]);
        } else {
            accumulate(outer, pts[i], pts[i + 1]);
        }
    }
    accumulate(outer, pts.back(), std::numeric_limits<double>::infinity());
    if (err_total > std::max(opt.abs_tol, opt.rel_tol * l1_total) * 10.0) {
        std::ostringstream os;
        os << "kernel_causal_transform: principal-value quadrature error " << err_total << " at omega = " << omega;
        throw NumericalError(os.str());
    }
    const double im = -w * pv;
    return {re, negative ? -im : im};
}

quad::Result noise_correlation(const LorentzianSpectralDensity& sd, Temperature temp, double t,
                               const quad::Options& opt) {
    const NoiseIntegrand f(sd, temp);
    return require(quad::cosine_integral(f, std::abs(t), sd.scale(), opt), opt, "noise_correlation", t);
}

std::vector<double> noise_samples(const LorentzianSpectralDensity& sd, Temperature temp, double h, std::size_t n,
                                  unsigned threads) {
    const NoiseIntegrand f(sd, temp);
    return quad::cosine_integral_on_grid(f, h, n, sd.scale(), {}, threads);
}

std::vector<double> classical_noise_samples(const FrictionKernel& kernel, Temperature temp, double h, std::size_t n,
                                            unsigned threads) {
    auto out = kernel.samples(h, n, threads);
    const double c = 2.0 * temp.thermal_energy();
    for (auto& x : out) x *= c;
    return out;
}

std::string to_string(NoiseModel m) { return m == NoiseModel::quantum ? "quantum" : "classical"; }

NoiseModel parse_noise_model(const std::string& s) {
    if (s == "quantum") return NoiseModel::quantum;
    if (s == "classical") return NoiseModel::classical;
    throw std::invalid_argument("unknown noise model '" + s + "'");
}

std::vector<double> noise_series(const FrictionKernel& kernel, Temperature temp, NoiseModel model, double h,
                                 std::size_t n, unsigned threads) {
    if (model == NoiseModel::classical) return classical_noise_samples(kernel, temp, h, n, threads);
    return noise_samples(kernel.density(), temp, h, n, threads);
}

double noise_psd(const LorentzianSpectralDensity& sd, Temperature temp, double omega) {
    const double w = std::abs(omega);
    if (w == 0.0) {
        if (temp.is_zero()) return 0.0;
        const double o2 = sd.omega() * sd.omega();
        return 2.0 * temp.thermal_energy() * sd.g() * sd.g() * sd.gamma() / (o2 * o2);
    }
    return std::numbers::pi * kHbar * sd(w) * temp.coth_factor(w);
}

double cosine_transform_of_samples(const std::vector<double>& samples, double h, double omega) {
    if (samples.empty()) return 0.0;
    double acc = 0.5 * samples.front();
    for (std::size_t j = 1; j + 1 < samples.size(); ++j) acc += samples[j] * std::cos(omega * h * static_cast<double>(j));
    if (samples.size() > 1) {
        const std::size_t last = samples.size() - 1;
        acc += 0.5 * samples[last] * std::cos(omega * h * static_cast<double>(last));
    }
    return 2.0 * h * acc;
}

SampledKernelTransform::SampledKernelTransform(const LorentzianSpectralDensity& sd, unsigned threads)
    : h_(std::min(1.0 / 64.0, 0.2 / (sd.omega() + 10.0 * sd.gamma()))) {
    const double t_end = 2.0 * std::log(1e11) / sd.gamma();
    const auto n = static_cast<std::size_t>(std::ceil(t_end / h_)) + 1;
    auto f = [&sd](const auto& x) { return sd(x) / x; };
    samples_ = quad::cosine_integral_on_grid(f, h_, n, sd.scale(), {}, threads);
}

namespace {

double residual(const LorentzianSpectralDensity& sd, Temperature temp, double w, double transform) {
    const double s_w = noise_psd(sd, temp, w);
    return std::abs(s_w - kHbar * w * temp.coth_factor(w) * transform) / s_w;
}

}  // namespace

double fdt_residual(const LorentzianSpectralDensity& sd, Temperature temp, double omega, FdtPath path) {
    if (omega == 0.0 || !std::isfinite(omega)) throw std::invalid_argument("fdt_residual: omega must be nonzero");
    const double w = std::abs(omega);
    if (path == FdtPath::analytic) return residual(sd, temp, w, kernel_cosine_transform(sd, w));
    return residual(sd, temp, w, SampledKernelTransform(sd)(w));
}

double fdt_residual(const LorentzianSpectralDensity& sd, Temperature temp, double omega,
                    const SampledKernelTransform& transform) {
    if (omega == 0.0 || !std::isfinite(omega)) throw std::invalid_argument("fdt_residual: omega must be nonzero");
    const double w = std::abs(omega);
    return residual(sd, temp, w, transform(w));
}

double quantum_criterion(double omega0, Temperature temp) {
    if (!(omega0 > 0.0)) throw std::invalid_argument("quantum_criterion: omega0 must be > 0");
    return temp.coth_factor(omega0);
}

}  // namespace phf
