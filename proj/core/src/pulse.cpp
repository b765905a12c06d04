#include "phf/pulse.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace phf {

GaussianPulse::GaussianPulse(double amplitude, double center, double width, double carrier)
    : amplitude_(amplitude), center_(center), width_(width), carrier_(carrier) {
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw std::invalid_argument("pulse amplitude must be >= 0");
    if (!(width > 0.0) || !std::isfinite(width)) throw std::invalid_argument("pulse width tau must be > 0");
    if (!std::isfinite(center) || !std::isfinite(carrier)) throw std::invalid_argument("pulse center/carrier must be finite");
}

double GaussianPulse::envelope(double t) const noexcept {
    const double x = (t - center_) / width_;
    return amplitude_ * std::exp(-0.5 * x * x);
}

double GaussianPulse::spectral_fwhm() const noexcept { return 2.0 * std::sqrt(2.0 * std::numbers::ln2) / width_; }

double force(const GaussianPulse& p, double t) noexcept { return p.envelope(t) * std::cos(p.carrier() * t); }

double force_rate(const GaussianPulse& p, double t) noexcept {
    const double e = p.envelope(t);
    const double wc = p.carrier();
    return e * (-(t - p.center()) / (p.width() * p.width()) * std::cos(wc * t) - wc * std::sin(wc * t));
}

std::complex<double> force_spectrum(const GaussianPulse& p, double omega) noexcept {
    const double tau = p.width();
    const double weight = 0.5 * p.amplitude() * tau * std::sqrt(2.0 * std::numbers::pi);
    std::complex<double> sum = 0.0;
    for (double s : {1.0, -1.0}) {
        const double d = omega - s * p.carrier();
        sum += std::exp(-0.5 * d * d * tau * tau) * std::polar(1.0, -d * p.center());
    }
    return weight * sum;
}

}  // namespace phf
