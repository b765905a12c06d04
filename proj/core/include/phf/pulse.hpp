#pragma once

#include <complex>

namespace phf {

/// F(t) = ZE0 exp(-(t - tau0)^2 / (2 tau^2)) cos(w_c t)
class GaussianPulse {
public:
    GaussianPulse(double amplitude, double center, double width, double carrier);

    double amplitude() const noexcept { return amplitude_; }
    double center() const noexcept { return center_; }
    double width() const noexcept { return width_; }
    double carrier() const noexcept { return carrier_; }

    double envelope(double t) const noexcept;

    /// FWHM of each spectral sideband, 2 sqrt(2 ln 2) / tau.
    double spectral_fwhm() const noexcept;

private:
    double amplitude_, center_, width_, carrier_;
};

double force(const GaussianPulse& p, double t) noexcept;

/// dF/dt, analytic.
double force_rate(const GaussianPulse& p, double t) noexcept;

/// F~(w) = int F(t) e^{-iwt} dt
///       = (ZE0 tau sqrt(2 pi) / 2) sum_{s=+-1} exp(-(w - s w_c)^2 tau^2 / 2 - i (w - s w_c) tau0)
std::complex<double> force_spectrum(const GaussianPulse& p, double omega) noexcept;

}  // namespace phf
