#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "phf/bath.hpp"
#include "phf/pulse.hpp"

namespace phf::test {

inline constexpr double kW0 = 2.0 * std::numbers::pi;

/// w0 = Omega = 2 pi rad/ps, Gamma = 0.1 w0, g = 0.3 w0^2.
inline LorentzianSpectralDensity ref_bath(double g_rel = 0.3) {
    return LorentzianSpectralDensity(g_rel * kW0 * kW0, 0.1 * kW0, kW0);
}

inline GaussianPulse ref_pulse(double tau = 1.0, double amplitude = 10.0) {
    return GaussianPulse(amplitude, tau > 1.0 ? 3.0 * tau : 5.0, tau, kW0);
}

inline double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace phf::test
