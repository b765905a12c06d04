#pragma once

// Unit system: amu, angstrom, picosecond, kelvin. Angular frequencies are in
// rad/ps; ordinary frequencies (THz) only appear at the configuration boundary.

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace phf {

struct PhysicalConstants {
    // CODATA 2018 SI values re-expressed in (amu, A, ps).
    static constexpr double joule_per_amu_a2_ps2 = 1.66053906660e-27 * 1e-20 / 1e-24;
    static constexpr double hbar = 1.054571817e-34 / (joule_per_amu_a2_ps2 * 1e-12);  // amu A^2 / ps
    static constexpr double kB = 1.380649e-23 / joule_per_amu_a2_ps2;                  // amu A^2 / ps^2 / K
};

inline constexpr double kHbar = PhysicalConstants::hbar;
inline constexpr double kBoltzmann = PhysicalConstants::kB;

/// Ordinary frequency in THz to angular frequency in rad/ps.
constexpr double thz_to_rad_per_ps(double f_thz) noexcept { return 2.0 * std::numbers::pi * f_thz; }

/// Bath/phonon temperature. T = 0 is a first-class state: beta is reported as
/// +inf and every coth(beta*hbar*w/2) factor collapses to exactly 1.
class Temperature {
public:
    constexpr Temperature() = default;
    explicit Temperature(double kelvin) : kelvin_(kelvin) {
        if (!(kelvin >= 0.0) || !std::isfinite(kelvin)) {
            throw std::invalid_argument("temperature must be finite and >= 0 K");
        }
    }

    constexpr double kelvin() const noexcept { return kelvin_; }
    constexpr bool is_zero() const noexcept { return kelvin_ == 0.0; }

    double beta() const noexcept {
        return is_zero() ? std::numeric_limits<double>::infinity() : 1.0 / (kBoltzmann * kelvin_);
    }

    double thermal_energy() const noexcept { return kBoltzmann * kelvin_; }

    /// coth(beta*hbar*omega/2) for omega > 0.
    double coth_factor(double omega) const noexcept {
        if (is_zero()) return 1.0;
        return 1.0 / std::tanh(0.5 * kHbar * omega / thermal_energy());
    }

private:
    double kelvin_ = 0.0;
};

}  // namespace phf
