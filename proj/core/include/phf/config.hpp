#pragma once

// Run configuration: flat `key = value` text with dotted section prefixes.
// Frequencies are ordinary THz in the file and rad/ps everywhere else.
// Bath widths and couplings are relative to the bath centre Omega:
//     Gamma = Gamma_rel * Omega,  g = g_rel * Omega^2.

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "phf/bath.hpp"
#include "phf/gle.hpp"
#include "phf/grid.hpp"
#include "phf/oracle.hpp"
#include "phf/pulse.hpp"
#include "phf/units.hpp"

namespace phf {

struct RunConfig {
    double temperature_K = 70.0;
    double omega0_THz = 1.0;

    double Omega_THz = 1.0;
    double Gamma_rel = 0.1;
    double g_rel = 0.3;
    NoiseModel noise = NoiseModel::quantum;

    double ZE0 = 10.0;
    double tau0_ps = 5.0;
    double tau_ps = 1.0;
    std::optional<double> carrier_THz;  // defaults to omega0_THz

    double t0 = 0.0;
    double dt = 1.0 / 256.0;
    double horizon = 40.0;

    GreenMethod green = GreenMethod::embedding;
    bool slip = true;
    bool fast_kernel = true;
    unsigned richardson = 0;
    bool extrapolate_heat = true;

    std::size_t oracle_N = 800;
    double oracle_omega_max_rel = 6.0;
    BathScheme oracle_scheme = BathScheme::linear;
    bool oracle_counter_term = true;

    std::optional<double> t_p;
    std::optional<double> tau_max;
    double relax_hold_ps = 5.0;
    std::vector<double> tau_list_ps;  // heat/criterion scenarios; empty = {tau_ps}

    std::string output_dir = "out";
    bool svg = true;
    std::string mode_table;  // optional CSV (temperature_K, omega0_THz)

    std::set<std::string> explicit_keys;
    std::vector<std::string> adjustments;  // automatic changes, for the manifest

    double omega0() const { return thz_to_rad_per_ps(omega0_THz); }
    double Omega() const { return thz_to_rad_per_ps(Omega_THz); }
    double Gamma() const { return Gamma_rel * Omega(); }
    double g() const { return g_rel * Omega() * Omega(); }
    double carrier() const { return thz_to_rad_per_ps(carrier_THz.value_or(omega0_THz)); }

    LorentzianSpectralDensity density() const;
    GaussianPulse pulse() const;
    TimeGrid grid() const;
    Temperature temperature() const { return Temperature(temperature_K); }
    GreenOptions green_options() const { return {green, slip, richardson}; }

    /// Copy with pulse.tau_ps = tau and the automatic tau0/horizon rule applied.
    RunConfig with_tau(double tau) const;

    /// Every key with its value, sorted; the basis of config_hash.
    std::string canonical() const;
    std::string config_hash() const;
};

/// For tau > 1 ps, unless set explicitly: tau0 = max(5, 3 tau), horizon = max(40, tau0 + 9 tau).
void apply_pulse_rules(RunConfig& cfg);

/// Throws ConfigError naming the key on malformed values, unknown keys and
/// constraint violations. `overrides` are applied after the file.
RunConfig parse_config_text(const std::string& text, const std::string& origin,
                            const std::vector<std::pair<std::string, std::string>>& overrides = {});
RunConfig parse_config(const std::string& path,
                       const std::vector<std::pair<std::string, std::string>>& overrides = {});

/// Re-check every physical constraint.
void validate(const RunConfig& cfg);

/// "key=value" -> pair; throws ConfigError when '=' is missing.
std::pair<std::string, std::string> split_override(const std::string& kv);

struct ExternalModeTable {
    std::vector<double> temperature_K;
    std::vector<double> omega0_THz;
};

/// CSV with header `temperature_K,omega0_THz`; '#' starts a comment.
ExternalModeTable read_mode_table(const std::string& path);

}  // namespace phf
