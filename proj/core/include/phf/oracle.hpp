#pragma once

// Finite-bath reference: the Caldeira-Leggett Hamiltonian with N explicit bath
// modes,
//     H = P^2/2 + w0^2 Q^2/2 - F(t) Q
//       + sum_k [p_k^2/2 + w_k^2 q_k^2/2 - g_k q_k Q + g_k^2 Q^2 / (2 w_k^2)],
// propagated exactly as a Gaussian state from a factorised Gibbs state.

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phf/bath.hpp"
#include "phf/grid.hpp"
#include "phf/pulse.hpp"
#include "phf/units.hpp"

namespace phf {

enum class BathScheme { linear, gauss_legendre };

std::string to_string(BathScheme s);
BathScheme parse_bath_scheme(const std::string& s);

struct DiscretizedBath {
    std::vector<double> omegas;     // w_k, rad/ps
    std::vector<double> couplings;  // g_k
    BathScheme scheme = BathScheme::linear;
    double omega_max = 0.0;
    double delta_omega = 0.0;       // grid spacing (largest gap for Gauss-Legendre)
    double recurrence_time = 0.0;   // 2 pi / delta_omega
    std::size_t size() const noexcept { return omegas.size(); }

    /// sum_k g_k^2 / w_k^2 cos(w_k t)
    double kernel(double t) const;
};

/// Throws std::invalid_argument when N < 2, omega_max <= Omega + 10 Gamma, or
/// the spectral weight beyond omega_max exceeds 0.5% of gamma(0).
DiscretizedBath discretize_bath(const LorentzianSpectralDensity& sd, std::size_t n, double omega_max,
                                BathScheme scheme = BathScheme::linear);

/// int_{omega_max}^inf J(w)/w dw / gamma(0)
double tail_fraction(const LorentzianSpectralDensity& sd, double omega_max);

/// Coordinates x = (Q, P, q_1, p_1, ..., q_N, p_N).
struct LinearDynamics {
    Eigen::MatrixXd stiffness;  // K, (N+1) x (N+1), positions only
    Eigen::MatrixXd drift;      // A, 2(N+1) x 2(N+1)
    GaussianPulse pulse;
    double omega0 = 0.0;
    bool counter_term = true;
    double counter_term_strength = 0.0;  // sum g_k^2 / w_k^2
    DiscretizedBath bath;

    std::size_t modes() const noexcept { return static_cast<std::size_t>(stiffness.rows()); }
    /// b(t) = F(t) e_P
    Eigen::VectorXd drive(double t) const;
};

LinearDynamics build_dynamics(const DiscretizedBath& db, double omega0, const GaussianPulse& p,
                              bool counter_term = true);

struct GaussianState {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;  // centred, symmetrised
};

/// Factorised Gibbs state: bare system oscillator (w0) and uncoupled bath modes.
GaussianState initial_state(const DiscretizedBath& db, double omega0, Temperature temp);

/// Symplectic (Williamson) eigenvalues of cov, ascending.
std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& cov);

/// Moments per grid point. Second moments are uncentred.
struct StateSummary {
    double mean_Q = 0.0, mean_P = 0.0;
    double QQ = 0.0, PP = 0.0, QP = 0.0;
    double XQ = 0.0;  // <(sum_k g_k q_k) Q>
    double E_B = 0.0; // sum_k <p_k^2 + w_k^2 q_k^2> / 2
};

struct PropagationResult {
    TimeGrid grid;
    std::vector<StateSummary> summaries;
    GaussianState final_state;
    double step_symplectic_error = 0.0;
};

/// Exact propagation with the precomputed one-step map exp(A dt); the drive
/// integral per step uses 4-point Gauss. O(dim^3) per step: small baths only.
/// Refuses (NumericalError) if exp(A dt) is not symplectic to 1e-10.
PropagationResult propagate(const GaussianState& state, const LinearDynamics& dyn, const TimeGrid& grid);

/// Same summaries in the normal-mode basis of K for a factorised initial
/// state (zero q-p covariance, zero means). Time blocks are batched into GEMMs.
std::vector<StateSummary> propagate_normal_modes(const GaussianState& state, const LinearDynamics& dyn,
                                                 const TimeGrid& grid);

struct EnergyLedger {
    TimeGrid grid;
    std::vector<double> U_S, E_B, E_SB, E_tot, W_rate, mean_Q, mean_P, QQ, PP;
};

/// U_S = <P^2>/2 + w0^2 <Q^2>/2 - F <Q>;  E_SB = -<XQ> + c <Q^2>/2 with c the
/// counter-term strength;  W_rate = -F' <Q>.
EnergyLedger energy_ledger(const std::vector<StateSummary>& states, const LinearDynamics& dyn,
                           const TimeGrid& grid);

/// Sixth-order centred finite difference (one-sided sixth order at the ends).
std::vector<double> derivative6(const std::vector<double>& f, double h);

/// J = dU_S/dt - W_rate.
std::vector<double> oracle_heat_current(const EnergyLedger& ledger);

struct LedgerResiduals {
    double work_balance = 0.0;   // max |dE_tot/dt - W_rate| / max |W_rate|
    double heat_identity = 0.0;  // max |J + d(E_B + E_SB)/dt| / max |J|
};

LedgerResiduals ledger_residuals(const EnergyLedger& ledger);

}  // namespace phf
