#pragma once

// Retarded Green's function of
//     G'' + w0^2 G + int_0^t gamma(t - s) G'(s) ds = 0,  G(0) = 0, G'(0) = 1
// and the first and second moments of the driven mode built from it.
//
// Initial-value coefficients. With Q0 = Q(t0), V0 = Q'(t0) and a Gibbs-initialised
// bath, the Laplace solution reads
//     Q(t) = b(t) Q0 + G(t) V0 + int G(t - s) [xi(s) + F(s)] ds
//     Q'(t) = a(t) Q0 + G'(t) V0 + int G'(t - s) [xi(s) + F(s)] ds
// For the exact finite-t0 dynamics (the slip force -gamma(t - t0) Q0 kept in the
// equation of motion) b = G' and a = G''. Dropping the slip force, as in the
// remote-past limit, gives b = h = G' + gamma*G and a = h' = -w0^2 G.

#include <cstddef>
#include <string>
#include <vector>

#include "phf/bath.hpp"
#include "phf/grid.hpp"
#include "phf/pulse.hpp"
#include "phf/units.hpp"

namespace phf {

enum class GreenMethod { volterra, embedding };

std::string to_string(GreenMethod m);
GreenMethod parse_green_method(const std::string& s);

struct GreenOptions {
    GreenMethod method = GreenMethod::embedding;
    bool slip = true;
    /// Volterra only: Richardson levels on dt/2, dt/4, ... (0 = plain second-order scheme).
    unsigned richardson = 0;
};

struct GreenFunction {
    TimeGrid grid;
    std::vector<double> G;       // ps
    std::vector<double> Gdot;    // dimensionless
    std::vector<double> Gddot;   // 1/ps
    std::vector<double> memory;  // int_0^t gamma(t - s) G'(s) ds
    std::vector<double> q0_position;  // b(t): coefficient of Q(t0) in Q(t)
    std::vector<double> q0_velocity;  // a(t): coefficient of Q(t0) in Q'(t)
    GreenMethod method = GreenMethod::embedding;
    bool slip = true;
    double omega0 = 0.0;
};

/// Throws NumericalError on instability (|G| beyond 1e6 times its first-period
/// maximum) or when the embedding is requested without a validated fast kernel.
GreenFunction solve_green(const FrictionKernel& kernel, double omega0, const TimeGrid& grid,
                          const GreenOptions& opt = {});

/// Residual of the trapezoidal discretisation of the integro-differential
/// equation evaluated on the solution: max_n |G''_n + w0^2 G_n + M_n| with G''
/// from centred differences and M the trapezoidal memory sum.
double green_residual(const GreenFunction& gf, const std::vector<double>& gamma_samples);

struct GibbsMoments {
    double qq = 0.0;  // <Q^2>
    double vv = 0.0;  // <Q'^2>
    double qv = 0.0;  // symmetrised <{Q, Q'}>/2
};

GibbsMoments gibbs_initial_moments(double omega0, Temperature temp);
/// Equipartition: qq = kB T / w0^2, vv = kB T.
GibbsMoments classical_initial_moments(double omega0, Temperature temp);
GibbsMoments initial_moments(double omega0, Temperature temp, NoiseModel model);

/// First time after which |G| stays below `fraction` of its maximum (grid end if never).
double green_decay_time(const GreenFunction& gf, double fraction = 1e-3);

std::vector<double> pulse_samples(const GaussianPulse& p, const TimeGrid& grid);
std::vector<double> pulse_rate_samples(const GaussianPulse& p, const TimeGrid& grid);

/// <Q(t)> = int_{t0}^t G(t - s) F(s) ds, trapezoidal (FFT).
std::vector<double> mean_displacement(const GreenFunction& gf, const GaussianPulse& p, const TimeGrid& grid);
/// <Q'(t)> = int_{t0}^t G'(t - s) F(s) ds.
std::vector<double> mean_velocity(const GreenFunction& gf, const GaussianPulse& p, const TimeGrid& grid);

/// Phi_n = int_0^{t_n} int_0^{t_n} u(x) eta(x - y) w(y) dx dy for every n with
/// trapezoidal weights in both variables; O(n log n).
std::vector<double> noise_quadratic_form(const std::vector<double>& u, const std::vector<double>& w,
                                         const std::vector<double>& eta, double h);

struct TrajectoryBundle {
    TimeGrid grid;
    std::vector<double> mean_Q;
    std::vector<double> mean_V;
    std::vector<double> var_Q;  // uncentred <Q^2>
    std::vector<double> var_V;  // uncentred <Q'^2>
};

/// Uncentred second moments
///   <Q^2>  = b^2 qq + G^2 vv + <Q>^2 + Phi(G, G) / 2
///   <Q'^2> = a^2 qq + G'^2 vv + <Q'>^2 + Phi(G', G') / 2
/// (eta is the full anticommutator, hence the 1/2).
TrajectoryBundle variance_series(const GreenFunction& gf, const GaussianPulse& p, const std::vector<double>& eta,
                                 const GibbsMoments& moments, const TimeGrid& grid);

/// Row t_index of C(t, s) = <{Q'(t), Q'(s)}> for s = 0..t_index:
///   2 a(t) a(s) qq + 2 G'(t) G'(s) vv + 2 <Q'(t)><Q'(s)>
///   + int_0^t int_0^s G'(t - u) G'(s - v) eta(u - v) du dv
/// `mean_v` is mean_velocity on the same grid.
std::vector<double> velocity_correlation_row(const GreenFunction& gf, const std::vector<double>& mean_v,
                                             const std::vector<double>& eta, const GibbsMoments& moments,
                                             std::size_t t_index);

/// chi(w) = 1 / (w0^2 - w^2 + i w gamma_hat(w))
std::complex<double> response_function(const FrictionKernel& kernel, double omega0, double omega);

}  // namespace phf
