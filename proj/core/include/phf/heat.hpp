#pragma once

// Heat current between the driven mode and the bath. Sign convention: J > 0
// means energy flows from the bath into the mode.

#include <cstddef>
#include <vector>

#include "phf/bath.hpp"
#include "phf/gle.hpp"
#include "phf/grid.hpp"
#include "phf/pulse.hpp"

namespace phf {

struct HeatSeries {
    TimeGrid grid;
    std::vector<double> J_kernel;
    std::vector<double> J_dissipative;
    std::vector<double> J_fluctuation;
    std::vector<double> J_direct;      // filled by attach_direct
    std::vector<double> Q_integrated;  // running trapezoid of J_kernel
};

/// Kernel form
///   J(t) = -1/2 int_0^t gamma(t - s) C(t, s) ds + 1/2 int_0^t G'(t - s) eta(t - s) ds
/// with C = <{Q'(t), Q'(s)}>. The s-integral is done in closed form per term:
///   -a qq (gamma*a) - G' vv (gamma*G') - <Q'> (gamma*<Q'>) - Phi(G', gamma*G') / 2
/// When the slip force is kept, -1/2 gamma(t) <{Q'(t), Q(t0)}> = -gamma(t) a(t) qq
/// joins the dissipative part. O(n log n).
HeatSeries heat_current_kernel_form(const GreenFunction& gf, const FrictionKernel& kernel,
                                    const std::vector<double>& eta, const GaussianPulse& p,
                                    const GibbsMoments& moments, const TimeGrid& grid);

/// Same quantity from explicit velocity-correlation rows, O(n^2 log n).
/// Reference path for tests; rows are distributed over `threads`.
HeatSeries heat_current_kernel_rows(const GreenFunction& gf, const FrictionKernel& kernel,
                                    const std::vector<double>& eta, const GaussianPulse& p,
                                    const GibbsMoments& moments, const TimeGrid& grid, unsigned threads = 1);

/// Kernel form on `grid` and on the half-step grid, combined as
/// (4 J_{h/2} - J_h) / 3 at the common points. Removes the O(dt^2) bias that
/// otherwise dominates the small post-pulse currents.
HeatSeries heat_current_extrapolated(const FrictionKernel& kernel, Temperature temp, double omega0,
                                     const GaussianPulse& p, const TimeGrid& grid, const GreenOptions& opt = {},
                                     NoiseModel noise = NoiseModel::quantum, unsigned threads = 1);

struct DirectHeat {
    std::vector<double> J;
    double fd_noise = 0.0;  // max |2nd-order - 4th-order derivative| / max |J|
    bool resolution_ok = true;
};

/// J = d/dt [<Q'^2>/2 + w0^2 <Q^2>/2 - F <Q>] + F' <Q> by centred differences.
DirectHeat heat_current_direct(const TrajectoryBundle& traj, const GaussianPulse& p, double omega0,
                               const TimeGrid& grid);

/// Stores J_direct into hs (grids must match).
void attach_direct(HeatSeries& hs, const DirectHeat& direct);

/// int_{t0}^{upto} J_kernel dt (trapezoid; linear inside the last cell).
double integrated_heat(const HeatSeries& hs, double upto);

struct MarkovianModel {
    double gamma0;
    Temperature temp;
    MarkovianModel(double gamma0, Temperature temp);
};

/// J = -gamma0 <Q'^2> + gamma0 kB T
std::vector<double> markovian_heat_current(const MarkovianModel& mm, const std::vector<double>& vv);

/// Re gamma_hat(w0), the rate a local kernel must carry to match at resonance.
double matched_markov_rate(const FrictionKernel& kernel, double omega0);

/// 20 / Gamma: after this the kernel has forgotten the factorised start and a
/// local-in-time description can apply.
double initial_slip_time(const LorentzianSpectralDensity& sd);

struct NonMarkovianity {
    double value = 0.0;     // backflow / total, in [0, 1]
    double backflow = 0.0;  // int max(0, J)
    double total = 0.0;     // int |J|
    bool defined = false;   // false when total is negligible
};

NonMarkovianity nonmarkovianity_indicator(const std::vector<double>& J, const TimeGrid& grid, double t_p,
                                          double tau_max);

/// t_p = tau0 + 3 tau
double pulse_end_time(const GaussianPulse& p);

/// First time after t_p at which |Q| and |J| both stay below 1% of their
/// post-pulse maxima for `hold` ps; capped at the grid end.
double relaxation_time(const std::vector<double>& Q, const std::vector<double>& J, const TimeGrid& grid, double t_p,
                       double hold = 5.0);

struct EnvelopePeak {
    double t;
    double value;
};

/// Half-cycle maxima of |x| for t >= from.
std::vector<EnvelopePeak> envelope_peaks(const std::vector<double>& x, const TimeGrid& grid, double from);

/// A local minimum of the envelope followed by regrowth above `factor` times it.
bool has_revival(const std::vector<EnvelopePeak>& peaks, double factor = 3.0);

/// Successive peaks never grow by more than rel_tol.
bool decays_monotonically(const std::vector<EnvelopePeak>& peaks, double rel_tol = 1e-9);

/// Sign changes of J in [from, to], ignoring samples with |J| below `floor`.
std::size_t sign_changes(const std::vector<double>& J, const TimeGrid& grid, double from, double to,
                         double floor = 0.0);

/// Fraction of samples in [from, to] with J <= 0.
double fraction_nonpositive(const std::vector<double>& J, const TimeGrid& grid, double from, double to);

}  // namespace phf
