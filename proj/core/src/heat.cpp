#include "phf/heat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "phf/errors.hpp"
#include "phf/parallel.hpp"

namespace phf {

namespace {

double max_abs(const std::vector<double>& v, std::size_t lo = 0, std::size_t hi = std::size_t(-1)) {
    hi = std::min(hi, v.size());
    double m = 0.0;
    for (std::size_t i = lo; i < hi; ++i) m = std::max(m, std::abs(v[i]));
    return m;
}

void finish(HeatSeries& hs) {
    const std::size_t n = hs.grid.n;
    hs.J_kernel.resize(n);
    for (std::size_t i = 0; i < n; ++i) hs.J_kernel[i] = hs.J_dissipative[i] + hs.J_fluctuation[i];
    hs.Q_integrated = cumulative_trapezoid(hs.J_kernel, hs.grid.dt);
}

// 1/2 int_0^t G'(x) eta(x) dx
std::vector<double> fluctuation_part(const GreenFunction& gf, const std::vector<double>& eta) {
    std::vector<double> prod(gf.grid.n);
    for (std::size_t i = 0; i < gf.grid.n; ++i) prod[i] = gf.Gdot[i] * eta[i];
    auto out = cumulative_trapezoid(prod, gf.grid.dt);
    for (auto& x : out) x *= 0.5;
    return out;
}

}  // namespace

HeatSeries heat_current_kernel_form(const GreenFunction& gf, const FrictionKernel& kernel,
                                    const std::vector<double>& eta, const GaussianPulse& p,
                                    const GibbsMoments& moments, const TimeGrid& grid) {
    require_same_grid(gf.grid, grid, "heat_current_kernel_form");
    if (eta.size() < grid.n) throw GridMismatch("heat_current_kernel_form: eta shorter than the grid");
    const double h = grid.dt;
    const auto gamma = kernel.samples(h, grid.n);
    const auto& a = gf.q0_velocity;
    const auto vbar = mean_velocity(gf, p, grid);

    const auto m = trapezoid_convolution(gamma, gf.Gdot, h);
    const auto ga = trapezoid_convolution(gamma, a, h);
    const auto gv = trapezoid_convolution(gamma, vbar, h);
    const auto phi = noise_quadratic_form(gf.Gdot, m, eta, h);

    HeatSeries hs;
    hs.grid = grid;
    hs.J_dissipative.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        double d = -a[i] * moments.qq * ga[i] - gf.Gdot[i] * moments.vv * m[i] -
                   moments.qv * (a[i] * m[i] + gf.Gdot[i] * ga[i]) - vbar[i] * gv[i] - 0.5 * phi[i];
        if (gf.slip) d -= gamma[i] * (a[i] * moments.qq + gf.Gdot[i] * moments.qv);
        hs.J_dissipative[i] = d;
    }
    hs.J_fluctuation = fluctuation_part(gf, eta);
    finish(hs);
    return hs;
}

HeatSeries heat_current_kernel_rows(const GreenFunction& gf, const FrictionKernel& kernel,
                                    const std::vector<double>& eta, const GaussianPulse& p,
                                    const GibbsMoments& moments, const TimeGrid& grid, unsigned threads) {
    require_same_grid(gf.grid, grid, "heat_current_kernel_rows");
    if (eta.size() < grid.n) throw GridMismatch("heat_current_kernel_rows: eta shorter than the grid");
    const double h = grid.dt;
    const auto gamma = kernel.samples(h, grid.n);
    const auto vbar = mean_velocity(gf, p, grid);

    HeatSeries hs;
    hs.grid = grid;
    hs.J_dissipative.assign(grid.n, 0.0);
    constexpr std::size_t kRows = 16;
    parallel_blocks((grid.n + kRows - 1) / kRows, threads, [&](std::size_t b) {
        const std::size_t hi = std::min(grid.n, (b + 1) * kRows);
        for (std::size_t t = b * kRows; t < hi; ++t) {
            double acc = 0.0;
            if (t > 0) {
                const auto row = velocity_correlation_row(gf, vbar, eta, moments, t);
                for (std::size_t s = 0; s <= t; ++s) {
                    const double w = (s == 0 || s == t) ? 0.5 * h : h;
                    acc += w * gamma[t - s] * row[s];
                }
            }
            double d = -0.5 * acc;
            if (gf.slip) d -= gamma[t] * (gf.q0_velocity[t] * moments.qq + gf.Gdot[t] * moments.qv);
            hs.J_dissipative[t] = d;
        }
    });
    hs.J_fluctuation = fluctuation_part(gf, eta);
    finish(hs);
    return hs;
}

HeatSeries heat_current_extrapolated(const FrictionKernel& kernel, Temperature temp, double omega0,
                                     const GaussianPulse& p, const TimeGrid& grid, const GreenOptions& opt,
                                     NoiseModel noise, unsigned threads) {
    const auto moments = initial_moments(omega0, temp, noise);
    const auto run = [&](const TimeGrid& g) {
        const auto gf = solve_green(kernel, omega0, g, opt);
        const auto eta = noise_series(kernel, temp, noise, g.dt, g.n, threads);
        return heat_current_kernel_form(gf, kernel, eta, p, moments, g);
    };
    const HeatSeries coarse = run(grid);
    const HeatSeries fine = run(TimeGrid(grid.t0, 0.5 * grid.dt, 2 * grid.n - 1));
    HeatSeries hs;
    hs.grid = grid;
    hs.J_dissipative.resize(grid.n);
    hs.J_fluctuation.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        hs.J_dissipative[i] = (4.0 * fine.J_dissipative[2 * i] - coarse.J_dissipative[i]) / 3.0;
        hs.J_fluctuation[i] = (4.0 * fine.J_fluctuation[2 * i] - coarse.J_fluctuation[i]) / 3.0;
    }
    finish(hs);
    return hs;
}

DirectHeat heat_current_direct(const TrajectoryBundle& traj, const GaussianPulse& p, double omega0,
                               const TimeGrid& grid) {
    require_same_grid(traj.grid, grid, "heat_current_direct");
    for (const auto* s : {&traj.mean_Q, &traj.var_Q, &traj.var_V}) require_length(grid, s->size(), "heat_current_direct");
    const std::size_t n = grid.n;
    const double h = grid.dt;
    const auto f = pulse_samples(p, grid);
    const auto fdot = pulse_rate_samples(p, grid);
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = 0.5 * traj.var_V[i] + 0.5 * omega0 * omega0 * traj.var_Q[i] - f[i] * traj.mean_Q[i];
    }
    DirectHeat out;
    out.J = centred_derivative(u, h);
    for (std::size_t i = 0; i < n; ++i) out.J[i] += fdot[i] * traj.mean_Q[i];

    double noise = 0.0;
    for (std::size_t k = 2; k + 2 < n; ++k) {
        const double d4 = (-u[k + 2] + 8.0 * u[k + 1] - 8.0 * u[k - 1] + u[k - 2]) / (12.0 * h);
        const double d2 = (u[k + 1] - u[k - 1]) / (2.0 * h);
        noise = std::max(noise, std::abs(d2 - d4));
    }
    const double scale = max_abs(out.J);
    out.fd_noise = scale > 0.0 ? noise / scale : 0.0;
    out.resolution_ok = out.fd_noise <= 0.01;
    return out;
}

void attach_direct(HeatSeries& hs, const DirectHeat& direct) {
    require_length(hs.grid, direct.J.size(), "attach_direct");
    hs.J_direct = direct.J;
}

double integrated_heat(const HeatSeries& hs, double upto) {
    const auto& g = hs.grid;
    if (upto < g.t0 - 1e-12 || upto > g.t_end() + 1e-12) {
        throw std::out_of_range("integrated_heat: upto outside the grid");
    }
    const std::size_t i = g.index_at(upto);
    double q = hs.Q_integrated[i];
    if (i + 1 < g.n) {
        const double x = upto - g.t(i);
        if (x > 0.0) {
            const double jx = hs.J_kernel[i] + (hs.J_kernel[i + 1] - hs.J_kernel[i]) * x / g.dt;
            q += 0.5 * x * (hs.J_kernel[i] + jx);
        }
    }
    return q;
}

MarkovianModel::MarkovianModel(double gamma0_, Temperature temp_) : gamma0(gamma0_), temp(temp_) {
    if (!(gamma0 > 0.0) || !std::isfinite(gamma0)) throw std::invalid_argument("MarkovianModel: gamma0 must be > 0");
}

std::vector<double> markovian_heat_current(const MarkovianModel& mm, const std::vector<double>& vv) {
    std::vector<double> j(vv.size());
    const double kt = mm.temp.thermal_energy();
    for (std::size_t i = 0; i < vv.size(); ++i) j[i] = -mm.gamma0 * vv[i] + mm.gamma0 * kt;
    return j;
}

double matched_markov_rate(const FrictionKernel& kernel, double omega0) {
    return kernel.causal_transform(omega0).real();
}

double initial_slip_time(const LorentzianSpectralDensity& sd) { return 20.0 / sd.gamma(); }

NonMarkovianity nonmarkovianity_indicator(const std::vector<double>& J, const TimeGrid& grid, double t_p,
                                          double tau_max) {
    require_length(grid, J.size(), "nonmarkovianity_indicator");
    if (!(t_p < tau_max)) throw std::invalid_argument("nonmarkovianity_indicator: need t_p < tau_max");
    if (t_p < grid.t0 || tau_max > grid.t_end() + 1e-12) {
        throw std::out_of_range("nonmarkovianity_indicator: window outside the grid");
    }
    const std::size_t lo = grid.index_at(t_p), hi = grid.index_at(tau_max);
    NonMarkovianity r;
    for (std::size_t k = lo; k < hi; ++k) {
        const double w = 0.5 * grid.dt;
        r.backflow += w * (std::max(0.0, J[k]) + std::max(0.0, J[k + 1]));
        r.total += w * (std::abs(J[k]) + std::abs(J[k + 1]));
    }
    const double scale = max_abs(J) * (tau_max - t_p);
    r.defined = r.total > 1e-12 * scale && scale > 0.0;
    r.value = r.defined ? r.backflow / r.total : 0.0;
    return r;
}

double pulse_end_time(const GaussianPulse& p) { return p.center() + 3.0 * p.width(); }

double relaxation_time(const std::vector<double>& Q, const std::vector<double>& J, const TimeGrid& grid, double t_p,
                       double hold) {
    require_length(grid, Q.size(), "relaxation_time");
    require_length(grid, J.size(), "relaxation_time");
    const std::size_t lo = grid.index_at(t_p);
    const double qmax = max_abs(Q, lo), jmax = max_abs(J, lo);
    const auto need = static_cast<std::size_t>(std::ceil(hold / grid.dt));
    std::size_t run = 0;
    // Scan backwards: run = number of consecutive quiet samples starting at k.
    std::size_t best = grid.n;
    for (std::size_t k = grid.n; k-- > lo;) {
        const bool quiet = std::abs(Q[k]) <= 0.01 * qmax && std::abs(J[k]) <= 0.01 * jmax;
        run = quiet ? run + 1 : 0;
        if (run > need) best = k;
    }
    return best < grid.n ? grid.t(best) : grid.t_end();
}

std::vector<EnvelopePeak> envelope_peaks(const std::vector<double>& x, const TimeGrid& grid, double from) {
    require_length(grid, x.size(), "envelope_peaks");
    std::vector<EnvelopePeak> peaks;
    const std::size_t lo = std::max<std::size_t>(1, grid.index_at(from));
    for (std::size_t k = lo; k + 1 < grid.n; ++k) {
        const double a = std::abs(x[k]);
        if (a >= std::abs(x[k - 1]) && a > std::abs(x[k + 1])) peaks.push_back({grid.t(k), a});
    }
    return peaks;
}

namespace {

double peak_floor(const std::vector<EnvelopePeak>& peaks) {
    double m = 0.0;
    for (const auto& p : peaks) m = std::max(m, p.value);
    return 1e-4 * m;
}

}  // namespace

bool has_revival(const std::vector<EnvelopePeak>& peaks, double factor) {
    const double floor = peak_floor(peaks);
    for (std::size_t j = 1; j + 1 < peaks.size(); ++j) {
        const double v = peaks[j].value;
        if (v < floor || v > peaks[j - 1].value || v > peaks[j + 1].value) continue;
        for (std::size_t k = j + 1; k < peaks.size(); ++k) {
            if (peaks[k].value > factor * v) return true;
        }
    }
    return false;
}

bool decays_monotonically(const std::vector<EnvelopePeak>& peaks, double rel_tol) {
    const double floor = peak_floor(peaks);
    for (std::size_t k = 1; k < peaks.size(); ++k) {
        if (peaks[k].value < floor) break;
        if (peaks[k].value > peaks[k - 1].value * (1.0 + rel_tol)) return false;
    }
    return true;
}

std::size_t sign_changes(const std::vector<double>& J, const TimeGrid& grid, double from, double to, double floor) {
    require_length(grid, J.size(), "sign_changes");
    const std::size_t lo = grid.index_at(from), hi = grid.index_at(to);
    std::size_t count = 0;
    int last = 0;
    for (std::size_t k = lo; k <= hi && k < grid.n; ++k) {
        if (std::abs(J[k]) <= floor) continue;
        const int s = J[k] > 0.0 ? 1 : -1;
        if (last != 0 && s != last) ++count;
        last = s;
    }
    return count;
}

double fraction_nonpositive(const std::vector<double>& J, const TimeGrid& grid, double from, double to) {
    require_length(grid, J.size(), "fraction_nonpositive");
    const std::size_t lo = grid.index_at(from), hi = grid.index_at(to);
    std::size_t total = 0, ok = 0;
    for (std::size_t k = lo; k <= hi && k < grid.n; ++k) {
        ++total;
        if (J[k] <= 0.0) ++ok;
    }
    return total == 0 ? 1.0 : static_cast<double>(ok) / static_cast<double>(total);
}

}  // namespace phf
