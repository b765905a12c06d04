#include "phf/gle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "phf/errors.hpp"

namespace phf {

std::string to_string(GreenMethod m) { return m == GreenMethod::volterra ? "volterra" : "embedding"; }

GreenMethod parse_green_method(const std::string& s) {
    if (s == "volterra") return GreenMethod::volterra;
    if (s == "embedding") return GreenMethod::embedding;
    throw std::invalid_argument("unknown Green's-function method '" + s + "' (expected volterra | embedding)");
}

namespace {

struct RawGreen {
    std::vector<double> G, V, A, M;  // G, G', G'', memory
};

using Field = std::vector<double> RawGreen::*;
constexpr Field kFields[] = {&RawGreen::G, &RawGreen::V, &RawGreen::A, &RawGreen::M};

class InstabilityGuard {
public:
    InstabilityGuard(double omega0, double h)
        : period_steps_(static_cast<std::size_t>(std::ceil(2.0 * std::numbers::pi / omega0 / h))) {}

    void check(std::size_t n, double g) {
        const double a = std::abs(g);
        if (!std::isfinite(a)) fail(n, a);
        if (n <= period_steps_) {
            first_max_ = std::max(first_max_, a);
        } else if (a > 1e6 * first_max_) {
            fail(n, a);
        }
    }

private:
    [[noreturn]] void fail(std::size_t n, double a) const {
        std::ostringstream os;
        os << "Green's function unstable at step " << n << ": |G| = " << a << " exceeds 1e6 x first-period max "
           << first_max_;
        throw NumericalError(os.str());
    }
    std::size_t period_steps_;
    double first_max_ = 0.0;
};

// State (G, G', m, m1) with m = int gamma(t-s) G'(s) ds and m1 = int gamma'(t-s) G'(s) ds.
// For gamma'' + Gamma gamma' + Omega^2 gamma = 0, gamma(0) = A, gamma'(0) = 0:
//   m' = A G' + m1,  m1' = -Gamma m1 - Omega^2 m.
RawGreen solve_embedding(const ExponentialKernel& k, double omega0, double h, std::size_t n) {
    Eigen::Matrix4d b = Eigen::Matrix4d::Zero();
    b(0, 1) = 1.0;
    b(1, 0) = -omega0 * omega0;
    b(1, 2) = -1.0;
    b(2, 1) = k.amplitude();
    b(2, 3) = 1.0;
    b(3, 2) = -k.omega() * k.omega();
    b(3, 3) = -k.decay();
    const Eigen::Matrix4d hb = h * b;
    const Eigen::Matrix4d hb2 = hb * hb;
    const Eigen::Matrix4d step =
        Eigen::Matrix4d::Identity() + hb + hb2 / 2.0 + hb2 * hb / 6.0 + hb2 * hb2 / 24.0;

    RawGreen r;
    r.G.resize(n);
    r.V.resize(n);
    r.A.resize(n);
    r.M.resize(n);
    Eigen::Vector4d x(0.0, 1.0, 0.0, 0.0);
    InstabilityGuard guard(omega0, h);
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) x = step * x;
        r.G[i] = x(0);
        r.V[i] = x(1);
        r.M[i] = x(2);
        r.A[i] = -omega0 * omega0 * x(0) - x(2);
        guard.check(i, x(0));
    }
    r.G[0] = 0.0;
    r.V[0] = 1.0;
    return r;
}

// Trapezoidal rule on G' = V, V' = -w0^2 G - M with the trapezoidal memory sum
//   M_n = h [gamma_n V_0 / 2 + sum_{j=1}^{n-1} gamma_{n-j} V_j + gamma_0 V_n / 2].
RawGreen solve_volterra(const std::vector<double>& gamma, double omega0, double h, std::size_t n) {
    RawGreen r;
    r.G.assign(n, 0.0);
    r.V.assign(n, 0.0);
    r.A.assign(n, 0.0);
    r.M.assign(n, 0.0);
    r.V[0] = 1.0;
    r.A[0] = 0.0;
    const double w2 = omega0 * omega0;
    const double denom = 1.0 + 0.25 * h * h * w2 + 0.25 * h * h * gamma[0];
    InstabilityGuard guard(omega0, h);
    guard.check(0, 0.0);
    for (std::size_t k = 1; k < n; ++k) {
        double s = 0.5 * gamma[k] * r.V[0];
        for (std::size_t j = 1; j < k; ++j) s += gamma[k - j] * r.V[j];
        s *= h;
        const double rhs = r.V[k - 1] + 0.5 * h * r.A[k - 1] + 0.5 * h * (-w2 * (r.G[k - 1] + 0.5 * h * r.V[k - 1]) - s);
        r.V[k] = rhs / denom;
        r.G[k] = r.G[k - 1] + 0.5 * h * (r.V[k - 1] + r.V[k]);
        r.M[k] = s + 0.5 * h * gamma[0] * r.V[k];
        r.A[k] = -w2 * r.G[k] - r.M[k];
        guard.check(k, r.G[k]);
    }
    return r;
}

// Richardson extrapolation of the even-power error expansion of the trapezoidal scheme.
RawGreen volterra_extrapolated(const FrictionKernel& kernel, double omega0, const TimeGrid& grid, unsigned levels) {
    std::vector<RawGreen> table;
    for (unsigned l = 0; l <= levels; ++l) {
        const std::size_t refine = std::size_t{1} << l;
        const double h = grid.dt / static_cast<double>(refine);
        const std::size_t n = (grid.n - 1) * refine + 1;
        const auto gamma = kernel.samples(h, n);
        RawGreen fine = solve_volterra(gamma, omega0, h, n);
        RawGreen coarse;
        for (Field field : kFields) {
            auto& dst = coarse.*field;
            const auto& src = fine.*field;
            dst.resize(grid.n);
            for (std::size_t i = 0; i < grid.n; ++i) dst[i] = src[i * refine];
        }
        table.push_back(std::move(coarse));
    }
    for (unsigned l = 1; l <= levels; ++l) {
        const double f = std::pow(4.0, static_cast<double>(l));
        for (unsigned k = levels; k >= l; --k) {
            for (Field field : kFields) {
                auto& hi = table[k].*field;
                const auto& lo = table[k - 1].*field;
                for (std::size_t i = 0; i < hi.size(); ++i) hi[i] = (f * hi[i] - lo[i]) / (f - 1.0);
            }
        }
    }
    return std::move(table.back());
}

}  // namespace

GreenFunction solve_green(const FrictionKernel& kernel, double omega0, const TimeGrid& grid, const GreenOptions& opt) {
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw std::invalid_argument("solve_green: omega0 must be > 0");
    RawGreen raw;
    if (opt.method == GreenMethod::embedding) {
        if (!kernel.density().underdamped()) {
            throw NumericalError("embedding method requires an underdamped bath (Gamma < 2 Omega)");
        }
        if (!kernel.fast_path()) {
            throw NumericalError("embedding method requires the validated exponential kernel: " +
                                 kernel.validation().reason);
        }
        raw = solve_embedding(kernel.exponential(), omega0, grid.dt, grid.n);
    } else {
        raw = volterra_extrapolated(kernel, omega0, grid, opt.richardson);
    }

    GreenFunction gf;
    gf.grid = grid;
    gf.method = opt.method;
    gf.slip = opt.slip;
    gf.omega0 = omega0;
    gf.G = std::move(raw.G);
    gf.Gdot = std::move(raw.V);
    gf.Gddot = std::move(raw.A);
    gf.memory = std::move(raw.M);
    gf.G[0] = 0.0;
    gf.Gdot[0] = 1.0;
    if (opt.slip) {
        gf.q0_position = gf.Gdot;
        gf.q0_velocity = gf.Gddot;
    } else {
        const auto gamma = kernel.samples(grid.dt, grid.n);
        const auto conv = trapezoid_convolution(gamma, gf.G, grid.dt);
        gf.q0_position.resize(grid.n);
        gf.q0_velocity.resize(grid.n);
        for (std::size_t i = 0; i < grid.n; ++i) {
            gf.q0_position[i] = gf.Gdot[i] + conv[i];
            gf.q0_velocity[i] = -omega0 * omega0 * gf.G[i];
        }
    }
    return gf;
}

double green_residual(const GreenFunction& gf, const std::vector<double>& gamma_samples) {
    require_length(gf.grid, gamma_samples.size(), "green_residual");
    const double h = gf.grid.dt;
    const auto mem = trapezoid_convolution(gamma_samples, gf.Gdot, h);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < gf.grid.n; ++i) {
        const double gdd = (gf.G[i + 1] - 2.0 * gf.G[i] + gf.G[i - 1]) / (h * h);
        worst = std::max(worst, std::abs(gdd + gf.omega0 * gf.omega0 * gf.G[i] + mem[i]));
    }
    return worst;
}

GibbsMoments gibbs_initial_moments(double omega0, Temperature temp) {
    if (!(omega0 > 0.0)) throw std::invalid_argument("gibbs_initial_moments: omega0 must be > 0");
    const double c = temp.coth_factor(omega0);
    return {0.5 * kHbar / omega0 * c, 0.5 * kHbar * omega0 * c, 0.0};
}

GibbsMoments classical_initial_moments(double omega0, Temperature temp) {
    if (!(omega0 > 0.0)) throw std::invalid_argument("classical_initial_moments: omega0 must be > 0");
    const double kt = temp.thermal_energy();
    return {kt / (omega0 * omega0), kt, 0.0};
}

GibbsMoments initial_moments(double omega0, Temperature temp, NoiseModel model) {
    return model == NoiseModel::classical ? classical_initial_moments(omega0, temp) : gibbs_initial_moments(omega0, temp);
}

double green_decay_time(const GreenFunction& gf, double fraction) {
    double gmax = 0.0;
    for (double x : gf.G) gmax = std::max(gmax, std::abs(x));
    const double limit = fraction * gmax;
    for (std::size_t k = gf.G.size(); k-- > 0;) {
        if (std::abs(gf.G[k]) >= limit) return k + 1 < gf.G.size() ? gf.grid.t(k + 1) : gf.grid.t_end();
    }
    return gf.grid.t0;
}

std::vector<double> pulse_samples(const GaussianPulse& p, const TimeGrid& grid) {
    std::vector<double> f(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) f[i] = force(p, grid.t(i));
    return f;
}

std::vector<double> pulse_rate_samples(const GaussianPulse& p, const TimeGrid& grid) {
    std::vector<double> f(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) f[i] = force_rate(p, grid.t(i));
    return f;
}

std::vector<double> mean_displacement(const GreenFunction& gf, const GaussianPulse& p, const TimeGrid& grid) {
    require_same_grid(gf.grid, grid, "mean_displacement");
    return trapezoid_convolution(gf.G, pulse_samples(p, grid), grid.dt);
}

std::vector<double> mean_velocity(const GreenFunction& gf, const GaussianPulse& p, const TimeGrid& grid) {
    require_same_grid(gf.grid, grid, "mean_velocity");
    return trapezoid_convolution(gf.Gdot, pulse_samples(p, grid), grid.dt);
}

std::vector<double> noise_quadratic_form(const std::vector<double>& u, const std::vector<double>& w,
                                         const std::vector<double>& eta, double h) {
    const std::size_t n = u.size();
    if (w.size() != n) throw GridMismatch("noise_quadratic_form: u and w lengths differ");
    if (eta.size() < n) throw GridMismatch("noise_quadratic_form: eta shorter than the series");
    std::vector<double> phi(n, 0.0);
    if (n == 0) return phi;
    auto weight = [h](std::size_t i) { return i == 0 ? 0.5 * h : h; };
    std::vector<double> cu(n), cw(n);
    for (std::size_t i = 0; i < n; ++i) {
        cu[i] = weight(i) * u[i];
        cw[i] = weight(i) * w[i];
    }
    const std::vector<double> e(eta.begin(), eta.begin() + static_cast<std::ptrdiff_t>(n));
    const auto au = causal_sum(e, cu);
    const auto aw = causal_sum(e, cw);
    const double e0 = eta[0];
    double s = weight(0) * weight(0) * u[0] * w[0] * e0;
    for (std::size_t k = 1; k < n; ++k) {
        const double c = weight(k);
        s += c * u[k] * aw[k] + c * w[k] * au[k] - c * c * u[k] * w[k] * e0;
        phi[k] = s - 0.5 * h * (u[k] * aw[k] + w[k] * au[k]) + 0.25 * h * h * u[k] * w[k] * e0;
    }
    return phi;
}

TrajectoryBundle variance_series(const GreenFunction& gf, const GaussianPulse& p, const std::vector<double>& eta,
                                 const GibbsMoments& moments, const TimeGrid& grid) {
    require_same_grid(gf.grid, grid, "variance_series");
    TrajectoryBundle tb;
    tb.grid = grid;
    tb.mean_Q = mean_displacement(gf, p, grid);
    tb.mean_V = mean_velocity(gf, p, grid);
    const auto phi_q = noise_quadratic_form(gf.G, gf.G, eta, grid.dt);
    const auto phi_v = noise_quadratic_form(gf.Gdot, gf.Gdot, eta, grid.dt);
    tb.var_Q.resize(grid.n);
    tb.var_V.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double b = gf.q0_position[i], a = gf.q0_velocity[i];
        tb.var_Q[i] = b * b * moments.qq + gf.G[i] * gf.G[i] * moments.vv + 2.0 * b * gf.G[i] * moments.qv +
                      tb.mean_Q[i] * tb.mean_Q[i] + 0.5 * phi_q[i];
        tb.var_V[i] = a * a * moments.qq + gf.Gdot[i] * gf.Gdot[i] * moments.vv + 2.0 * a * gf.Gdot[i] * moments.qv +
                      tb.mean_V[i] * tb.mean_V[i] + 0.5 * phi_v[i];
    }
    return tb;
}

std::vector<double> velocity_correlation_row(const GreenFunction& gf, const std::vector<double>& mean_v,
                                             const std::vector<double>& eta, const GibbsMoments& moments,
                                             std::size_t t) {
    const std::size_t n = gf.grid.n;
    require_length(gf.grid, mean_v.size(), "velocity_correlation_row");
    if (eta.size() < n) throw GridMismatch("velocity_correlation_row: eta shorter than the grid");
    if (t >= n) throw std::out_of_range("velocity_correlation_row: t_index outside the grid");
    const double h = gf.grid.dt;

    std::vector<double> row(t + 1);
    const double at = gf.q0_velocity[t], gt = gf.Gdot[t], vt = mean_v[t];
    for (std::size_t s = 0; s <= t; ++s) {
        row[s] = 2.0 * at * gf.q0_velocity[s] * moments.qq + 2.0 * gt * gf.Gdot[s] * moments.vv +
                 2.0 * moments.qv * (at * gf.Gdot[s] + gt * gf.q0_velocity[s]) + 2.0 * vt * mean_v[s];
    }
    if (t == 0) return row;

    // R(v) = int_0^t G'(t - u) eta(u - v) du, then N(s) = int_0^s G'(s - v) R(v) dv.
    std::vector<double> x(t + 1), y(2 * t + 1);
    for (std::size_t i = 0; i <= t; ++i) x[i] = (i == 0 || i == t ? 0.5 * h : h) * gf.Gdot[t - i];
    for (std::size_t k = 0; k <= 2 * t; ++k) y[k] = eta[k > t ? k - t : t - k];
    const auto full = linear_convolution(x, y);
    std::vector<double> r(t + 1);
    for (std::size_t v = 0; v <= t; ++v) r[v] = full[v + t];
    const std::vector<double> gd(gf.Gdot.begin(), gf.Gdot.begin() + static_cast<std::ptrdiff_t>(t + 1));
    const auto noise = trapezoid_convolution(gd, r, h);
    for (std::size_t s = 0; s <= t; ++s) row[s] += noise[s];
    return row;
}

std::complex<double> response_function(const FrictionKernel& kernel, double omega0, double omega) {
    const std::complex<double> iw(0.0, omega);
    return 1.0 / (omega0 * omega0 - omega * omega + iw * kernel.causal_transform(omega));
}

}  // namespace phf
