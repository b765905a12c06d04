#include "phf/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "phf/errors.hpp"

namespace phf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTailLimit = 5e-3;
constexpr std::size_t kTimeBlock = 256;

// 4-point Gauss-Legendre on [-1, 1].
constexpr double kGaussX[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
constexpr double kGaussW[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};

std::size_t pos(std::size_t i) { return 2 * i; }
std::size_t mom(std::size_t i) { return 2 * i + 1; }

// Golub-Welsch nodes and weights on [0, b].
void gauss_legendre(std::size_t n, double b, std::vector<double>& x, std::vector<double>& w) {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        const double beta = kk / std::sqrt(4.0 * kk * kk - 1.0);
        jac(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k - 1)) = beta;
        jac(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(k)) = beta;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    x.resize(n);
    w.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        const double v0 = es.eigenvectors()(0, kk);
        x[k] = 0.5 * b * (es.eigenvalues()(kk) + 1.0);
        w[k] = 0.5 * b * 2.0 * v0 * v0;
    }
}

// Fornberg weights for the first derivative at x0 on nodes z (unit spacing).
std::vector<double> fd_weights(double x0, const std::vector<double>& z) {
    const std::size_t n = z.size();
    std::vector<std::vector<double>> c(n, std::vector<double>(2, 0.0));
    double c1 = 1.0;
    double c4 = z[0] - x0;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t mn = std::min<std::size_t>(i, 1);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = z[i] - x0;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = z[i] - z[j];
            c2 *= c3;
            if (j == i - 1) {
                for (std::size_t k = mn + 1; k-- > 1;) c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (std::size_t k = mn + 1; k-- > 1;) c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = c[i][1];
    return out;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

StateSummary summarize(const GaussianState& s, const DiscretizedBath& db) {
    const auto& m = s.mean;
    const auto& c = s.cov;
    StateSummary out;
    out.mean_Q = m(0);
    out.mean_P = m(1);
    out.QQ = c(0, 0) + m(0) * m(0);
    out.PP = c(1, 1) + m(1) * m(1);
    out.QP = c(0, 1) + m(0) * m(1);
    for (std::size_t k = 0; k < db.size(); ++k) {
        const auto q = static_cast<Eigen::Index>(pos(k + 1));
        const auto p = static_cast<Eigen::Index>(mom(k + 1));
        const double w = db.omegas[k];
        out.XQ += db.couplings[k] * (c(q, 0) + m(q) * m(0));
        out.E_B += 0.5 * (c(p, p) + m(p) * m(p) + w * w * (c(q, q) + m(q) * m(q)));
    }
    return out;
}

}  // namespace

std::string to_string(BathScheme s) { return s == BathScheme::linear ? "linear" : "gauss_legendre"; }

BathScheme parse_bath_scheme(const std::string& s) {
    if (s == "linear") return BathScheme::linear;
    if (s == "gauss_legendre" || s == "gauss-legendre") return BathScheme::gauss_legendre;
    throw std::invalid_argument("unknown bath discretisation '" + s + "'");
}

double DiscretizedBath::kernel(double t) const {
    double s = 0.0;
    for (std::size_t k = 0; k < size(); ++k) {
        s += couplings[k] * couplings[k] / (omegas[k] * omegas[k]) * std::cos(omegas[k] * t);
    }
    return s;
}

double tail_fraction(const LorentzianSpectralDensity& sd, double omega_max) {
    const auto f = [&](double w) { return spectral_density(sd, w) / w; };
    const double tail = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, omega_max, std::numeric_limits<double>::infinity(), 15, 1e-12);
    const double g = sd.g();
    return tail / (g * g / (2.0 * sd.omega() * sd.omega()));
}

DiscretizedBath discretize_bath(const LorentzianSpectralDensity& sd, std::size_t n, double omega_max,
                                BathScheme scheme) {
    if (n < 2) throw std::invalid_argument("bath needs at least 2 modes");
    if (!(omega_max > sd.omega() + 10.0 * sd.gamma())) {
        throw std::invalid_argument("omega_max must exceed Omega + 10 Gamma");
    }
    const double tail = tail_fraction(sd, omega_max);
    if (tail > kTailLimit) {
        throw std::invalid_argument("spectral weight beyond omega_max is " + std::to_string(100.0 * tail) +
                                    "% of gamma(0) (limit 0.5%)");
    }
    DiscretizedBath db;
    db.scheme = scheme;
    db.omega_max = omega_max;
    std::vector<double> w(n);
    if (scheme == BathScheme::linear) {
        const double dw = omega_max / static_cast<double>(n);
        db.omegas.resize(n);
        for (std::size_t k = 0; k < n; ++k) db.omegas[k] = (static_cast<double>(k) + 0.5) * dw;
        std::fill(w.begin(), w.end(), dw);
        db.delta_omega = dw;
    } else {
        gauss_legendre(n, omega_max, db.omegas, w);
        double gap = db.omegas.front();
        for (std::size_t k = 1; k < n; ++k) gap = std::max(gap, db.omegas[k] - db.omegas[k - 1]);
        db.delta_omega = gap;
    }
    db.recurrence_time = 2.0 * kPi / db.delta_omega;
    db.couplings.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        db.couplings[k] = std::sqrt(db.omegas[k] * spectral_density(sd, db.omegas[k]) * w[k]);
    }
    return db;
}

Eigen::VectorXd LinearDynamics::drive(double t) const {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(2 * stiffness.rows());
    b(1) = force(pulse, t);
    return b;
}

LinearDynamics build_dynamics(const DiscretizedBath& db, double omega0, const GaussianPulse& p, bool counter_term) {
    const std::size_t n = db.size() + 1;
    const auto ni = static_cast<Eigen::Index>(n);
    LinearDynamics dyn{Eigen::MatrixXd::Zero(ni, ni), Eigen::MatrixXd::Zero(2 * ni, 2 * ni), p, omega0,
                       counter_term, 0.0, db};
    double c = 0.0;
    for (std::size_t k = 0; k < db.size(); ++k) {
        const auto kk = static_cast<Eigen::Index>(k + 1);
        const double g = db.couplings[k];
        const double w = db.omegas[k];
        c += g * g / (w * w);
        dyn.stiffness(kk, kk) = w * w;
        dyn.stiffness(0, kk) = -g;
        dyn.stiffness(kk, 0) = -g;
    }
    dyn.counter_term_strength = c;
    dyn.stiffness(0, 0) = omega0 * omega0 + (counter_term ? c : 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto qi = static_cast<Eigen::Index>(pos(i));
        const auto pi = static_cast<Eigen::Index>(mom(i));
        dyn.drift(qi, pi) = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double kij = dyn.stiffness(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (kij != 0.0) dyn.drift(pi, static_cast<Eigen::Index>(pos(j))) = -kij;
        }
    }
    return dyn;
}

GaussianState initial_state(const DiscretizedBath& db, double omega0, Temperature temp) {
    const auto dim = static_cast<Eigen::Index>(2 * (db.size() + 1));
    GaussianState s{Eigen::VectorXd::Zero(dim), Eigen::MatrixXd::Zero(dim, dim)};
    const auto set = [&](std::size_t i, double w) {
        const double coth = temp.coth_factor(w);
        s.cov(static_cast<Eigen::Index>(pos(i)), static_cast<Eigen::Index>(pos(i))) = kHbar / (2.0 * w) * coth;
        s.cov(static_cast<Eigen::Index>(mom(i)), static_cast<Eigen::Index>(mom(i))) = kHbar * w / 2.0 * coth;
    };
    set(0, omega0);
    for (std::size_t k = 0; k < db.size(); ++k) set(k + 1, db.omegas[k]);
    return s;
}

std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& cov) {
    const Eigen::Index dim = cov.rows();
    if (dim % 2 != 0 || cov.cols() != dim) throw std::invalid_argument("covariance must be square with even size");
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; i += 2) {
        sigma(i, i + 1) = 1.0;
        sigma(i + 1, i) = -1.0;
    }
    // i sigma V is Hermitian-similar; its eigenvalues come in pairs +-nu.
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) throw NumericalError("covariance is not positive definite");
    const Eigen::MatrixXd L = llt.matrixL();
    const Eigen::MatrixXd m = L.transpose() * sigma * L;  // antisymmetric
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-(m * m));
    std::vector<double> nu;
    nu.reserve(static_cast<std::size_t>(dim / 2));
    for (Eigen::Index i = 0; i < dim; i += 2) nu.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i))));
    std::sort(nu.begin(), nu.end());
    return nu;
}

PropagationResult propagate(const GaussianState& state, const LinearDynamics& dyn, const TimeGrid& grid) {
    const Eigen::Index dim = dyn.drift.rows();
    if (state.mean.size() != dim || state.cov.rows() != dim) {
        throw std::invalid_argument("state dimension does not match dynamics");
    }
    const double h = grid.dt;
    const Eigen::MatrixXd phi = (dyn.drift * h).exp();

    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; i += 2) {
        sigma(i, i + 1) = 1.0;
        sigma(i + 1, i) = -1.0;
    }
    const double serr = (phi.transpose() * sigma * phi - sigma).cwiseAbs().maxCoeff();
    if (serr > 1e-10) {
        throw NumericalError("one-step propagator is not symplectic to 1e-10 (error " + std::to_string(serr) +
                             "); reduce dt");
    }

    // Columns exp(A (h - s_i)) e_P for the drive integral.
    Eigen::MatrixXd kick(dim, 4);
    std::array<double, 4> offsets{};
    for (int i = 0; i < 4; ++i) {
        offsets[static_cast<std::size_t>(i)] = 0.5 * h * (1.0 + kGaussX[i]);
        const Eigen::MatrixXd e = (dyn.drift * (h - offsets[static_cast<std::size_t>(i)])).exp();
        kick.col(i) = e.col(1) * (0.5 * h * kGaussW[i]);
    }

    PropagationResult out{grid, {}, state, serr};
    out.summaries.reserve(grid.n);
    GaussianState s = state;
    out.summaries.push_back(summarize(s, dyn.bath));
    Eigen::MatrixXd tmp(dim, dim);
    for (std::size_t n = 1; n < grid.n; ++n) {
        const double t = grid.t(n - 1);
        Eigen::VectorXd next = phi * s.mean;
        for (int i = 0; i < 4; ++i) next += kick.col(i) * force(dyn.pulse, t + offsets[static_cast<std::size_t>(i)]);
        s.mean = next;
        tmp.noalias() = phi * s.cov;
        s.cov.noalias() = tmp * phi.transpose();
        s.cov = 0.5 * (s.cov + s.cov.transpose()).eval();
        out.summaries.push_back(summarize(s, dyn.bath));
    }
    out.final_state = std::move(s);
    return out;
}

std::vector<StateSummary> propagate_normal_modes(const GaussianState& state, const LinearDynamics& dyn,
                                                 const TimeGrid& grid) {
    using Eigen::Index;
    using Eigen::MatrixXd;
    using Eigen::VectorXd;
    const Index n = dyn.stiffness.rows();
    if (state.mean.size() != 2 * n || state.cov.rows() != 2 * n) {
        throw std::invalid_argument("state dimension does not match dynamics");
    }

    MatrixXd cxx(n, n), cpp(n, n);
    double cross = 0.0, scale = 0.0;
    VectorXd x0(n), p0(n);
    for (Index i = 0; i < n; ++i) {
        x0(i) = state.mean(2 * i);
        p0(i) = state.mean(2 * i + 1);
        for (Index j = 0; j < n; ++j) {
            cxx(i, j) = state.cov(2 * i, 2 * j);
            cpp(i, j) = state.cov(2 * i + 1, 2 * j + 1);
            cross = std::max(cross, std::abs(state.cov(2 * i, 2 * j + 1)));
        }
        scale = std::max({scale, std::abs(cxx(i, i)), std::abs(cpp(i, i))});
    }
    if (cross > 1e-14 * scale) throw std::invalid_argument("normal-mode propagation needs zero q-p covariance");

    Eigen::SelfAdjointEigenSolver<MatrixXd> es(dyn.stiffness);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
        throw NumericalError("stiffness matrix is not positive definite");
    }
    const MatrixXd& O = es.eigenvectors();
    const VectorXd nu = es.eigenvalues().cwiseSqrt();

    const VectorXd o = O.row(0).transpose();
    VectorXd gvec = VectorXd::Zero(n);
    VectorXd mk = VectorXd::Zero(n), md = VectorXd::Zero(n);
    for (std::size_t k = 0; k < dyn.bath.size(); ++k) {
        const auto kk = static_cast<Index>(k + 1);
        gvec(kk) = dyn.bath.couplings[k];
        mk(kk) = dyn.bath.omegas[k] * dyn.bath.omegas[k];
        md(kk) = 1.0;
    }
    const VectorXd r = O.transpose() * gvec;
    const MatrixXd Y = O.transpose() * cxx * O;
    const MatrixXd Pi = O.transpose() * cpp * O;
    const MatrixXd MK = O.transpose() * mk.asDiagonal() * O;
    const MatrixXd MD = O.transpose() * md.asDiagonal() * O;
    const MatrixXd P1 = MK.cwiseProduct(Y) + MD.cwiseProduct(Pi);
    const MatrixXd P2 = MK.cwiseProduct(Pi);
    const MatrixXd P3 = MD.cwiseProduct(Y);

    // Per-step maps for the means.
    const double h = grid.dt;
    const VectorXd ch = (nu * h).array().cos();
    const VectorXd sh = (nu * h).array().sin();
    MatrixXd ky(n, 4), kp(n, 4);
    std::array<double, 4> offsets{};
    for (int i = 0; i < 4; ++i) {
        const double s = 0.5 * h * (1.0 + kGaussX[i]);
        offsets[static_cast<std::size_t>(i)] = s;
        const double wgt = 0.5 * h * kGaussW[i];
        const VectorXd arg = nu * (h - s);
        ky.col(i) = wgt * o.cwiseProduct(arg.array().sin().matrix()).cwiseQuotient(nu);
        kp.col(i) = wgt * o.cwiseProduct(arg.array().cos().matrix());
    }
    VectorXd y = O.transpose() * x0;
    VectorXd py = O.transpose() * p0;

    std::vector<StateSummary> out(grid.n);
    for (std::size_t b0 = 0; b0 < grid.n; b0 += kTimeBlock) {
        const std::size_t nb = std::min(kTimeBlock, grid.n - b0);
        const auto nbi = static_cast<Index>(nb);
        MatrixXd C(n, nbi), S(n, nbi), SN(n, nbi), Ym(n, nbi), Pm(n, nbi);
        for (Index j = 0; j < nbi; ++j) {
            const std::size_t idx = b0 + static_cast<std::size_t>(j);
            const double t = grid.t(idx) - grid.t0;
            for (Index m = 0; m < n; ++m) {
                const double c = std::cos(nu(m) * t);
                const double s = std::sin(nu(m) * t);
                C(m, j) = c;
                S(m, j) = s / nu(m);
                SN(m, j) = s * nu(m);
            }
            if (idx > 0) {
                const double tp = grid.t(idx - 1);
                VectorXd ny = ch.cwiseProduct(y) + sh.cwiseProduct(py).cwiseQuotient(nu);
                VectorXd np = -nu.cwiseProduct(sh).cwiseProduct(y) + ch.cwiseProduct(py);
                for (int i = 0; i < 4; ++i) {
                    const double f = force(dyn.pulse, tp + offsets[static_cast<std::size_t>(i)]);
                    ny += f * ky.col(i);
                    np += f * kp.col(i);
                }
                y = std::move(ny);
                py = std::move(np);
            }
            Ym.col(j) = y;
            Pm.col(j) = py;
        }
        const MatrixXd U1 = o.asDiagonal() * C;
        const MatrixXd U2 = o.asDiagonal() * S;
        const MatrixXd U3 = o.asDiagonal() * SN;
        const MatrixXd R1 = r.asDiagonal() * C;
        const MatrixXd R2 = r.asDiagonal() * S;
        const MatrixXd YU1 = Y * U1;
        const MatrixXd PU2 = Pi * U2;
        const MatrixXd YU3 = Y * U3;
        const MatrixXd PU1 = Pi * U1;
        const VectorXd qq = (U1.cwiseProduct(YU1).colwise().sum() + U2.cwiseProduct(PU2).colwise().sum()).transpose();
        const VectorXd pp = (U3.cwiseProduct(YU3).colwise().sum() + U1.cwiseProduct(PU1).colwise().sum()).transpose();
        const VectorXd qp = (U2.cwiseProduct(PU1).colwise().sum() - U1.cwiseProduct(YU3).colwise().sum()).transpose();
        const VectorXd xq = (R1.cwiseProduct(YU1).colwise().sum() + R2.cwiseProduct(PU2).colwise().sum()).transpose();
        const VectorXd eb = 0.5 * (C.cwiseProduct(P1 * C).colwise().sum() + S.cwiseProduct(P2 * S).colwise().sum() +
                                   SN.cwiseProduct(P3 * SN).colwise().sum())
                                      .transpose();
        const MatrixXd Xm = O * Ym;
        const MatrixXd Xp = O * Pm;
        for (Index j = 0; j < nbi; ++j) {
            StateSummary& s = out[b0 + static_cast<std::size_t>(j)];
            s.mean_Q = o.dot(Ym.col(j));
            s.mean_P = o.dot(Pm.col(j));
            const double xbar = r.dot(Ym.col(j));
            s.QQ = qq(j) + s.mean_Q * s.mean_Q;
            s.PP = pp(j) + s.mean_P * s.mean_P;
            s.QP = qp(j) + s.mean_Q * s.mean_P;
            s.XQ = xq(j) + xbar * s.mean_Q;
            double ebm = 0.0;
            for (Index m = 1; m < n; ++m) {
                ebm += Xp(m, j) * Xp(m, j) + mk(m) * Xm(m, j) * Xm(m, j);
            }
            s.E_B = eb(j) + 0.5 * ebm;
        }
    }
    return out;
}

EnergyLedger energy_ledger(const std::vector<StateSummary>& states, const LinearDynamics& dyn, const TimeGrid& grid) {
    require_length(grid, states.size(), "oracle states");
    EnergyLedger l;
    l.grid = grid;
    const std::size_t n = grid.n;
    for (auto* v : {&l.U_S, &l.E_B, &l.E_SB, &l.E_tot, &l.W_rate, &l.mean_Q, &l.mean_P, &l.QQ, &l.PP}) v->resize(n);
    const double w0 = dyn.omega0;
    const double c = dyn.counter_term ? dyn.counter_term_strength : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const StateSummary& s = states[i];
        const double t = grid.t(i);
        l.U_S[i] = 0.5 * s.PP + 0.5 * w0 * w0 * s.QQ - force(dyn.pulse, t) * s.mean_Q;
        l.E_B[i] = s.E_B;
        l.E_SB[i] = -s.XQ + 0.5 * c * s.QQ;
        l.E_tot[i] = l.U_S[i] + l.E_B[i] + l.E_SB[i];
        l.W_rate[i] = -force_rate(dyn.pulse, t) * s.mean_Q;
        l.mean_Q[i] = s.mean_Q;
        l.mean_P[i] = s.mean_P;
        l.QQ[i] = s.QQ;
        l.PP[i] = s.PP;
    }
    return l;
}

std::vector<double> derivative6(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    if (n < 7) throw std::invalid_argument("sixth-order derivative needs at least 7 samples");
    std::vector<double> d(n);
    const std::vector<double> nodes{0, 1, 2, 3, 4, 5, 6};
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t start;
        if (i < 3) start = 0;
        else if (i + 3 >= n) start = n - 7;
        else start = i - 3;
        const auto w = fd_weights(static_cast<double>(i - start), nodes);
        double s = 0.0;
        for (std::size_t k = 0; k < 7; ++k) s += w[k] * f[start + k];
        d[i] = s / h;
    }
    return d;
}

std::vector<double> oracle_heat_current(const EnergyLedger& ledger) {
    auto j = derivative6(ledger.U_S, ledger.grid.dt);
    for (std::size_t i = 0; i < j.size(); ++i) j[i] -= ledger.W_rate[i];
    return j;
}

LedgerResiduals ledger_residuals(const EnergyLedger& ledger) {
    const double h = ledger.grid.dt;
    const auto dtot = derivative6(ledger.E_tot, h);
    std::vector<double> bsb(ledger.E_B.size());
    for (std::size_t i = 0; i < bsb.size(); ++i) bsb[i] = ledger.E_B[i] + ledger.E_SB[i];
    const auto dbsb = derivative6(bsb, h);
    const auto j = oracle_heat_current(ledger);
    double wb = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < j.size(); ++i) {
        wb = std::max(wb, std::abs(dtot[i] - ledger.W_rate[i]));
        hi = std::max(hi, std::abs(j[i] + dbsb[i]));
    }
    const double wmax = max_abs(ledger.W_rate);
    const double jmax = max_abs(j);
    return {wmax > 0 ? wb / wmax : wb, jmax > 0 ? hi / jmax : hi};
}

}  // namespace phf
