#include "phf/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include "phf/errors.hpp"

namespace phf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string label(const char* fmt, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, x);
    return buf;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b, const TimeGrid& g, double until) {
    double m = 0.0;
    for (std::size_t i = 0; i < g.n && g.t(i) <= until; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::vector<double> taus_of(const RunConfig& cfg) {
    return cfg.tau_list_ps.empty() ? std::vector<double>{cfg.tau_ps} : cfg.tau_list_ps;
}

RunConfig config_for_tau(const RunConfig& cfg, double tau) {
    return cfg.tau_list_ps.empty() ? cfg : cfg.with_tau(tau);
}

std::string tau_tag(double tau) { return label("tau%g", tau); }

Manifest base_manifest(Scenario s, const RunConfig& cfg, unsigned threads) {
    Manifest m;
    m.scenario = to_string(s);
    m.config_hash = cfg.config_hash();
    m.config_text = cfg.canonical();
    m.adjustments = cfg.adjustments;
    m.threads = threads;
    return m;
}

struct Writer {
    std::string dir;
    ScenarioResult& res;

    std::string path(const std::string& name) const { return (std::filesystem::path(dir) / name).string(); }

    void csv(const std::string& name, const Column& index, const std::vector<Column>& cols) {
        write_csv(path(name), index, cols);
        res.files.push_back(name);
    }
    void series(const std::string& name, const TimeGrid& g, const std::vector<Column>& cols) {
        write_series_csv(path(name), g, cols);
        res.files.push_back(name);
    }
    void svg(const RunConfig& cfg, const std::string& name, const std::string& title,
             const std::vector<PlotPanel>& panels, int columns) {
        if (!cfg.svg) return;
        write_svg(path(name), title, panels, columns);
        res.files.push_back(name);
    }
};

void psd_figure(const RunConfig& cfg, Writer& w, Manifest& m, unsigned threads) {
    const auto sd = cfg.density();
    const double W = sd.omega();
    const std::size_t nw = 1601;
    Column omega{"omega_rad_ps", {}};
    for (std::size_t i = 0; i < nw; ++i) omega.values.push_back(4.0 * W * static_cast<double>(i) / (nw - 1));

    std::vector<double> temps{0.0, 70.0, 300.0};
    if (std::find(temps.begin(), temps.end(), cfg.temperature_K) == temps.end()) temps.push_back(cfg.temperature_K);

    std::vector<Column> cols;
    Column jcol{"J", {}}, gcol{"gamma_tilde", {}};
    for (double x : omega.values) {
        jcol.values.push_back(spectral_density(sd, x));
        gcol.values.push_back(x > 0.0 ? kernel_cosine_transform(sd, x) : std::numbers::pi * sd.slope_at_zero());
    }
    cols.push_back(jcol);
    cols.push_back(gcol);
    PlotPanel psd{"noise power spectrum S(w)", "w (rad/ps)", "S", {}};
    const SampledKernelTransform transform(sd, threads);
    double worst_analytic = 0.0, worst_numeric = 0.0;
    for (double T : temps) {
        const Temperature temp(T);
        Column c{label("S_T%gK", T), {}};
        for (double x : omega.values) c.values.push_back(noise_psd(sd, temp, x));
        psd.series.push_back({label("T = %g K", T), omega.values, c.values});
        cols.push_back(std::move(c));
        for (double f : {0.5, 1.0, 2.0}) {
            worst_analytic = std::max(worst_analytic, fdt_residual(sd, temp, f * W, FdtPath::analytic));
            worst_numeric = std::max(worst_numeric, fdt_residual(sd, temp, f * W, transform));
        }
    }
    m.tolerance("fdt_residual_analytic", worst_analytic, 1e-10);
    m.tolerance("fdt_residual_numeric", worst_numeric, 1e-4);
    w.csv("psd.csv", omega, cols);

    Column tcol{"temperature_K", {}};
    for (int T = 0; T <= 400; ++T) tcol.values.push_back(T);
    Column fixed{"coth_2THz", {}}, own{"coth_config", {}};
    const double w2 = thz_to_rad_per_ps(2.0);
    for (double T : tcol.values) {
        fixed.values.push_back(quantum_criterion(w2, Temperature(T)));
        own.values.push_back(quantum_criterion(cfg.omega0(), Temperature(T)));
    }
    w.csv("coth.csv", tcol, {fixed, own});
    m.value("coth_2THz_70K", quantum_criterion(w2, Temperature(70.0)));
    PlotPanel coth{"coth(hbar w0 / 2 kB T)", "T (K)", "coth", {}};
    coth.series.push_back({"w0 = 2 THz", tcol.values, fixed.values});
    coth.series.push_back({label("w0 = %g THz", cfg.omega0_THz), tcol.values, own.values});

    if (!cfg.mode_table.empty()) {
        const auto table = read_mode_table(cfg.mode_table);
        Column tt{"temperature_K", table.temperature_K}, ww{"omega0_THz", table.omega0_THz}, cc{"coth", {}};
        for (std::size_t i = 0; i < tt.values.size(); ++i) {
            cc.values.push_back(quantum_criterion(thz_to_rad_per_ps(ww.values[i]), Temperature(tt.values[i])));
        }
        w.csv("mode_table_coth.csv", tt, {ww, cc});
        coth.series.push_back({"mode table", tt.values, cc.values});
    }
    w.svg(cfg, "psd.svg", "Quantum criterion and noise spectrum", {coth, psd}, 2);
}

void pulse_figure(const RunConfig& cfg, Writer& w, Manifest& m) {
    const auto taus = taus_of(cfg);
    double horizon = 0.0;
    std::vector<RunConfig> cfgs;
    for (double tau : taus) {
        cfgs.push_back(config_for_tau(cfg, tau));
        horizon = std::max(horizon, cfgs.back().horizon);
    }
    const TimeGrid grid = TimeGrid::covering(cfg.t0, cfg.dt, horizon);
    std::vector<Column> tcols;
    PlotPanel pt{"laser force", "t (ps)", "F(t)", {}};
    const auto times = grid.times();
    for (const auto& c : cfgs) {
        const auto p = c.pulse();
        Column col{"F_" + tau_tag(c.tau_ps), pulse_samples(p, grid)};
        pt.series.push_back({label("tau = %g ps", c.tau_ps), times, col.values});
        tcols.push_back(std::move(col));
        m.value("spectral_fwhm_" + tau_tag(c.tau_ps), p.spectral_fwhm());
    }
    w.series("pulse_time.csv", grid, tcols);

    const FrictionKernel kernel(cfg.density(), cfg.fast_kernel);
    const double w0 = cfg.omega0();
    const std::size_t nw = 1201;
    Column omega{"omega_rad_ps", {}};
    for (std::size_t i = 0; i < nw; ++i) omega.values.push_back(3.0 * w0 * static_cast<double>(i) / (nw - 1));
    std::vector<Column> fcols;
    PlotPanel pf{"pulse spectra and response", "w (rad/ps)", "normalised", {}};
    for (const auto& c : cfgs) {
        const auto p = c.pulse();
        Column col{"Fabs_" + tau_tag(c.tau_ps), {}};
        for (double x : omega.values) col.values.push_back(std::abs(force_spectrum(p, x)));
        fcols.push_back(std::move(col));
    }
    Column ca{"chi_abs", {}}, cr{"chi_re", {}}, ci{"chi_im", {}};
    for (double x : omega.values) {
        const auto chi = response_function(kernel, w0, x);
        ca.values.push_back(std::abs(chi));
        cr.values.push_back(chi.real());
        ci.values.push_back(chi.imag());
    }
    for (const auto& c : fcols) {
        const double s = max_abs(c.values);
        std::vector<double> y(c.values);
        for (auto& v : y) v /= s > 0 ? s : 1.0;
        pf.series.push_back({"|F~| " + c.name.substr(5), omega.values, y});
    }
    {
        const double s = max_abs(ca.values);
        std::vector<double> y(ca.values);
        for (auto& v : y) v /= s > 0 ? s : 1.0;
        pf.series.push_back({"|chi|", omega.values, y});
    }
    fcols.push_back(ca);
    fcols.push_back(cr);
    fcols.push_back(ci);
    w.csv("pulse_spectrum.csv", omega, fcols);
    w.svg(cfg, "pulse.svg", "Gaussian pulses", {pt, pf}, 2);
}

void dynamics(const RunConfig& cfg, Writer& w, Manifest& m, unsigned threads) {
    const FrictionKernel kernel(cfg.density(), cfg.fast_kernel);
    const TimeGrid grid = cfg.grid();
    const auto gf = solve_green(kernel, cfg.omega0(), grid, cfg.green_options());
    const auto eta = noise_series(kernel, cfg.temperature(), cfg.noise, grid.dt, grid.n, threads);
    const auto mom = initial_moments(cfg.omega0(), cfg.temperature(), cfg.noise);
    const auto p = cfg.pulse();
    const auto traj = variance_series(gf, p, eta, mom, grid);
    const auto mv = mean_velocity(gf, p, grid);
    w.series("dynamics.csv", grid,
             {{"G", gf.G}, {"G_dot", gf.Gdot}, {"G_ddot", gf.Gddot}, {"Q_mean", traj.mean_Q}, {"V_mean", mv},
              {"Q2", traj.var_Q}, {"V2", traj.var_V}});
    m.tolerance("G0_exact", std::abs(gf.G[0]), 0.0);
    m.tolerance("Gdot0_exact", std::abs(gf.Gdot[0] - 1.0), 0.0);
    if (kernel.fast_path()) m.tolerance("kernel_fast_path_validation", kernel.validation().max_error, kernel.validation().tolerance);
    m.value("green_residual", green_residual(gf, kernel.samples(grid.dt, grid.n, threads)));
    const auto times = grid.times();
    w.svg(cfg, "dynamics.svg", "Driven phonon",
          {{"Green's function", "t (ps)", "G (ps)", {{"G", times, gf.G}}},
           {"mean displacement", "t (ps)", "<Q>", {{"<Q>", times, traj.mean_Q}}}},
          1);
}

void heat(const RunConfig& cfg, Writer& w, Manifest& m, unsigned threads) {
    auto taus = taus_of(cfg);
    std::sort(taus.begin(), taus.end(), std::greater<>());
    std::vector<PlotPanel> qp, jp;
    for (double tau : taus) {
        const auto c = config_for_tau(cfg, tau);
        for (const auto& a : c.adjustments) {
            if (std::find(m.adjustments.begin(), m.adjustments.end(), tau_tag(tau) + ": " + a) == m.adjustments.end()) {
                m.adjustments.push_back(tau_tag(tau) + ": " + a);
            }
        }
        const auto r = run_heat(c, threads);
        const auto mv = mean_velocity(r.gf, c.pulse(), r.grid);
        const std::string tag = tau_tag(tau);
        std::vector<Column> cols{{"Q_mean", r.traj.mean_Q},
                                 {"V_mean", mv},
                                 {"J_kernel", r.heat.J_kernel},
                                 {"J_dissipative", r.heat.J_dissipative},
                                 {"J_fluctuation", r.heat.J_fluctuation},
                                 {"J_direct", r.heat.J_direct},
                                 {"Q_heat_integrated", r.heat.Q_integrated}};
        const double peak = max_abs(r.heat.J_kernel);
        if (c.noise == NoiseModel::classical) {
            const FrictionKernel kernel(c.density(), c.fast_kernel);
            const double rate = matched_markov_rate(kernel, c.omega0());
            const auto jm = markovian_heat_current(MarkovianModel(rate, c.temperature()), r.traj.var_V);
            const double from = r.grid.t0 + initial_slip_time(c.density());
            double dev = 0.0;
            for (std::size_t i = r.grid.index_at(from); i < r.grid.n; ++i) {
                dev = std::max(dev, std::abs(jm[i] - r.heat.J_kernel[i]));
            }
            m.value("markov_rate_" + tag, rate);
            m.tolerance("markov_vs_kernel_" + tag, dev / peak, 0.1);
            cols.push_back({"J_markov", jm});
        }
        w.series("heat_" + tag + ".csv", r.grid, cols);
        m.tolerance("direct_vs_kernel_" + tag,
                    max_abs_diff(r.heat.J_direct, r.heat.J_kernel, r.grid, r.grid.t_end()) / peak, 0.02);
        m.tolerance("direct_fd_noise_" + tag, r.direct.fd_noise, 0.01);
        m.value("J_peak_" + tag, peak);
        m.value("t_p_" + tag, r.t_p);
        m.value("tau_max_" + tag, r.tau_max);
        m.value("M_J_" + tag, r.mj.defined ? r.mj.value : std::nan(""));
        m.value("heat_end_" + tag, r.heat.Q_integrated.back());
        const auto times = r.grid.times();
        qp.push_back({label("<Q>, tau = %g ps", tau), "t (ps)", "<Q>", {{"<Q>", times, r.traj.mean_Q}}});
        jp.push_back({label("J, tau = %g ps", tau), "t (ps)", "J", {{"J", times, r.heat.J_kernel}}});
    }
    std::vector<PlotPanel> panels;
    for (std::size_t i = 0; i < qp.size(); ++i) panels.push_back(qp[i]);
    for (std::size_t i = 0; i < jp.size(); ++i) panels.push_back(jp[i]);
    w.svg(cfg, "heat.svg", "Displacement and heat current", panels, static_cast<int>(std::max<std::size_t>(1, qp.size())));
}

void oracle_compare(const RunConfig& cfg, Writer& w, Manifest& m, unsigned threads) {
    const auto t0 = Clock::now();
    const auto kr = run_heat(cfg, threads);
    m.timings_s.emplace_back("kernel", seconds_since(t0));
    const auto t1 = Clock::now();
    const auto orc = run_oracle(cfg);
    m.timings_s.emplace_back("oracle", seconds_since(t1));

    RunConfig noslip = cfg;
    noslip.slip = false;
    const auto ns = run_heat(noslip, threads);

    const TimeGrid& g = kr.grid;
    const double window = std::min(g.t_end(), 0.8 * orc.bath.recurrence_time);
    const double jpeak = max_abs(kr.heat.J_kernel), qpeak = max_abs(kr.traj.mean_Q);
    m.value("recurrence_time", orc.bath.recurrence_time);
    m.value("comparison_window_end", window);
    m.value("tail_fraction", orc.tail);
    m.tolerance("Q_kernel_vs_oracle", max_abs_diff(kr.traj.mean_Q, orc.ledger.mean_Q, g, window) / qpeak, 1e-3);
    m.tolerance("J_kernel_vs_oracle", max_abs_diff(kr.heat.J_kernel, orc.J, g, window) / jpeak, 0.02);
    m.tolerance("J_direct_vs_kernel", max_abs_diff(kr.heat.J_direct, kr.heat.J_kernel, g, g.t_end()) / jpeak, 0.02);
    m.tolerance("work_balance", orc.residuals.work_balance, 1e-6);
    m.tolerance("heat_identity", orc.residuals.heat_identity, 1e-6);
    m.value("J_noslip_vs_oracle", max_abs_diff(ns.heat.J_kernel, orc.J, g, window) / jpeak);
    m.note("J_noslip_vs_oracle", "kernel form without the slip force, relative to peak |J|; measures the finite-t0 transient");

    w.series("oracle_compare.csv", g,
             {{"Q_kernel", kr.traj.mean_Q},
              {"Q_oracle", orc.ledger.mean_Q},
              {"J_kernel", kr.heat.J_kernel},
              {"J_kernel_noslip", ns.heat.J_kernel},
              {"J_direct", kr.heat.J_direct},
              {"J_oracle", orc.J},
              {"E_B", orc.ledger.E_B},
              {"E_SB", orc.ledger.E_SB},
              {"E_tot", orc.ledger.E_tot},
              {"W_rate", orc.ledger.W_rate}});
    const auto times = g.times();
    w.svg(cfg, "oracle_compare.svg", "Kernel form against the finite-bath oracle",
          {{"heat current", "t (ps)", "J",
            {{"kernel", times, kr.heat.J_kernel}, {"direct", times, kr.heat.J_direct}, {"oracle", times, orc.J}}},
           {"mean displacement", "t (ps)", "<Q>",
            {{"kernel", times, kr.traj.mean_Q}, {"oracle", times, orc.ledger.mean_Q}}}},
          1);
}

void criterion(const RunConfig& cfg, Writer& w, Manifest& m, unsigned threads) {
    Column tau{"tau_ps", {}};
    std::vector<Column> cols{{"t_p_ps", {}},        {"tau_max_ps", {}},   {"M_J", {}},
                             {"backflow", {}},      {"exchanged", {}},    {"sign_changes", {}},
                             {"fraction_nonpositive", {}}, {"revival", {}}, {"monotonic_decay", {}},
                             {"null_ratio", {}},    {"transient_end_ps", {}}, {"Q_heat_end", {}}};
    for (double t : taus_of(cfg)) {
        const auto s = evaluate_signatures(config_for_tau(cfg, t), threads);
        tau.values.push_back(t);
        const double row[] = {s.t_p,
                              s.tau_max,
                              s.mj.defined ? s.mj.value : std::nan(""),
                              s.mj.backflow,
                              s.mj.total,
                              static_cast<double>(s.sign_changes),
                              s.fraction_nonpositive,
                              s.revival ? 1.0 : 0.0,
                              s.monotonic ? 1.0 : 0.0,
                              s.null_ratio,
                              s.transient_end,
                              s.heat_end};
        for (std::size_t k = 0; k < cols.size(); ++k) cols[k].values.push_back(row[k]);
        const std::string tag = tau_tag(t);
        m.tolerance("equilibrium_null_" + tag, s.null_ratio, 1e-3);
        m.value("M_J_" + tag, s.mj.defined ? s.mj.value : std::nan(""));
        m.value("sign_changes_" + tag, static_cast<double>(s.sign_changes));
        m.value("fraction_nonpositive_" + tag, s.fraction_nonpositive);
        m.value("revival_" + tag, s.revival ? 1.0 : 0.0);
        m.value("monotonic_decay_" + tag, s.monotonic ? 1.0 : 0.0);
    }
    w.csv("criterion.csv", tau, cols);
}

}  // namespace

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::psd_figure: return "psd-figure";
        case Scenario::pulse_figure: return "pulse-figure";
        case Scenario::dynamics: return "dynamics";
        case Scenario::heat: return "heat";
        case Scenario::oracle_compare: return "oracle-compare";
        case Scenario::criterion: return "criterion";
    }
    return "?";
}

std::vector<std::string> scenario_names() {
    return {"psd-figure", "pulse-figure", "dynamics", "heat", "oracle-compare", "criterion"};
}

Scenario parse_scenario(const std::string& s) {
    for (auto sc : {Scenario::psd_figure, Scenario::pulse_figure, Scenario::dynamics, Scenario::heat,
                    Scenario::oracle_compare, Scenario::criterion}) {
        if (to_string(sc) == s) return sc;
    }
    throw ConfigError("scenario", "unknown scenario '" + s + "'");
}

HeatRun run_heat(const RunConfig& cfg, unsigned threads, bool driven) {
    const FrictionKernel kernel(cfg.density(), cfg.fast_kernel);
    const Temperature temp = cfg.temperature();
    const double w0 = cfg.omega0();
    HeatRun r;
    r.cfg = cfg;
    r.grid = cfg.grid();
    const auto p = driven ? cfg.pulse() : GaussianPulse(0.0, cfg.tau0_ps, cfg.tau_ps, cfg.carrier());
    r.gf = solve_green(kernel, w0, r.grid, cfg.green_options());
    const auto eta = noise_series(kernel, temp, cfg.noise, r.grid.dt, r.grid.n, threads);
    const auto mom = initial_moments(w0, temp, cfg.noise);
    r.traj = variance_series(r.gf, p, eta, mom, r.grid);
    r.heat = cfg.extrapolate_heat
                 ? heat_current_extrapolated(kernel, temp, w0, p, r.grid, cfg.green_options(), cfg.noise, threads)
                 : heat_current_kernel_form(r.gf, kernel, eta, p, mom, r.grid);
    r.direct = heat_current_direct(r.traj, p, w0, r.grid);
    attach_direct(r.heat, r.direct);
    r.t_p = cfg.t_p.value_or(pulse_end_time(p));
    if (r.t_p >= r.grid.t_end()) throw ConfigError("heat.t_p", "pulse end lies beyond the grid; extend grid.horizon");
    r.tau_max = cfg.tau_max.value_or(relaxation_time(r.traj.mean_Q, r.heat.J_kernel, r.grid, r.t_p, cfg.relax_hold_ps));
    if (r.tau_max > r.t_p) r.mj = nonmarkovianity_indicator(r.heat.J_kernel, r.grid, r.t_p, r.tau_max);
    return r;
}

OracleRun run_oracle(const RunConfig& cfg, bool driven) {
    const auto sd = cfg.density();
    OracleRun o;
    o.bath = discretize_bath(sd, cfg.oracle_N, cfg.oracle_omega_max_rel * sd.omega(), cfg.oracle_scheme);
    o.tail = tail_fraction(sd, o.bath.omega_max);
    o.grid = cfg.grid();
    const auto p = driven ? cfg.pulse() : GaussianPulse(0.0, cfg.tau0_ps, cfg.tau_ps, cfg.carrier());
    const auto dyn = build_dynamics(o.bath, cfg.omega0(), p, cfg.oracle_counter_term);
    const auto s0 = initial_state(o.bath, cfg.omega0(), cfg.temperature());
    o.ledger = energy_ledger(propagate_normal_modes(s0, dyn, o.grid), dyn, o.grid);
    o.J = oracle_heat_current(o.ledger);
    o.residuals = ledger_residuals(o.ledger);
    return o;
}

Signatures evaluate_signatures(const RunConfig& cfg, unsigned threads) {
    const auto d = run_heat(cfg, threads, true);
    const auto n = run_heat(cfg, threads, false);
    Signatures s;
    s.tau_ps = cfg.tau_ps;
    s.t_p = d.t_p;
    s.tau_max = d.tau_max;
    s.mj = d.mj;
    const double end = d.grid.t_end();
    s.sign_changes = sign_changes(d.heat.J_kernel, d.grid, d.t_p, end);
    s.fraction_nonpositive = fraction_nonpositive(d.heat.J_kernel, d.grid, d.t_p, end);
    const auto peaks = envelope_peaks(d.traj.mean_Q, d.grid, d.t_p);
    s.revival = has_revival(peaks);
    s.monotonic = decays_monotonically(peaks);
    s.transient_end = green_decay_time(n.gf, 1e-2);
    double late = 0.0;
    for (std::size_t i = d.grid.index_at(s.transient_end); i < d.grid.n; ++i) {
        late = std::max(late, std::abs(n.heat.J_kernel[i]));
    }
    const double peak = max_abs(d.heat.J_kernel);
    s.null_ratio = peak > 0.0 ? late / peak : late;
    s.heat_end = d.heat.Q_integrated.back();
    return s;
}

ScenarioResult run_scenario(Scenario s, const RunConfig& cfg, const std::string& out_dir, unsigned threads) {
    const auto t0 = Clock::now();
    ScenarioResult res;
    res.manifest = base_manifest(s, cfg, threads);
    std::filesystem::create_directories(out_dir);
    Writer w{out_dir, res};
    const std::string ctx = to_string(s) + ": ";
    try {
        switch (s) {
            case Scenario::psd_figure: psd_figure(cfg, w, res.manifest, threads); break;
            case Scenario::pulse_figure: pulse_figure(cfg, w, res.manifest); break;
            case Scenario::dynamics: dynamics(cfg, w, res.manifest, threads); break;
            case Scenario::heat: heat(cfg, w, res.manifest, threads); break;
            case Scenario::oracle_compare: oracle_compare(cfg, w, res.manifest, threads); break;
            case Scenario::criterion: criterion(cfg, w, res.manifest, threads); break;
        }
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        if (!e.key().empty() && msg.rfind(e.key() + ": ", 0) == 0) msg.erase(0, e.key().size() + 2);
        throw ConfigError(e.key(), ctx + msg);
    } catch (const NumericalError& e) {
        throw NumericalError(ctx + e.what());
    } catch (const GridMismatch& e) {
        throw NumericalError(ctx + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError("", ctx + e.what());
    } catch (const std::out_of_range& e) {
        throw ConfigError("", ctx + e.what());
    }
    res.manifest.timings_s.emplace_back("total", seconds_since(t0));
    res.manifest.files = res.files;
    res.manifest.files.push_back("manifest.json");
    write_manifest(w.path("manifest.json"), res.manifest);
    res.files.push_back("manifest.json");
    return res;
}

}  // namespace phf
