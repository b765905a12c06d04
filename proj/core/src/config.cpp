#include "phf/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "phf/errors.hpp"

namespace phf {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_plain(const std::string& key, const std::string& v) {
    double x = 0.0;
    const char* end = v.data() + v.size();
    const auto r = std::from_chars(v.data(), end, x);
    if (r.ec != std::errc() || r.ptr != end || !std::isfinite(x)) {
        throw ConfigError(key, "malformed number '" + v + "'");
    }
    return x;
}

// Accepts "a" or "a/b".
double parse_double(const std::string& key, const std::string& v) {
    const auto slash = v.find('/');
    if (slash == std::string::npos) return parse_plain(key, v);
    const double num = parse_plain(key, trim(v.substr(0, slash)));
    const double den = parse_plain(key, trim(v.substr(slash + 1)));
    if (den == 0.0) throw ConfigError(key, "division by zero in '" + v + "'");
    return num / den;
}

std::size_t parse_count(const std::string& key, const std::string& v) {
    std::size_t x = 0;
    const char* end = v.data() + v.size();
    const auto r = std::from_chars(v.data(), end, x);
    if (r.ec != std::errc() || r.ptr != end) throw ConfigError(key, "malformed integer '" + v + "'");
    return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "off" || v == "no" || v == "0") return false;
    throw ConfigError(key, "malformed boolean '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError(key, "empty list entry in '" + v + "'");
        out.push_back(parse_double(key, item));
    }
    return out;
}

template <class F>
auto rethrow_as_config(const std::string& key, F&& f) {
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(key, e.what());
    }
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"temperature_K", [](RunConfig& c, auto& k, auto& v) { c.temperature_K = parse_double(k, v); }},
        {"phonon.omega0_THz", [](RunConfig& c, auto& k, auto& v) { c.omega0_THz = parse_double(k, v); }},
        {"bath.Omega_THz", [](RunConfig& c, auto& k, auto& v) { c.Omega_THz = parse_double(k, v); }},
        {"bath.Gamma_rel", [](RunConfig& c, auto& k, auto& v) { c.Gamma_rel = parse_double(k, v); }},
        {"bath.g_rel", [](RunConfig& c, auto& k, auto& v) { c.g_rel = parse_double(k, v); }},
        {"bath.noise",
         [](RunConfig& c, auto& k, auto& v) { c.noise = rethrow_as_config(k, [&] { return parse_noise_model(v); }); }},
        {"pulse.ZE0", [](RunConfig& c, auto& k, auto& v) { c.ZE0 = parse_double(k, v); }},
        {"pulse.tau0_ps", [](RunConfig& c, auto& k, auto& v) { c.tau0_ps = parse_double(k, v); }},
        {"pulse.tau_ps", [](RunConfig& c, auto& k, auto& v) { c.tau_ps = parse_double(k, v); }},
        {"pulse.carrier_THz", [](RunConfig& c, auto& k, auto& v) { c.carrier_THz = parse_double(k, v); }},
        {"grid.t0", [](RunConfig& c, auto& k, auto& v) { c.t0 = parse_double(k, v); }},
        {"grid.dt", [](RunConfig& c, auto& k, auto& v) { c.dt = parse_double(k, v); }},
        {"grid.horizon", [](RunConfig& c, auto& k, auto& v) { c.horizon = parse_double(k, v); }},
        {"method.green",
         [](RunConfig& c, auto& k, auto& v) { c.green = rethrow_as_config(k, [&] { return parse_green_method(v); }); }},
        {"method.slip", [](RunConfig& c, auto& k, auto& v) { c.slip = parse_bool(k, v); }},
        {"method.fast_kernel", [](RunConfig& c, auto& k, auto& v) { c.fast_kernel = parse_bool(k, v); }},
        {"method.richardson",
         [](RunConfig& c, auto& k, auto& v) { c.richardson = static_cast<unsigned>(parse_count(k, v)); }},
        {"method.extrapolate_heat", [](RunConfig& c, auto& k, auto& v) { c.extrapolate_heat = parse_bool(k, v); }},
        {"oracle.N", [](RunConfig& c, auto& k, auto& v) { c.oracle_N = parse_count(k, v); }},
        {"oracle.omega_max_rel", [](RunConfig& c, auto& k, auto& v) { c.oracle_omega_max_rel = parse_double(k, v); }},
        {"oracle.scheme",
         [](RunConfig& c, auto& k, auto& v) {
             c.oracle_scheme = rethrow_as_config(k, [&] { return parse_bath_scheme(v); });
         }},
        {"oracle.counter_term", [](RunConfig& c, auto& k, auto& v) { c.oracle_counter_term = parse_bool(k, v); }},
        {"heat.t_p", [](RunConfig& c, auto& k, auto& v) { c.t_p = parse_double(k, v); }},
        {"heat.tau_max", [](RunConfig& c, auto& k, auto& v) { c.tau_max = parse_double(k, v); }},
        {"heat.relax_hold_ps", [](RunConfig& c, auto& k, auto& v) { c.relax_hold_ps = parse_double(k, v); }},
        {"heat.tau_list_ps", [](RunConfig& c, auto& k, auto& v) { c.tau_list_ps = parse_list(k, v); }},
        {"output.dir", [](RunConfig& c, auto&, auto& v) { c.output_dir = v; }},
        {"output.svg", [](RunConfig& c, auto& k, auto& v) { c.svg = parse_bool(k, v); }},
        {"external.mode_table", [](RunConfig& c, auto&, auto& v) { c.mode_table = v; }},
    };
    return table;
}

void apply(RunConfig& cfg, const std::string& key, const std::string& value) {
    const auto& t = setters();
    const auto it = t.find(key);
    if (it == t.end()) throw ConfigError(key, "unknown key");
    if (value.empty()) throw ConfigError(key, "missing value");
    it->second(cfg, key, value);
    cfg.explicit_keys.insert(key);
}

void require(bool ok, const std::string& key, const std::string& msg) {
    if (!ok) throw ConfigError(key, msg);
}

}  // namespace

LorentzianSpectralDensity RunConfig::density() const { return LorentzianSpectralDensity(g(), Gamma(), Omega()); }

GaussianPulse RunConfig::pulse() const { return GaussianPulse(ZE0, tau0_ps, tau_ps, carrier()); }

TimeGrid RunConfig::grid() const { return TimeGrid::covering(t0, dt, horizon); }

RunConfig RunConfig::with_tau(double tau) const {
    RunConfig c = *this;
    c.tau_ps = tau;
    c.adjustments.clear();
    const RunConfig defaults;
    if (!c.explicit_keys.count("pulse.tau0_ps")) c.tau0_ps = defaults.tau0_ps;
    if (!c.explicit_keys.count("grid.horizon")) c.horizon = defaults.horizon;
    apply_pulse_rules(c);
    validate(c);
    return c;
}

std::string RunConfig::canonical() const {
    std::map<std::string, std::string> kv;
    kv["temperature_K"] = fmt(temperature_K);
    kv["phonon.omega0_THz"] = fmt(omega0_THz);
    kv["bath.Omega_THz"] = fmt(Omega_THz);
    kv["bath.Gamma_rel"] = fmt(Gamma_rel);
    kv["bath.g_rel"] = fmt(g_rel);
    kv["bath.noise"] = to_string(noise);
    kv["pulse.ZE0"] = fmt(ZE0);
    kv["pulse.tau0_ps"] = fmt(tau0_ps);
    kv["pulse.tau_ps"] = fmt(tau_ps);
    kv["pulse.carrier_THz"] = fmt(carrier_THz.value_or(omega0_THz));
    kv["grid.t0"] = fmt(t0);
    kv["grid.dt"] = fmt(dt);
    kv["grid.horizon"] = fmt(horizon);
    kv["method.green"] = to_string(green);
    kv["method.slip"] = slip ? "true" : "false";
    kv["method.fast_kernel"] = fast_kernel ? "true" : "false";
    kv["method.richardson"] = std::to_string(richardson);
    kv["method.extrapolate_heat"] = extrapolate_heat ? "true" : "false";
    kv["oracle.N"] = std::to_string(oracle_N);
    kv["oracle.omega_max_rel"] = fmt(oracle_omega_max_rel);
    kv["oracle.scheme"] = to_string(oracle_scheme);
    kv["oracle.counter_term"] = oracle_counter_term ? "true" : "false";
    kv["heat.t_p"] = t_p ? fmt(*t_p) : "auto";
    kv["heat.tau_max"] = tau_max ? fmt(*tau_max) : "auto";
    kv["heat.relax_hold_ps"] = fmt(relax_hold_ps);
    std::string list;
    for (double x : tau_list_ps) list += (list.empty() ? "" : ",") + fmt(x);
    kv["heat.tau_list_ps"] = list.empty() ? fmt(tau_ps) : list;
    kv["output.svg"] = svg ? "true" : "false";
    kv["external.mode_table"] = mode_table;
    std::string out;
    for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
    return out;
}

std::string RunConfig::config_hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : canonical()) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void apply_pulse_rules(RunConfig& cfg) {
    if (!(cfg.tau_ps > 1.0)) return;
    if (!cfg.explicit_keys.count("pulse.tau0_ps")) {
        const double tau0 = std::max(5.0, 3.0 * cfg.tau_ps);
        if (tau0 != cfg.tau0_ps) {
            cfg.adjustments.push_back("pulse.tau0_ps " + fmt(cfg.tau0_ps) + " -> " + fmt(tau0) +
                                      " (t0 at least 3 pulse widths before the peak)");
            cfg.tau0_ps = tau0;
        }
    }
    if (!cfg.explicit_keys.count("grid.horizon")) {
        const double horizon = std::max(40.0, cfg.tau0_ps + 9.0 * cfg.tau_ps);
        if (horizon != cfg.horizon) {
            cfg.adjustments.push_back("grid.horizon " + fmt(cfg.horizon) + " -> " + fmt(horizon) +
                                      " (room for the post-pulse relaxation)");
            cfg.horizon = horizon;
        }
    }
}

void validate(const RunConfig& c) {
    require(c.temperature_K >= 0.0, "temperature_K", "must be >= 0");
    require(c.omega0_THz > 0.0, "phonon.omega0_THz", "must be > 0");
    require(c.Omega_THz > 0.0, "bath.Omega_THz", "must be > 0");
    require(c.Gamma_rel > 0.0, "bath.Gamma_rel", "must be > 0");
    require(c.g_rel >= 0.0, "bath.g_rel", "must be >= 0");
    if (c.green == GreenMethod::embedding) {
        require(c.Gamma_rel < 2.0, "bath.Gamma_rel", "must be < 2 (underdamped bath) for the embedding solver");
        require(c.fast_kernel, "method.fast_kernel", "the embedding solver needs the fast kernel");
    }
    require(c.ZE0 >= 0.0, "pulse.ZE0", "must be >= 0");
    require(c.tau_ps > 0.0, "pulse.tau_ps", "must be > 0");
    require(!c.carrier_THz || *c.carrier_THz >= 0.0, "pulse.carrier_THz", "must be >= 0");
    require(c.dt > 0.0, "grid.dt", "must be > 0");
    require(c.horizon > 2.0 * c.dt, "grid.horizon", "must cover at least two steps");
    require(c.horizon / c.dt <= 4.0e6, "grid.dt", "more than 4e6 steps");
    require(c.richardson <= 4, "method.richardson", "at most 4 levels");
    require(c.oracle_N >= 2, "oracle.N", "must be >= 2");
    require(c.oracle_omega_max_rel > 1.0 + 10.0 * c.Gamma_rel, "oracle.omega_max_rel",
            "must exceed 1 + 10 Gamma_rel (omega_max > Omega + 10 Gamma)");
    require(c.relax_hold_ps > 0.0, "heat.relax_hold_ps", "must be > 0");
    for (double t : c.tau_list_ps) require(t > 0.0, "heat.tau_list_ps", "entries must be > 0");
    if (c.t_p) require(*c.t_p >= c.t0 && *c.t_p < c.t0 + c.horizon, "heat.t_p", "must lie inside the grid");
    if (c.tau_max) {
        require(*c.tau_max <= c.t0 + c.horizon, "heat.tau_max", "must lie inside the grid");
        require(!c.t_p || *c.tau_max > *c.t_p, "heat.tau_max", "must exceed heat.t_p");
    }
}

std::pair<std::string, std::string> split_override(const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError(trim(kv), "override must look like key=value");
    return {trim(kv.substr(0, eq)), trim(kv.substr(eq + 1))};
}

RunConfig parse_config_text(const std::string& text, const std::string& origin,
                            const std::vector<std::pair<std::string, std::string>>& overrides) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = origin + ":" + std::to_string(lineno);
        if (eq == std::string::npos) throw ConfigError("", where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!seen.insert(key).second) throw ConfigError(key, where + ": duplicate key");
        try {
            apply(cfg, key, value);
        } catch (const ConfigError& e) {
            std::string msg = e.what();
            const std::string prefix = e.key() + ": ";
            if (!e.key().empty() && msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
            throw ConfigError(e.key(), where + ": " + msg);
        }
    }
    for (const auto& [k, v] : overrides) apply(cfg, k, v);
    if (!cfg.explicit_keys.count("temperature_K")) throw ConfigError("temperature_K", "required key missing");
    apply_pulse_rules(cfg);
    validate(cfg);
    return cfg;
}

RunConfig parse_config(const std::string& path, const std::vector<std::pair<std::string, std::string>>& overrides) {
    std::ifstream f(path);
    if (!f) throw ConfigError("", "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    RunConfig cfg = parse_config_text(ss.str(), path, overrides);
    if (!cfg.mode_table.empty()) {
        const std::filesystem::path p(cfg.mode_table);
        if (p.is_relative()) cfg.mode_table = (std::filesystem::path(path).parent_path() / p).string();
    }
    return cfg;
}

ExternalModeTable read_mode_table(const std::string& path) {
    const std::string key = "external.mode_table";
    std::ifstream f(path);
    if (!f) throw ConfigError(key, "cannot open '" + path + "'");
    ExternalModeTable t;
    std::string line;
    bool header = false;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto comma = line.find(',');
        const std::string where = path + ":" + std::to_string(lineno) + ": ";
        if (comma == std::string::npos) throw ConfigError(key, where + "expected two columns");
        const std::string a = trim(line.substr(0, comma)), b = trim(line.substr(comma + 1));
        if (!header) {
            if (a != "temperature_K" || b != "omega0_THz") {
                throw ConfigError(key, where + "header must be 'temperature_K,omega0_THz'");
            }
            header = true;
            continue;
        }
        const double temp = parse_double(key, a), w = parse_double(key, b);
        if (!(temp >= 0.0)) throw ConfigError(key, where + "temperature must be >= 0");
        if (!(w > 0.0)) throw ConfigError(key, where + "frequency must be > 0");
        if (!t.temperature_K.empty() && !(temp > t.temperature_K.back())) {
            throw ConfigError(key, where + "temperatures must be strictly increasing");
        }
        t.temperature_K.push_back(temp);
        t.omega0_THz.push_back(w);
    }
    if (!header) throw ConfigError(key, "'" + path + "' has no header");
    return t;
}

}  // namespace phf
