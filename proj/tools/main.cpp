// phonon-heatflow <scenario> --config <path> [--out <dir>] [--threads <n>] [--set key=value]...

#include <cstdio>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "phf/config.hpp"
#include "phf/errors.hpp"
#include "phf/parallel.hpp"
#include "phf/scenario.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::string join(const std::vector<std::string>& v, const char* sep) {
    std::string out;
    for (const auto& s : v) out += (out.empty() ? "" : sep) + s;
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Driven phonon in a structured quantum bath: dynamics and heat current"};
    std::string scenario, config_path, out_dir;
    unsigned threads = 0;
    std::vector<std::string> sets;
    app.add_option("scenario", scenario, join(phf::scenario_names(), " | "))->required();
    app.add_option("--config,-c", config_path, "run configuration (key = value)")->required();
    app.add_option("--out,-o", out_dir, "output directory (default: output.dir from the config)");
    app.add_option("--threads,-j", threads, "worker threads (default: PHONON_HEATFLOW_THREADS or all cores)");
    app.add_option("--set", sets, "override a config entry, key=value; repeatable");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        const auto sc = phf::parse_scenario(scenario);
        std::vector<std::pair<std::string, std::string>> overrides;
        for (const auto& s : sets) overrides.push_back(phf::split_override(s));
        const auto cfg = phf::parse_config(config_path, overrides);
        if (threads == 0) threads = phf::default_thread_count();
        const std::string dir = out_dir.empty() ? cfg.output_dir : out_dir;

        const auto res = phf::run_scenario(sc, cfg, dir, threads);
        for (const auto& a : res.manifest.adjustments) std::printf("adjusted  %s\n", a.c_str());
        for (const auto& t : res.manifest.tolerances) {
            std::printf("%-6s %-34s %.3e (limit %.1e)\n", t.passed ? "ok" : "FAIL", t.name.c_str(), t.achieved, t.limit);
        }
        for (const auto& [k, v] : res.manifest.values) std::printf("value  %-34s %.6g\n", k.c_str(), v);
        std::printf("wrote %zu files to %s\n", res.files.size(), dir.c_str());
        return 0;
    } catch (const phf::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const phf::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
