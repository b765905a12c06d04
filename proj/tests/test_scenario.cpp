#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "phf/config.hpp"
#include "phf/errors.hpp"
#include "phf/scenario.hpp"

using namespace phf;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("phf_sc_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    return p;
}

std::string first_line(const fs::path& p) {
    std::ifstream f(p);
    std::string l;
    std::getline(f, l);
    return l;
}

RunConfig short_run() {
    return parse_config_text("temperature_K = 70\ngrid.horizon = 12\ngrid.dt = 1/128\n", "t");
}

#ifdef PHF_TOOL_PATH
int run_tool(const std::string& args) {
    const std::string cmd = std::string(PHF_TOOL_PATH) + " " + args + " > /dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}
#endif

}  // namespace

TEST(Scenario, Names) {
    EXPECT_EQ(scenario_names().size(), 6u);
    for (const auto& n : scenario_names()) EXPECT_EQ(to_string(parse_scenario(n)), n);
    try {
        parse_scenario("heatt");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.key(), "scenario");
    }
}

TEST(Scenario, HeatCsvLayoutAndRerun) {
    const auto cfg = short_run();
    const auto a = scratch("heat_a"), b = scratch("heat_b");
    const auto ra = run_scenario(Scenario::heat, cfg, a.string(), 1);
    run_scenario(Scenario::heat, cfg, b.string(), 2);
    EXPECT_EQ(first_line(a / "heat_tau1.csv"),
              "t_ps,Q_mean,V_mean,J_kernel,J_dissipative,J_fluctuation,J_direct,Q_heat_integrated");
    EXPECT_EQ(slurp(a / "heat_tau1.csv"), slurp(b / "heat_tau1.csv"));
    EXPECT_TRUE(fs::exists(a / "manifest.json"));
    EXPECT_TRUE(fs::exists(a / "heat.svg"));
    EXPECT_EQ(ra.files.back(), "manifest.json");
    EXPECT_NE(slurp(a / "manifest.json").find(cfg.config_hash()), std::string::npos);
}

TEST(Scenario, PsdFigureColumns) {
    auto cfg = short_run();
    cfg.svg = false;
    const auto d = scratch("psd");
    run_scenario(Scenario::psd_figure, cfg, d.string(), 1);
    EXPECT_EQ(first_line(d / "coth.csv"), "temperature_K,coth_2THz,coth_config");
    EXPECT_EQ(first_line(d / "psd.csv").rfind("omega_rad_ps,", 0), 0u);
    EXPECT_FALSE(fs::exists(d / "psd.svg"));
}

TEST(Scenario, ErrorsCarryTheScenarioName) {
    auto cfg = short_run();
    cfg.oracle_N = 1;
    try {
        run_scenario(Scenario::oracle_compare, cfg, scratch("bad").string(), 1);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find(to_string(Scenario::oracle_compare) + ": "), std::string::npos) << e.what();
    }
}

#ifdef PHF_TOOL_PATH
TEST(Cli, ExitCodes) {
    const auto dir = scratch("cli");
    fs::create_directories(dir);
    const auto cfg = dir / "ok.cfg";
    std::ofstream(cfg) << "temperature_K = 70\ngrid.horizon = 4\ngrid.dt = 1/64\noutput.svg = false\n";
    const std::string base = " --config " + cfg.string() + " --out " + (dir / "out").string();
    EXPECT_EQ(run_tool(to_string(Scenario::pulse_figure) + base), 0);
    EXPECT_TRUE(fs::exists(dir / "out" / "pulse_time.csv"));
    EXPECT_EQ(run_tool("no_such_scenario" + base), 2);
    EXPECT_EQ(run_tool("dynamics" + base + " --set bath.Gamma_rel=3"), 2);
    EXPECT_EQ(run_tool("dynamics --config " + (dir / "missing.cfg").string()), 2);
    EXPECT_EQ(run_tool("dynamics"), 2);
}
#endif
