#pragma once

// Scenario orchestration: each scenario writes CSV files, optional SVG charts
// and a manifest.json into the output directory.

#include <string>
#include <vector>

#include "phf/config.hpp"
#include "phf/gle.hpp"
#include "phf/heat.hpp"
#include "phf/io.hpp"
#include "phf/oracle.hpp"

namespace phf {

enum class Scenario { psd_figure, pulse_figure, dynamics, heat, oracle_compare, criterion };

std::string to_string(Scenario s);
/// Throws ConfigError (key "scenario") for unknown names.
Scenario parse_scenario(const std::string& s);
std::vector<std::string> scenario_names();

/// Everything one heat run produces, on cfg.grid().
struct HeatRun {
    RunConfig cfg;
    TimeGrid grid;
    GreenFunction gf;
    TrajectoryBundle traj;
    HeatSeries heat;
    DirectHeat direct;
    double t_p = 0.0;
    double tau_max = 0.0;
    NonMarkovianity mj;
};

/// `driven = false` sets the pulse amplitude to zero.
HeatRun run_heat(const RunConfig& cfg, unsigned threads = 1, bool driven = true);

struct OracleRun {
    DiscretizedBath bath;
    TimeGrid grid;
    EnergyLedger ledger;
    std::vector<double> J;
    LedgerResiduals residuals;
    double tail = 0.0;
};

OracleRun run_oracle(const RunConfig& cfg, bool driven = true);

/// Signatures evaluated by the criterion scenario.
struct Signatures {
    double tau_ps = 0.0;
    double t_p = 0.0, tau_max = 0.0;
    NonMarkovianity mj;
    std::size_t sign_changes = 0;
    double fraction_nonpositive = 0.0;
    bool revival = false;
    bool monotonic = false;
    double null_ratio = 0.0;   // max |J_null| after the transient / driven peak
    double transient_end = 0.0;
    double heat_end = 0.0;     // integrated heat at the grid end
};

Signatures evaluate_signatures(const RunConfig& cfg, unsigned threads = 1);

struct ScenarioResult {
    std::vector<std::string> files;
    Manifest manifest;
};

/// Creates out_dir if needed. Module errors propagate with the scenario name
/// prepended to the message.
ScenarioResult run_scenario(Scenario s, const RunConfig& cfg, const std::string& out_dir, unsigned threads = 1);

}  // namespace phf
