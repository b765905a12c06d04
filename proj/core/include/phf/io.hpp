#pragma once

// CSV, SVG and manifest output. CSV is the authoritative artifact: `%.12e`
// values, comma separated, Unix newlines, byte-stable for identical input.

#include <string>
#include <utility>
#include <vector>

#include "phf/grid.hpp"

namespace phf {

struct Column {
    std::string name;
    std::vector<double> values;
};

/// Header `<index_name>,<name>...`; all columns must match the index length.
/// An empty index writes the header only.
void write_csv(const std::string& path, const Column& index, const std::vector<Column>& columns);

/// Index column `t_ps` from the grid.
void write_series_csv(const std::string& path, const TimeGrid& grid, const std::vector<Column>& columns);

/// Same bytes as write_csv, returned as a string.
std::string format_csv(const Column& index, const std::vector<Column>& columns);

struct PlotSeries {
    std::string name;
    std::vector<double> x, y;
};

struct PlotPanel {
    std::string title, xlabel, ylabel;
    std::vector<PlotSeries> series;
};

/// Minimal line charts, panels stacked in a grid of `columns` columns.
void write_svg(const std::string& path, const std::string& title, const std::vector<PlotPanel>& panels,
               int columns = 1);

struct ToleranceRecord {
    std::string name;
    double achieved = 0.0;
    double limit = 0.0;
    bool passed = false;
};

struct Manifest {
    std::string scenario;
    std::string config_hash;
    std::string config_text;
    std::vector<std::string> adjustments;
    std::vector<ToleranceRecord> tolerances;
    std::vector<std::pair<std::string, double>> values;
    std::vector<std::pair<std::string, std::string>> notes;
    std::vector<std::string> files;
    std::vector<std::pair<std::string, double>> timings_s;
    unsigned threads = 1;

    void tolerance(const std::string& name, double achieved, double limit) {
        tolerances.push_back({name, achieved, limit, achieved <= limit});
    }
    void value(const std::string& name, double v) { values.emplace_back(name, v); }
    void note(const std::string& name, const std::string& text) { notes.emplace_back(name, text); }
};

std::string manifest_json(const Manifest& m);
void write_manifest(const std::string& path, const Manifest& m);

}  // namespace phf
