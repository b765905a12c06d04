#include "phf/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "phf/errors.hpp"

namespace phf {

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << text;
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12e", x == 0.0 ? 0.0 : x);
    return buf;
}

std::string short_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Round a span to 1, 2 or 5 times a power of ten.
double nice_step(double span, int target) {
    if (!(span > 0.0)) return 1.0;
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

}  // namespace

std::string format_csv(const Column& index, const std::vector<Column>& columns) {
    for (const auto& c : columns) {
        if (c.values.size() != index.values.size()) {
            throw GridMismatch("csv column '" + c.name + "' has " + std::to_string(c.values.size()) +
                               " rows, index has " + std::to_string(index.values.size()));
        }
    }
    std::string out = index.name;
    for (const auto& c : columns) out += "," + c.name;
    out += "\n";
    for (std::size_t i = 0; i < index.values.size(); ++i) {
        out += num(index.values[i]);
        for (const auto& c : columns) out += "," + num(c.values[i]);
        out += "\n";
    }
    return out;
}

void write_csv(const std::string& path, const Column& index, const std::vector<Column>& columns) {
    write_text(path, format_csv(index, columns));
}

void write_series_csv(const std::string& path, const TimeGrid& grid, const std::vector<Column>& columns) {
    write_csv(path, Column{"t_ps", grid.times()}, columns);
}

void write_svg(const std::string& path, const std::string& title, const std::vector<PlotPanel>& panels, int columns) {
    columns = std::max(1, columns);
    const int rows = static_cast<int>((panels.size() + static_cast<std::size_t>(columns) - 1) / static_cast<std::size_t>(columns));
    const double pw = 460, ph = 300, ml = 70, mr = 20, mt = 34, mb = 46, top = 36;
    const double width = pw * columns, height = top + ph * std::max(rows, 1);
    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + short_num(width) + "\" height=\"" + short_num(height) +
         "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + short_num(width / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) +
         "</text>\n";
    for (std::size_t p = 0; p < panels.size(); ++p) {
        const auto& panel = panels[p];
        const double ox = pw * static_cast<double>(static_cast<int>(p) % columns);
        const double oy = top + ph * static_cast<double>(static_cast<int>(p) / columns);
        const double x0 = ox + ml, x1 = ox + pw - mr, y0 = oy + ph - mb, y1 = oy + mt;
        double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
        for (const auto& se : panel.series) {
            for (std::size_t i = 0; i < se.x.size() && i < se.y.size(); ++i) {
                if (!std::isfinite(se.x[i]) || !std::isfinite(se.y[i])) continue;
                xmin = std::min(xmin, se.x[i]);
                xmax = std::max(xmax, se.x[i]);
                ymin = std::min(ymin, se.y[i]);
                ymax = std::max(ymax, se.y[i]);
            }
        }
        if (!(xmax > xmin)) { xmin = 0; xmax = 1; }
        if (!(ymax > ymin)) { ymin -= 1; ymax += 1; }
        const double pad = 0.05 * (ymax - ymin);
        ymin -= pad;
        ymax += pad;
        const auto X = [&](double x) { return x0 + (x - xmin) / (xmax - xmin) * (x1 - x0); };
        const auto Y = [&](double y) { return y0 - (y - ymin) / (ymax - ymin) * (y0 - y1); };

        s += "<text x=\"" + short_num((x0 + x1) / 2) + "\" y=\"" + short_num(oy + 20) +
             "\" text-anchor=\"middle\" font-size=\"12\">" + escape(panel.title) + "</text>\n";
        s += "<rect x=\"" + short_num(x0) + "\" y=\"" + short_num(y1) + "\" width=\"" + short_num(x1 - x0) +
             "\" height=\"" + short_num(y0 - y1) + "\" fill=\"none\" stroke=\"black\"/>\n";
        const double xs = nice_step(xmax - xmin, 6), ys = nice_step(ymax - ymin, 5);
        for (double x = std::ceil(xmin / xs) * xs; x <= xmax + 1e-9 * xs; x += xs) {
            s += "<line x1=\"" + short_num(X(x)) + "\" x2=\"" + short_num(X(x)) + "\" y1=\"" + short_num(y0) +
                 "\" y2=\"" + short_num(y0 + 4) + "\" stroke=\"black\"/>";
            s += "<text x=\"" + short_num(X(x)) + "\" y=\"" + short_num(y0 + 16) + "\" text-anchor=\"middle\">" +
                 short_num(std::abs(x) < 1e-12 * xs ? 0.0 : x) + "</text>\n";
        }
        for (double y = std::ceil(ymin / ys) * ys; y <= ymax + 1e-9 * ys; y += ys) {
            s += "<line x1=\"" + short_num(x0 - 4) + "\" x2=\"" + short_num(x0) + "\" y1=\"" + short_num(Y(y)) +
                 "\" y2=\"" + short_num(Y(y)) + "\" stroke=\"black\"/>";
            s += "<text x=\"" + short_num(x0 - 6) + "\" y=\"" + short_num(Y(y) + 4) + "\" text-anchor=\"end\">" +
                 short_num(std::abs(y) < 1e-12 * ys ? 0.0 : y) + "</text>\n";
        }
        if (ymin < 0 && ymax > 0) {
            s += "<line x1=\"" + short_num(x0) + "\" x2=\"" + short_num(x1) + "\" y1=\"" + short_num(Y(0)) +
                 "\" y2=\"" + short_num(Y(0)) + "\" stroke=\"#aaa\" stroke-dasharray=\"3,3\"/>\n";
        }
        s += "<text x=\"" + short_num((x0 + x1) / 2) + "\" y=\"" + short_num(y0 + 34) + "\" text-anchor=\"middle\">" +
             escape(panel.xlabel) + "</text>\n";
        s += "<text transform=\"translate(" + short_num(ox + 14) + "," + short_num((y0 + y1) / 2) +
             ") rotate(-90)\" text-anchor=\"middle\">" + escape(panel.ylabel) + "</text>\n";

        for (std::size_t k = 0; k < panel.series.size(); ++k) {
            const auto& se = panel.series[k];
            const std::size_t n = std::min(se.x.size(), se.y.size());
            const std::size_t stride = std::max<std::size_t>(1, n / 2000);
            std::string pts;
            for (std::size_t i = 0; i < n; i += stride) {
                if (!std::isfinite(se.y[i])) continue;
                char buf[48];
                std::snprintf(buf, sizeof buf, "%.1f,%.1f ", X(se.x[i]), Y(se.y[i]));
                pts += buf;
            }
            const char* color = kColors[k % (sizeof kColors / sizeof kColors[0])];
            s += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.2\" points=\"" + pts +
                 "\"/>\n";
            s += "<text x=\"" + short_num(x1 - 6) + "\" y=\"" + short_num(y1 + 14 + 13 * static_cast<double>(k)) +
                 "\" text-anchor=\"end\" fill=\"" + color + "\">" + escape(se.name) + "</text>\n";
        }
    }
    s += "</svg>\n";
    write_text(path, s);
}

std::string manifest_json(const Manifest& m) {
    nlohmann::ordered_json j;
    j["scenario"] = m.scenario;
    j["config_hash"] = m.config_hash;
    j["config"] = m.config_text;
    j["adjustments"] = m.adjustments;
    j["threads"] = m.threads;
    auto tol = nlohmann::ordered_json::array();
    for (const auto& t : m.tolerances) {
        tol.push_back({{"name", t.name}, {"achieved", t.achieved}, {"limit", t.limit}, {"passed", t.passed}});
    }
    j["tolerances"] = tol;
    auto vals = nlohmann::ordered_json::object();
    for (const auto& [k, v] : m.values) vals[k] = std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
    j["values"] = vals;
    auto notes = nlohmann::ordered_json::object();
    for (const auto& [k, v] : m.notes) notes[k] = v;
    j["notes"] = notes;
    j["files"] = m.files;
    auto timing = nlohmann::ordered_json::object();
    for (const auto& [k, v] : m.timings_s) timing[k] = v;
    j["timings_s"] = timing;
    return j.dump(2) + "\n";
}

void write_manifest(const std::string& path, const Manifest& m) { write_text(path, manifest_json(m)); }

}  // namespace phf
