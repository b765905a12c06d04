#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "phf/errors.hpp"
#include "phf/io.hpp"

using namespace phf;

namespace {

std::string slurp(const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string tmp(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("phf_io_" + std::to_string(::getpid()) + "_" + name)).string();
}

}  // namespace

TEST(Csv, FormatAndNegativeZero) {
    const auto s = format_csv({"t_ps", {0.0, 0.5}}, {{"a", {-0.0, 1.0 / 3.0}}, {"b", {-2.5e-7, 1e300}}});
    EXPECT_EQ(s,
              "t_ps,a,b\n"
              "0.000000000000e+00,0.000000000000e+00,-2.500000000000e-07\n"
              "5.000000000000e-01,3.333333333333e-01,1.000000000000e+300\n");
    EXPECT_EQ(format_csv({"x", {}}, {{"y", {}}}), "x,y\n");
    EXPECT_THROW(format_csv({"x", {1.0}}, {{"y", {}}}), GridMismatch);
}

TEST(Csv, FileMatchesStringAndGridIndex) {
    const auto p = tmp("a.csv");
    const TimeGrid g(0.0, 0.25, 3);
    write_series_csv(p, g, {{"y", {1.0, 2.0, 3.0}}});
    EXPECT_EQ(slurp(p), format_csv({"t_ps", {0.0, 0.25, 0.5}}, {{"y", {1.0, 2.0, 3.0}}}));
    EXPECT_THROW(write_series_csv(p, g, {{"y", {1.0}}}), GridMismatch);
}

TEST(Manifest, JsonRoundTrip) {
    Manifest m;
    m.scenario = "heat";
    m.config_hash = "0123456789abcdef";
    m.adjustments = {"grid.horizon 40 -> 60"};
    m.tolerance("direct", 1e-3, 2e-2);
    m.tolerance("bad", 0.5, 0.1);
    m.value("peak", 2.5);
    m.value("undefined", std::numeric_limits<double>::quiet_NaN());
    m.note("why", "text");
    m.files = {"heat.csv"};
    m.threads = 4;
    const auto j = nlohmann::json::parse(manifest_json(m));
    EXPECT_EQ(j["scenario"], "heat");
    EXPECT_EQ(j["threads"], 4);
    EXPECT_EQ(j["tolerances"][0]["passed"], true);
    EXPECT_EQ(j["tolerances"][1]["passed"], false);
    EXPECT_DOUBLE_EQ(j["values"]["peak"].get<double>(), 2.5);
    EXPECT_TRUE(j["values"]["undefined"].is_null());
    EXPECT_EQ(j["adjustments"][0], "grid.horizon 40 -> 60");
    EXPECT_EQ(manifest_json(m), manifest_json(m));
}

TEST(Svg, WritesEscapedPolylines) {
    const auto p = tmp("a.svg");
    write_svg(p, "A <b>", {{"p", "x", "y", {{"s&1", {0.0, 1.0, 2.0}, {0.0, -1.0, 4.0}}}}, {"q", "x", "y", {}}}, 2);
    const auto s = slurp(p);
    EXPECT_EQ(s.rfind("<svg", 0), 0u);
    EXPECT_NE(s.find("<polyline"), std::string::npos);
    EXPECT_NE(s.find("A &lt;b&gt;"), std::string::npos);
    EXPECT_NE(s.find("s&amp;1"), std::string::npos);
    EXPECT_NE(s.find("</svg>"), std::string::npos);
}
