// SPDX-License-Identifier: Apache-2.0
//
// rtcov: deterministic 28 GHz indoor coverage ray tracer
// Copyright (C) 2026 rtcov authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <random>

#include "rtcov/config.hpp"
#include "rtcov/io.hpp"

using namespace rtcov;
using Catch::Approx;
namespace fs = std::filesystem;

namespace
{

const fs::path source_dir = RTCOV_SOURCE_DIR;

ConfigError config_error(const std::string &text)
{
    try
    {
        parse_config(text);
    }
    catch (const ConfigError &e)
    {
        return e;
    }
    FAIL("expected a ConfigError");
    return ConfigError("", "");
}

fs::path scratch(const std::string &name)
{
    const fs::path dir = fs::temp_directory_path() / ("rtcov_test_io_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("default configuration file")
{
    const SimulationConfig cfg = load_scene(source_dir / "configs" / "paper_default.json");
    CHECK(cfg.scene.frequency_hz == 28e9);
    CHECK(cfg.scene.tx_power_dbm == 0.0);
    CHECK(cfg.scene.tx_antenna.gain_dbi == 17.0);
    CHECK(cfg.scene.tx_antenna.hpbw_e_deg == 26.0);
    CHECK(cfg.scene.tx_antenna.hpbw_h_deg == 24.0);
    REQUIRE(cfg.scene.reflector);
    CHECK(cfg.scene.reflector->kind() == ReflectorKind::flat_plate);
    CHECK(cfg.scene.reflector->plate()->width == Approx(24 * inch));
    CHECK(cfg.grid.nx() == 7);
    CHECK(cfg.grid.ny() == 61);
    CHECK(cfg.trace.max_order == 2);
    CHECK(cfg.trace.tile_size == 0.25);

    const SimulationConfig none = load_scene(source_dir / "configs" / "no_reflector.json");
    CHECK_FALSE(none.scene.reflector);
}

TEST_CASE("empty configuration uses defaults without a reflector")
{
    const SimulationConfig cfg = parse_config("{}");
    CHECK_FALSE(cfg.scene.reflector);
    CHECK(cfg.scene.surfaces.size() == make_corridor(CorridorParams{}).surfaces.size());
    CHECK(cfg.grid.size() == default_grid(CorridorParams{}).size());
    const SimulationConfig with = with_reflector(cfg, ReflectorSpec::sphere(13 * inch));
    REQUIRE(with.scene.reflector);
    CHECK(with.scene.reflector->kind() == ReflectorKind::sphere);
}

TEST_CASE("configuration errors name the field")
{
    SECTION("scattering coefficient out of range")
    {
        const auto e = config_error(R"({"materials": [{"name": "layered_drywall", "scatter_coeff": 1.4}]})");
        CHECK(e.field().find("scatter_coeff") != std::string::npos);
    }
    SECTION("unknown key")
    {
        const auto e = config_error(R"({"grid": {"spacing": 0.5, "spacng": 1}})");
        CHECK(e.field() == "grid.spacng");
    }
    SECTION("syntax error reports the line")
    {
        const auto e = config_error("{\n  \"grid\": {\n    \"spacing\": ,\n  }\n}");
        CHECK(e.line() == 3);
    }
    SECTION("wrong type")
    {
        const auto e = config_error(R"({"corridor": {"height": "tall"}})");
        CHECK(e.field() == "corridor.height");
    }
    SECTION("non-positive dimension")
    {
        const auto e = config_error(R"({"corridor": {"main_width": 0}})");
        CHECK(e.field() == "corridor.main_width");
    }
    SECTION("tilt of 90 degrees")
    {
        const auto e = config_error(R"({"reflector": {"kind": "flat_plate", "dims": {"width": 0.6, "height": 0.6}, "tilt_deg": 90}})");
        CHECK(e.field() == "reflector.tilt_deg");
    }
    SECTION("unknown material reference")
    {
        const auto e = config_error(R"({"reflector": {"kind": "sphere", "dims": {"radius": 0.3}, "material": "gold"}})");
        CHECK(e.field().find("material") != std::string::npos);
    }
    SECTION("missing file")
    {
        CHECK_THROWS_AS(load_scene(source_dir / "configs" / "does_not_exist.json"), ConfigError);
    }
}

TEST_CASE("numbers round-trip through text")
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-200.0, 10.0);
    for (int i = 0; i < 10000; ++i)
    {
        const double v = u(rng);
        CHECK(std::stod(format_number(v)) == v);
    }
    CHECK(format_number(no_signal_dbm) == "-400");
}

TEST_CASE("coverage and CDF files round-trip exactly")
{
    ReceiverGrid g;
    g.origin = {6.25, 2.5, 0};
    CoverageMap m = CoverageMap::empty_for(g);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-130.0, -30.0);
    for (auto &v : m.power_dbm)
        v = u(rng);
    m.power_dbm[5] = no_signal_dbm;

    const std::string csv = coverage_csv(m);
    CHECK(csv.rfind("x_m,y_m,power_dbm\n", 0) == 0);
    const CoverageMap back = parse_coverage_csv(csv);
    CHECK(back.xs == m.xs);
    CHECK(back.ys == m.ys);
    CHECK(back.power_dbm == m.power_dbm);
    CHECK(same_grid(back, m));
    CHECK(coverage_csv(back) == csv);

    const Cdf c = cdf(m);
    const std::string cdf_text = cdf_csv(c);
    CHECK(cdf_text.rfind("power_dbm,prob\n", 0) == 0);
    const Cdf cb = parse_cdf_csv(cdf_text);
    CHECK(cb.values == c.values);
    CHECK(cb.probs == c.probs);
}

TEST_CASE("malformed coverage files are rejected")
{
    CHECK_THROWS_AS(parse_coverage_csv("x,y,p\n0,0,-50\n"), FormatError);
    CHECK_THROWS_AS(parse_coverage_csv("x_m,y_m,power_dbm\n0,0,abc\n"), FormatError);
    CHECK_THROWS_AS(parse_coverage_csv("x_m,y_m,power_dbm\n0,0,-50\n1,0,-50\n0,1,-50\n"), FormatError);
    CHECK_THROWS_AS(read_coverage_csv("/nonexistent/file.csv"), IoError);
}

TEST_CASE("heatmap raster")
{
    ReceiverGrid g;
    CoverageMap m = CoverageMap::empty_for(g);
    std::fill(m.power_dbm.begin(), m.power_dbm.end(), -80.0);
    m.power_dbm[0] = -130.0;
    m.power_dbm[1] = -20.0;
    m.power_dbm[2] = -40.0;
    std::size_t clipped = 0;
    const std::string pgm = heatmap_pgm(m, {}, &clipped);
    const std::string header = "P5\n7 61\n255\n";
    REQUIRE(pgm.rfind(header, 0) == 0);
    CHECK(pgm.size() == header.size() + 427);
    CHECK(clipped == 2);
    // Row 0 of the raster is the far end of the grid (largest y).
    const auto px = [&](std::size_t iy, std::size_t ix)
    { return static_cast<unsigned char>(pgm[header.size() + (60 - iy) * 7 + ix]); };
    CHECK(px(0, 0) == 0);
    CHECK(px(0, 1) == 255);
    CHECK(px(0, 2) == 255);
    CHECK(px(5, 5) == 128);
}

TEST_CASE("atomic writes")
{
    const fs::path dir = scratch("atomic");
    const fs::path target = dir / "a.txt";
    write_file_atomic(target, "hello");
    CHECK(read_file(target) == "hello");
    write_file_atomic(target, "bye");
    CHECK(read_file(target) == "bye");
    CHECK(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}) == 1);
    CHECK_THROWS_AS(write_file_atomic(dir / "missing" / "b.txt", "x"), IoError);
    CHECK_THROWS_AS(read_file(dir / "nope.txt"), IoError);
    fs::remove_all(dir);
}

TEST_CASE("metadata sidecar")
{
    ReceiverGrid g;
    CoverageMap m = CoverageMap::empty_for(g);
    m.metadata.reflector_kind = "cylinder";
    m.metadata.seed = 9;
    const std::string json = metadata_json(m, "cyl", {}, 3, 2);
    for (const char *key : {"\"label\": \"cyl\"", "\"reflector_kind\": \"cylinder\"", "\"seed\": 9", "\"clipped\": 3",
                            "\"scene_hash\"", "\"timestamp\"", "\"sentinel_count\""})
        CHECK(json.find(key) != std::string::npos);
}
