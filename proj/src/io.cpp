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

#include "rtcov/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include "json.hpp"

namespace rtcov
{

namespace
{
std::vector<std::string> split_lines(const std::string &text)
{
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
    {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (!line.empty())
            lines.push_back(line);
    }
    return lines;
}

std::vector<double> parse_row(const std::string &line, std::size_t columns, std::size_t line_no)
{
    std::vector<double> out;
    const char *p = line.data();
    const char *end = line.data() + line.size();
    while (true)
    {
        double v = 0.0;
        auto [next, ec] = std::from_chars(p, end, v);
        if (ec != std::errc())
            throw FormatError("line " + std::to_string(line_no) + ": expected a number");
        out.push_back(v);
        p = next;
        if (p == end)
            break;
        if (*p != ',')
            throw FormatError("line " + std::to_string(line_no) + ": expected ','");
        ++p;
    }
    if (out.size() != columns)
        throw FormatError("line " + std::to_string(line_no) + ": expected " + std::to_string(columns) + " columns");
    return out;
}
} // namespace

std::string format_number(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::string read_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file_atomic(const std::filesystem::path &path, const std::string &content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out)
        {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError("write failed for '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
    {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot rename into '" + path.string() + "'");
    }
}

std::string coverage_csv(const CoverageMap &map)
{
    std::string out = "x_m,y_m,power_dbm\n";
    for (std::size_t iy = 0; iy < map.ny(); ++iy)
        for (std::size_t ix = 0; ix < map.nx(); ++ix)
        {
            out += format_number(map.xs[ix]);
            out += ',';
            out += format_number(map.ys[iy]);
            out += ',';
            out += format_number(map.at(iy, ix));
            out += '\n';
        }
    return out;
}

CoverageMap parse_coverage_csv(const std::string &text)
{
    const auto lines = split_lines(text);
    if (lines.empty() || lines.front() != "x_m,y_m,power_dbm")
        throw FormatError("coverage file must start with header 'x_m,y_m,power_dbm'");
    if (lines.size() < 2)
        throw FormatError("coverage file has no data rows");

    CoverageMap map;
    std::vector<std::array<double, 3>> rows;
    for (std::size_t i = 1; i < lines.size(); ++i)
    {
        const auto r = parse_row(lines[i], 3, i + 1);
        rows.push_back({r[0], r[1], r[2]});
    }
    std::size_t nx = 0;
    while (nx < rows.size() && rows[nx][1] == rows[0][1])
        ++nx;
    if (rows.size() % nx != 0)
        throw FormatError("coverage rows do not form a rectangular grid");
    for (std::size_t ix = 0; ix < nx; ++ix)
        map.xs.push_back(rows[ix][0]);
    for (std::size_t k = 0; k < rows.size(); ++k)
    {
        const std::size_t ix = k % nx;
        if (ix == 0)
            map.ys.push_back(rows[k][1]);
        if (rows[k][0] != map.xs[ix] || rows[k][1] != map.ys.back())
            throw FormatError("line " + std::to_string(k + 2) + ": point out of grid order");
        map.power_dbm.push_back(rows[k][2]);
    }
    return map;
}

CoverageMap read_coverage_csv(const std::filesystem::path &path) { return parse_coverage_csv(read_file(path)); }

std::string cdf_csv(const Cdf &cdf)
{
    std::string out = "power_dbm,prob\n";
    for (std::size_t i = 0; i < cdf.values.size(); ++i)
        out += format_number(cdf.values[i]) + ',' + format_number(cdf.probs[i]) + '\n';
    return out;
}

Cdf parse_cdf_csv(const std::string &text)
{
    const auto lines = split_lines(text);
    if (lines.empty() || lines.front() != "power_dbm,prob")
        throw FormatError("CDF file must start with header 'power_dbm,prob'");
    Cdf cdf;
    for (std::size_t i = 1; i < lines.size(); ++i)
    {
        const auto r = parse_row(lines[i], 2, i + 1);
        cdf.values.push_back(r[0]);
        cdf.probs.push_back(r[1]);
    }
    return cdf;
}

std::string heatmap_pgm(const CoverageMap &map, const HeatmapRange &range, std::size_t *clipped)
{
    std::string out = "P5\n" + std::to_string(map.nx()) + " " + std::to_string(map.ny()) + "\n255\n";
    std::size_t n_clipped = 0;
    const double span = range.hi_dbm - range.lo_dbm;
    for (std::size_t row = 0; row < map.ny(); ++row)
        for (std::size_t ix = 0; ix < map.nx(); ++ix)
        {
            double f = (map.at(map.ny() - 1 - row, ix) - range.lo_dbm) / span;
            if (f < 0.0 || f > 1.0)
            {
                ++n_clipped;
                f = std::clamp(f, 0.0, 1.0);
            }
            out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(f * 255.0))));
        }
    if (clipped)
        *clipped = n_clipped;
    return out;
}

std::string metadata_json(const CoverageMap &map, const std::string &label, const HeatmapRange &range,
                          std::size_t clipped, unsigned workers)
{
    const CoverageMetadata &m = map.metadata;
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(m.scene_hash));
    nlohmann::ordered_json j;
    j["label"] = label;
    j["scene_hash"] = hash;
    j["reflector_kind"] = m.reflector_kind;
    j["tilt_deg"] = m.tilt_deg;
    j["timestamp"] = m.timestamp;
    j["seed"] = m.seed;
    j["max_order"] = m.max_order;
    j["tile_size"] = m.tile_size;
    j["grid"] = {{"nx", map.nx()},
                 {"ny", map.ny()},
                 {"x_min", map.xs.front()},
                 {"y_min", map.ys.front()},
                 {"x_max", map.xs.back()},
                 {"y_max", map.ys.back()},
                 {"height", map.rx_height}};
    j["no_signal_dbm"] = -400.0;
    j["sentinel_count"] = m.sentinel_count;
    j["unmeasurable_count"] = m.unmeasurable_count;
    j["regime_warning"] = m.regime_warning;
    j["heatmap"] = {{"lo_dbm", range.lo_dbm}, {"hi_dbm", range.hi_dbm}, {"clipped", clipped}};
    j["workers"] = workers;
    return j.dump(2) + "\n";
}

} // namespace rtcov
