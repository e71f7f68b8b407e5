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
#include "rtcov/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <utility>

#include "rtcov/config.hpp"
#include "rtcov/io.hpp"
#include "rtcov/sweep.hpp"

namespace rtcov::cli
{
namespace
{

namespace fs = std::filesystem;

using FileSet = std::vector<std::pair<fs::path, std::string>>;

// All-or-nothing write: every file is staged next to its target before any rename.
void commit(const FileSet &files)
{
    std::vector<fs::path> staged;
    auto discard = [&]
    {
        std::error_code ec;
        for (const auto &p : staged)
            fs::remove(p, ec);
    };
    for (const auto &[path, content] : files)
    {
        fs::path tmp = path;
        tmp += ".tmp";
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (f)
            staged.push_back(tmp);
        if (!f || !f.write(content.data(), static_cast<std::streamsize>(content.size())) || !f.flush())
        {
            discard();
            throw IoError("cannot write " + path.string());
        }
    }
    for (std::size_t i = 0; i < files.size(); ++i)
    {
        std::error_code ec;
        fs::rename(staged[i], files[i].first, ec);
        if (ec)
        {
            discard();
            throw IoError("cannot rename " + staged[i].string() + ": " + ec.message());
        }
    }
}

void ensure_dir(const fs::path &dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw IoError("cannot create output directory " + dir.string());
}

void report_config_error(const ConfigError &e, std::ostream &err) { err << "config error: " << e.what() << '\n'; }

FileSet sweep_files(const CoverageMap &map, const fs::path &dir, const std::string &label, unsigned workers)
{
    const HeatmapRange range;
    std::size_t clipped = 0;
    std::string pgm = heatmap_pgm(map, range, &clipped);
    return {
        {dir / (label + ".coverage.csv"), coverage_csv(map)},
        {dir / (label + ".cdf.csv"), cdf_csv(cdf(map))},
        {dir / (label + ".meta.json"), metadata_json(map, label, range, clipped, workers)},
        {dir / (label + ".pgm"), std::move(pgm)},
    };
}

SimulationConfig load_with_overrides(const RunManifest &m)
{
    SimulationConfig cfg = load_scene(m.config);
    if (m.seed)
        cfg.trace.seed = *m.seed;
    if (m.max_order)
        cfg.trace.max_order = *m.max_order;
    if (m.tile_size)
        cfg.trace.tile_size = *m.tile_size;
    cfg.trace.validate();
    return cfg;
}

unsigned resolve_workers(const RunManifest &m) { return m.workers ? m.workers : worker_count_from_env(); }

void warn_regime(const CoverageMap &map, const std::string &label, std::ostream &err)
{
    if (map.metadata.regime_warning)
        err << "warning: " << label << ": reflector is smaller than 5 wavelengths; RCS model outside its regime\n";
}

std::vector<std::string> split_list(const std::string &s)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size())
    {
        std::size_t end = s.find(',', start);
        if (end == std::string::npos)
            end = s.size();
        if (end > start)
            out.push_back(s.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

} // namespace

bool is_safe_label(const std::string &label)
{
    if (label.empty() || label.front() == '.' || label.size() > 128)
        return false;
    for (char c : label)
    {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                        c == '_' || c == '-';
        if (!ok)
            return false;
    }
    return true;
}

Variant parse_variant(const std::string &name)
{
    if (name == "none")
        return {name, std::nullopt};
    if (name == "sphere")
        return {name, ReflectorSpec::sphere(13 * inch)};
    if (name == "cylinder")
        return {name, ReflectorSpec::cylinder(4.5 * inch, 18 * inch)};
    const std::string prefix = "plate";
    if (name.starts_with(prefix) && is_safe_label(name))
    {
        const char *first = name.data() + prefix.size();
        const char *last = name.data() + name.size();
        double inches = 0.0;
        auto [ptr, ec] = std::from_chars(first, last, inches);
        if (ec == std::errc() && ptr == last)
            return {name, ReflectorSpec::plate(inches * inch)};
    }
    throw ConfigError("variant", "unknown reflector variant '" + name + "' (expected none, plate<inches>, sphere, cylinder)");
}

std::vector<Variant> default_variants()
{
    std::vector<Variant> out;
    for (const char *n : {"none", "plate12", "plate24", "plate33", "sphere", "cylinder"})
        out.push_back(parse_variant(n));
    return out;
}

unsigned worker_count_from_env()
{
    const char *v = std::getenv("RTCOV_WORKERS");
    if (!v || !*v)
        return default_worker_count();
    unsigned n = 0;
    const char *end = v + std::char_traits<char>::length(v);
    auto [ptr, ec] = std::from_chars(v, end, n);
    if (ec != std::errc() || ptr != end || n == 0)
        throw ConfigError("RTCOV_WORKERS", "must be a positive integer");
    return n;
}

int cmd_sweep(const RunManifest &manifest, std::ostream &out, std::ostream &err)
{
    try
    {
        if (!is_safe_label(manifest.label))
            throw ConfigError("label", "must be nonempty and use only letters, digits, '.', '_' or '-'");
        const SimulationConfig cfg = load_with_overrides(manifest);
        const unsigned workers = resolve_workers(manifest);
        const CoverageMap map = run_grid(cfg.scene, cfg.grid, cfg.trace, workers);
        warn_regime(map, manifest.label, err);
        ensure_dir(manifest.out_dir);
        const FileSet files = sweep_files(map, manifest.out_dir, manifest.label, workers);
        commit(files);
        for (const auto &f : files)
            out << f.first.string() << '\n';
        out << "median_dbm " << format_number(median(map.power_dbm)) << '\n';
        return exit_ok;
    }
    catch (const ConfigError &e)
    {
        report_config_error(e, err);
        return exit_config;
    }
    catch (const IoError &e)
    {
        err << "io error: " << e.what() << '\n';
        return exit_io;
    }
}

int cmd_compare(const fs::path &a, const fs::path &b, const fs::path &out_dir, const std::string &label,
                std::ostream &out, std::ostream &err)
{
    try
    {
        if (!is_safe_label(label))
            throw ConfigError("label", "must be nonempty and use only letters, digits, '.', '_' or '-'");
        const CoverageMap ma = read_coverage_csv(a);
        const CoverageMap mb = read_coverage_csv(b);
        if (!same_grid(ma, mb))
            throw GridMismatch("coverage grids differ: " + a.string() + " vs " + b.string());

        out << "median_gain_db " << format_number(median_gain(ma, mb)) << '\n';
        for (int d = 1; d <= 9; ++d)
        {
            const double q = d / 10.0;
            out << "decile_gain_db p" << d * 10 << ' '
                << format_number(quantile(ma.power_dbm, q) - quantile(mb.power_dbm, q)) << '\n';
        }
        const Uniformity ua = uniformity(ma), ub = uniformity(mb);
        out << "uniformity_db a " << format_number(ua.std_db) << " b " << format_number(ub.std_db) << '\n';
        out << "uniformity_delta_db " << format_number(ua.std_db - ub.std_db) << '\n';

        std::string csv = "series,power_dbm,prob\n";
        for (const auto &[name, map] : {std::pair{"a", &ma}, std::pair{"b", &mb}})
        {
            const Cdf c = cdf(*map);
            for (std::size_t i = 0; i < c.values.size(); ++i)
                csv += std::string(name) + ',' + format_number(c.values[i]) + ',' + format_number(c.probs[i]) + '\n';
        }
        ensure_dir(out_dir);
        const fs::path target = out_dir / (label + ".cdf.csv");
        commit({{target, csv}});
        out << target.string() << '\n';
        return exit_ok;
    }
    catch (const GridMismatch &e)
    {
        err << "grid mismatch: " << e.what() << '\n';
        return exit_grid_mismatch;
    }
    catch (const ConfigError &e)
    {
        report_config_error(e, err);
        return exit_config;
    }
    catch (const IoError &e)
    {
        err << "io error: " << e.what() << '\n';
        return exit_io;
    }
    catch (const FormatError &e)
    {
        err << "format error: " << e.what() << '\n';
        return exit_io;
    }
}

int cmd_scenarios(const RunManifest &manifest, const std::vector<std::string> &variants, std::ostream &out,
                  std::ostream &err)
{
    SimulationConfig base;
    unsigned workers = 0;
    try
    {
        base = load_with_overrides(manifest);
        workers = resolve_workers(manifest);
        ensure_dir(manifest.out_dir);
    }
    catch (const ConfigError &e)
    {
        report_config_error(e, err);
        return exit_config;
    }
    catch (const IoError &e)
    {
        err << "io error: " << e.what() << '\n';
        return exit_io;
    }

    std::vector<std::string> names{"none"};
    for (const auto &v : variants)
        if (std::find(names.begin(), names.end(), v) == names.end())
            names.push_back(v);

    int status = exit_ok;
    std::string summary = "label,status,median_dbm,std_db\n";
    for (const auto &name : names)
    {
        const std::string row_label = is_safe_label(name) ? name : "invalid";
        try
        {
            const Variant v = parse_variant(name);
            const SimulationConfig cfg = with_reflector(base, v.reflector);
            const CoverageMap map = run_grid(cfg.scene, cfg.grid, cfg.trace, workers);
            warn_regime(map, v.label, err);
            commit(sweep_files(map, manifest.out_dir, v.label, workers));
            const double med = median(map.power_dbm), sd = uniformity(map).std_db;
            summary += v.label + ",ok," + format_number(med) + ',' + format_number(sd) + '\n';
            out << v.label << " ok median_dbm " << format_number(med) << " std_db " << format_number(sd) << '\n';
            continue;
        }
        catch (const ConfigError &e)
        {
            err << row_label << ": ";
            report_config_error(e, err);
            if (status == exit_ok)
                status = exit_config;
        }
        catch (const IoError &e)
        {
            err << row_label << ": io error: " << e.what() << '\n';
            if (status == exit_ok)
                status = exit_io;
        }
        summary += row_label + ",failed,,\n";
        out << row_label << " failed\n";
    }

    try
    {
        commit({{manifest.out_dir / "summary.csv", summary}});
    }
    catch (const IoError &e)
    {
        err << "io error: " << e.what() << '\n';
        return exit_io;
    }
    return status;
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"rtcov: 28 GHz indoor coverage ray tracer with passive reflectors"};
    app.require_subcommand(1);

    RunManifest sweep_m;
    std::optional<std::string> sweep_label;
    auto *sweep = app.add_subcommand("sweep", "simulate one configuration over its receiver grid");
    sweep->add_option("--config", sweep_m.config, "scene configuration (JSON)")->required();
    sweep->add_option("--out", sweep_m.out_dir, "output directory");
    sweep->add_option("--seed", sweep_m.seed, "diffuse-phase seed");
    sweep->add_option("--max-order", sweep_m.max_order, "maximum specular order");
    sweep->add_option("--tile-size", sweep_m.tile_size, "diffuse tile edge [m]");
    sweep->add_option("--label", sweep_label, "output file prefix (default: config file stem)");

    fs::path cmp_a, cmp_b, cmp_out = ".";
    std::string cmp_label = "compare";
    auto *compare = app.add_subcommand("compare", "compare two coverage maps (A relative to B)");
    compare->add_option("a", cmp_a, "coverage CSV A")->required();
    compare->add_option("b", cmp_b, "coverage CSV B")->required();
    compare->add_option("--out", cmp_out, "output directory for the combined CDF");
    compare->add_option("--label", cmp_label, "combined CDF file prefix");

    RunManifest scen_m;
    std::string scen_variants = "none,plate12,plate24,plate33,sphere,cylinder";
    auto *scenarios = app.add_subcommand("scenarios", "run a batch of reflector variants plus the baseline");
    scenarios->add_option("--config", scen_m.config, "scene configuration (JSON)")->required();
    scenarios->add_option("--out", scen_m.out_dir, "output directory");
    scenarios->add_option("--seed", scen_m.seed, "diffuse-phase seed");
    scenarios->add_option("--max-order", scen_m.max_order, "maximum specular order");
    scenarios->add_option("--tile-size", scen_m.tile_size, "diffuse tile edge [m]");
    scenarios->add_option("--variants", scen_variants, "comma-separated list: none, plate<inches>, sphere, cylinder");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    if (*sweep)
    {
        if (sweep_label)
            sweep_m.label = *sweep_label;
        else if (is_safe_label(sweep_m.config.stem().string()))
            sweep_m.label = sweep_m.config.stem().string();
        return cmd_sweep(sweep_m, out, err);
    }
    if (*compare)
        return cmd_compare(cmp_a, cmp_b, cmp_out, cmp_label, out, err);
    return cmd_scenarios(scen_m, split_list(scen_variants), out, err);
}

} // namespace rtcov::cli
