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
// Acceptance report: one PASS/FAIL line per criterion. Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "ray_shooting.hpp"
#include "rtcov/cli.hpp"
#include "rtcov/config.hpp"
#include "rtcov/io.hpp"
#include "rtcov/link.hpp"
#include "rtcov/sweep.hpp"

using namespace rtcov;
namespace fs = std::filesystem;

namespace
{

const fs::path source_dir = RTCOV_SOURCE_DIR;

struct Verdict
{
    bool pass;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char *f, double a)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

struct Run
{
    CoverageMap map;
    double seconds;
};

class Scenarios
{
public:
    Scenarios() : base_(load_scene(source_dir / "configs" / "paper_default.json")), workers_(cli::worker_count_from_env()) {}

    const Run &get(const std::string &variant)
    {
        auto it = runs_.find(variant);
        if (it != runs_.end())
            return it->second;
        const SimulationConfig cfg = with_reflector(base_, cli::parse_variant(variant).reflector);
        const auto t0 = std::chrono::steady_clock::now();
        CoverageMap map = run_grid(cfg.scene, cfg.grid, cfg.trace, workers_);
        return runs_.emplace(variant, Run{std::move(map), seconds_since(t0)}).first->second;
    }

    const SimulationConfig &base() const { return base_; }

private:
    SimulationConfig base_;
    unsigned workers_;
    std::map<std::string, Run> runs_;
};

Verdict criterion1(Scenarios &s)
{
    const Run &plate = s.get("plate24"), &none = s.get("none");
    const double gain = median_gain(plate.map, none.map);
    const bool pass = gain >= 10.0 && gain <= 30.0 && plate.seconds <= 60.0;
    return {pass, "median gain " + fmt("%.2f", gain) + " dB (band [10, 30]); plate run " + fmt("%.2f", plate.seconds) +
                      " s (limit 60 s)"};
}

Verdict criterion2(Scenarios &s)
{
    const double m0 = median(s.get("none").map.power_dbm), m12 = median(s.get("plate12").map.power_dbm);
    const double m24 = median(s.get("plate24").map.power_dbm), m33 = median(s.get("plate33").map.power_dbm);
    const bool pass = m0 < m12 && m12 < m24 && std::abs(m24 - m33) <= 5.0;
    return {pass, "medians none " + fmt("%.2f", m0) + ", 12 in " + fmt("%.2f", m12) + ", 24 in " + fmt("%.2f", m24) +
                      ", 33 in " + fmt("%.2f", m33) + " dBm; |m24 - m33| = " + fmt("%.2f", std::abs(m24 - m33)) +
                      " dB"};
}

Verdict criterion3(Scenarios &s)
{
    const SimulationConfig cfg = with_reflector(s.base(), cli::parse_variant("plate12").reflector);
    const Reflector &r = *cfg.scene.reflector;
    const Vec3 n = r.plate()->normal;
    Vec3 d = r.center - cfg.scene.tx_position;
    d.z = 0.0;
    d = normalized(d);
    const Vec3 spec = d - 2.0 * dot(d, n) * n;
    const double expected = std::atan2(spec.y, spec.x);
    const LobeStats lobe = top_cells_lobe(s.get("plate12").map, 0.1, r.center);
    double diff = std::remainder(lobe.centroid_azimuth - expected, 2.0 * pi);
    const bool pass = lobe.components == 1 && std::abs(rad2deg(diff)) <= 10.0;
    return {pass, std::to_string(lobe.cells) + " top-decile cells in " + std::to_string(lobe.components) +
                      " component(s); centroid " + fmt("%.2f", rad2deg(lobe.centroid_azimuth)) + " deg vs specular " +
                      fmt("%.2f", rad2deg(expected)) + " deg"};
}

Verdict criterion4(Scenarios &s)
{
    const double cyl = uniformity(leading_rows(s.get("cylinder").map, 5.0)).std_db;
    const double plate = uniformity(leading_rows(s.get("plate24").map, 5.0)).std_db;
    return {cyl < plate, "first 5 m std: cylinder " + fmt("%.2f", cyl) + " dB, 24 in plate " + fmt("%.2f", plate) + " dB"};
}

Verdict criterion5()
{
    const auto t0 = std::chrono::steady_clock::now();
    oracle::ShootingOptions opt;
    opt.rays = 1'000'000;
    opt.max_order = 2;
    std::size_t scenes_ok = 0, total_paths = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
    {
        const auto box = oracle::random_shoebox(seed);
        const auto image = trace_specular(box.scene, box.tx, box.rx, 2);
        const auto brute = oracle::shoot(box.scene, box.tx, box.rx, opt);
        bool ok = image.size() == brute.size();
        for (const auto &p : image)
        {
            std::vector<std::size_t> seq;
            for (const auto &i : p.interactions)
                seq.push_back(i.geometry);
            auto it = std::find_if(brute.begin(), brute.end(), [&](const auto &b) { return b.surfaces == seq; });
            if (it == brute.end())
            {
                ok = false;
                continue;
            }
            worst = std::max(worst, std::abs(it->length - p.total_length));
        }
        ok = ok && worst <= 1e-6;
        scenes_ok += ok;
        total_paths += image.size();
    }
    const double t = seconds_since(t0);
    const bool pass = scenes_ok == 10 && t <= 300.0;
    return {pass, std::to_string(scenes_ok) + "/10 shoeboxes matched (" + std::to_string(total_paths) +
                      " paths), worst length error " + fmt("%.2e", worst) + " m, " + fmt("%.1f", t) +
                      " s (limit 300 s)"};
}

Verdict criterion6()
{
    std::vector<std::string> failures;
    auto require = [&](bool ok, const std::string &what)
    {
        if (!ok)
            failures.push_back(what);
    };
    const double f = 28e9, lambda = speed_of_light / f;

    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> eps(1.0, 30.0), sig(0.0, 20.0), th(0.0, 0.5 * pi - 1e-6);
    bool bounded = true;
    for (int i = 0; i < 1000; ++i)
    {
        Material m;
        m.rel_permittivity = eps(rng);
        m.conductivity = sig(rng);
        const double t = th(rng);
        bounded &= std::abs(fresnel(t, m, Polarization::TE, f)) <= 1.0;
        bounded &= std::abs(fresnel(t, m, Polarization::TM, f)) <= 1.0;
    }
    require(bounded, "|Gamma| <= 1");
    const Material pec = materials::perfect_conductor();
    require(fresnel(0.3, pec, Polarization::TE, f) == Amplitude(-1.0) &&
                fresnel(0.3, pec, Polarization::TM, f) == Amplitude(1.0),
            "conductor");
    Material glass;
    glass.rel_permittivity = 4.0;
    require(std::abs(fresnel(std::atan(2.0), glass, Polarization::TM, f)) < 1e-12, "Brewster");
    require(std::abs(fresnel(0.5 * pi - 1e-7, materials::concrete(), Polarization::TE, f)) > 0.9999, "grazing");

    AntennaSpec a;
    a.boresight = {1, 0, 0};
    const double g0 = antenna_gain_dbi(a, {1, 0, 0});
    const double ge = antenna_gain_dbi(a, {std::cos(deg2rad(13.0)), 0.0, std::sin(deg2rad(13.0))});
    const double gh = antenna_gain_dbi(a, {std::cos(deg2rad(12.0)), std::sin(deg2rad(12.0)), 0.0});
    require(std::abs(g0 - 17.0) < 1e-12, "boresight gain");
    require(std::abs(g0 - ge - 3.0103) < 1e-3 && std::abs(g0 - gh - 3.0103) < 1e-3, "half-power points");

    const double fspl = free_space_path_loss_db(10.0, lambda);
    require(std::abs(fspl - 81.39) <= 0.01, "FSPL");

    auto db = [](double x) { return 10.0 * std::log10(x); };
    const double tl = 0.0107069;
    Reflector r;
    r.shape = Sphere{13 * inch};
    const double s_sph = rcs(r, {1, 0, 0}, {-1, 0, 0}, tl).sigma;
    r.shape = FlatPlate{24 * inch, 24 * inch, {-1, 0, 0}};
    const double s_plate = rcs(r, {1, 0, 0}, {-1, 0, 0}, tl).sigma;
    r.shape = Cylinder{4.5 * inch, 18 * inch, {0, 0, 1}};
    const double s_cyl = rcs(r, {1, 0, 0}, {-1, 0, 0}, tl).sigma;
    require(std::abs(db(s_sph) - db(0.3425)) <= 0.1, "sphere RCS");
    require(std::abs(db(s_plate) - 41.8) <= 0.1, "plate RCS");
    require(std::abs(db(s_cyl) - db(14.02)) <= 0.1, "cylinder RCS");

    std::string detail = "FSPL(10 m) " + fmt("%.3f", fspl) + " dB; RCS sphere " + fmt("%.4f", s_sph) + " m2, plate " +
                         fmt("%.2f", db(s_plate)) + " dBsm, cylinder " + fmt("%.2f", s_cyl) + " m2";
    for (const auto &f : failures)
        detail += "; failed: " + f;
    return {failures.empty(), detail};
}

Verdict criterion7()
{
    auto path = [](double length, GeometryId tag)
    {
        PropagationPath p;
        p.total_length = length;
        p.delay = length / speed_of_light;
        p.amplitude = {1e-4, 0.0};
        p.interactions.push_back({InteractionKind::specular_reflection, tag, 0, {}, 0.0});
        return p;
    };
    const std::vector<PropagationPath> pair{path(10.0, 1), path(10.2, 2)};
    const auto cir = bin_cir(pair);
    const bool adjacent = cir.taps[0] != Amplitude{} && cir.taps[1] != Amplitude{};
    const std::vector<PropagationPath> late{path(10.0, 1), path(10.0 + 1.4e-6 * speed_of_light, 2)};
    const auto dropped = bin_cir(late).dropped;
    return {adjacent && dropped == 1 && cir.taps.size() == 2047,
            std::string("0.2 m pair in bins 0 and 1: ") + (adjacent ? "yes" : "no") + "; 1.4 us path dropped, tally " +
                std::to_string(dropped) + "; " + std::to_string(cir.taps.size()) + " taps"};
}

Verdict criterion8()
{
    const fs::path dir = fs::temp_directory_path() / "rtcov_acceptance_determinism";
    fs::remove_all(dir);
    std::vector<std::string> csv;
    std::vector<unsigned> workers{1, 4, 1, 2};
    for (std::size_t i = 0; i < workers.size(); ++i)
    {
        cli::RunManifest m;
        m.config = source_dir / "configs" / "paper_default.json";
        m.out_dir = dir / std::to_string(i);
        m.seed = 12345;
        m.label = "det";
        m.workers = workers[i];
        std::ostringstream out, err;
        if (cli::cmd_sweep(m, out, err) != cli::exit_ok)
            return {false, "sweep failed: " + err.str()};
        csv.push_back(read_file(m.out_dir / "det.coverage.csv") + read_file(m.out_dir / "det.cdf.csv"));
    }
    fs::remove_all(dir);
    const bool same = std::all_of(csv.begin(), csv.end(), [&](const std::string &c) { return c == csv.front(); });
    return {same, "4 sweeps with 1, 4, 1, 2 workers: CSV outputs " + std::string(same ? "identical" : "differ")};
}

} // namespace

int main()
{
    Scenarios scenarios;
    const std::vector<std::pair<const char *, std::function<Verdict()>>> criteria{
        {"1 median-gain band", [&] { return criterion1(scenarios); }},
        {"2 CDF ordering", [&] { return criterion2(scenarios); }},
        {"3 directionality", [&] { return criterion3(scenarios); }},
        {"4 uniformity", [&] { return criterion4(scenarios); }},
        {"5 oracle equivalence", [] { return criterion5(); }},
        {"6 physics invariants", [] { return criterion6(); }},
        {"7 sounder emulation", [] { return criterion7(); }},
        {"8 determinism", [] { return criterion8(); }},
    };
    int failed = 0;
    for (const auto &[name, check] : criteria)
    {
        Verdict v;
        try
        {
            v = check();
        }
        catch (const std::exception &e)
        {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += !v.pass;
        std::printf("criterion %s: %s (%s)\n", name, v.pass ? "PASS" : "FAIL", v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
