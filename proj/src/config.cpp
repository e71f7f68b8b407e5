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

#include "rtcov/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace rtcov
{

namespace
{
using json = nlohmann::json;

class Section
{
public:
    Section(const json &j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object())
            throw ConfigError(path_, "must be an object");
    }

    void allow(std::initializer_list<const char *> keys) const
    {
        const std::set<std::string> ok(keys.begin(), keys.end());
        for (const auto &item : j_.items())
            if (!ok.count(item.key()))
                throw ConfigError(field(item.key()), "unknown key");
    }

    bool has(const char *key) const { return j_.contains(key) && !j_.at(key).is_null(); }
    std::string field(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }
    Section child(const char *key) const { return {j_.at(key), field(key)}; }
    const json &raw(const char *key) const { return j_.at(key); }

    double number(const char *key, double fallback) const
    {
        if (!has(key))
            return fallback;
        const json &v = j_.at(key);
        if (!v.is_number())
            throw ConfigError(field(key), "must be a number");
        const double d = v.get<double>();
        if (!std::isfinite(d))
            throw ConfigError(field(key), "must be finite");
        return d;
    }

    long long integer(const char *key, long long fallback) const
    {
        if (!has(key))
            return fallback;
        const json &v = j_.at(key);
        if (!v.is_number_integer())
            throw ConfigError(field(key), "must be an integer");
        return v.get<long long>();
    }

    bool boolean(const char *key, bool fallback) const
    {
        if (!has(key))
            return fallback;
        if (!j_.at(key).is_boolean())
            throw ConfigError(field(key), "must be true or false");
        return j_.at(key).get<bool>();
    }

    std::string text(const char *key, const std::string &fallback) const
    {
        if (!has(key))
            return fallback;
        if (!j_.at(key).is_string())
            throw ConfigError(field(key), "must be a string");
        return j_.at(key).get<std::string>();
    }

    std::optional<Vec3> vec3(const char *key) const
    {
        if (!has(key))
            return std::nullopt;
        const json &v = j_.at(key);
        if (!v.is_array() || v.size() != 3 || !std::all_of(v.begin(), v.end(), [](const json &e) { return e.is_number(); }))
            throw ConfigError(field(key), "must be an array of three numbers");
        Vec3 out{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
        if (!is_finite(out))
            throw ConfigError(field(key), "must be finite");
        return out;
    }

private:
    const json &j_;
    std::string path_;
};

AntennaSpec read_antenna(const Section &s, AntennaSpec a, bool &boresight_given)
{
    s.allow({"gain_dbi", "hpbw_e_deg", "hpbw_h_deg", "boresight", "polarization"});
    a.gain_dbi = s.number("gain_dbi", a.gain_dbi);
    a.hpbw_e_deg = s.number("hpbw_e_deg", a.hpbw_e_deg);
    a.hpbw_h_deg = s.number("hpbw_h_deg", a.hpbw_h_deg);
    if (s.text("polarization", "vertical") != "vertical")
        throw ConfigError(s.field("polarization"), "only vertical polarization is supported");
    if (auto b = s.vec3("boresight"))
    {
        if (norm(*b) <= 0.0)
            throw ConfigError(s.field("boresight"), "must be nonzero");
        a.boresight = normalized(*b);
        boresight_given = true;
    }
    return a;
}

void read_materials(const json &list, std::vector<Material> &materials)
{
    if (!list.is_array())
        throw ConfigError("materials", "must be an array");
    for (std::size_t i = 0; i < list.size(); ++i)
    {
        const std::string path = "materials[" + std::to_string(i) + "]";
        const Section s(list[i], path);
        s.allow({"name", "perfect_conductor", "eps_r", "sigma", "scatter_coeff", "scatter_exponent"});
        const std::string name = s.text("name", "");
        if (name.empty())
            throw ConfigError(s.field("name"), "is required");
        auto it = std::find_if(materials.begin(), materials.end(), [&](const Material &m) { return m.name == name; });
        Material m = it != materials.end() ? *it : Material{name};
        m.perfect_conductor = s.boolean("perfect_conductor", m.perfect_conductor);
        m.rel_permittivity = s.number("eps_r", m.rel_permittivity);
        m.conductivity = s.number("sigma", m.conductivity);
        m.scatter_coeff = s.number("scatter_coeff", m.scatter_coeff);
        const long long alpha = s.integer("scatter_exponent", m.scatter_exponent);
        if (alpha < 1 || alpha > 1000)
            throw ConfigError(s.field("scatter_exponent"), "must be an integer in [1, 1000]");
        m.scatter_exponent = static_cast<int>(alpha);
        m.validate(path);
        if (it != materials.end())
            *it = m;
        else
            materials.push_back(m);
    }
}

std::optional<ReflectorSpec> read_reflector(const Section &s)
{
    s.allow({"kind", "dims", "center", "tilt_deg", "material"});
    const std::string kind = s.text("kind", "");
    if (kind == "none")
        return std::nullopt;

    ReflectorSpec r;
    if (kind == "flat_plate" || kind == "plate")
        r.kind = ReflectorKind::flat_plate;
    else if (kind == "cylinder")
        r.kind = ReflectorKind::cylinder;
    else if (kind == "sphere")
        r.kind = ReflectorKind::sphere;
    else
        throw ConfigError(s.field("kind"), "must be one of flat_plate, cylinder, sphere, none");

    if (!s.has("dims"))
        throw ConfigError(s.field("dims"), "is required");
    const Section d = s.child("dims");
    switch (r.kind)
    {
    case ReflectorKind::flat_plate:
        d.allow({"width", "height"});
        r.width = d.number("width", r.width);
        r.height = d.number("height", r.height);
        break;
    case ReflectorKind::cylinder:
        d.allow({"radius", "height", "axis"});
        r.radius = d.number("radius", 0.0);
        r.height = d.number("height", 0.0);
        if (auto axis = d.vec3("axis"))
        {
            if (norm(*axis) <= 0.0)
                throw ConfigError(d.field("axis"), "must be nonzero");
            r.axis = normalized(*axis);
        }
        break;
    case ReflectorKind::sphere:
        d.allow({"radius"});
        r.radius = d.number("radius", 0.0);
        break;
    }
    const double tilt_deg = s.number("tilt_deg", 45.0);
    if (!(tilt_deg >= 0.0 && tilt_deg < 90.0))
        throw ConfigError(s.field("tilt_deg"), "must lie in [0, 90)");
    r.tilt = deg2rad(tilt_deg);
    r.center = s.vec3("center");
    r.material = s.text("material", r.material);
    return r;
}

int line_of(const std::string &text, std::size_t byte)
{
    byte = std::min(byte, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

struct GridOverrides
{
    std::optional<Vec3> origin;
    std::optional<double> x_extent, y_extent, spacing, height;
    AntennaSpec antenna = ReceiverGrid{}.rx_antenna;
};

ReceiverGrid build_grid(const CorridorParams &corridor, const GridOverrides &o)
{
    ReceiverGrid g = default_grid(corridor);
    g.x_extent = o.x_extent.value_or(g.x_extent);
    g.y_extent = o.y_extent.value_or(g.y_extent);
    g.spacing = o.spacing.value_or(g.spacing);
    g.rx_height = o.height.value_or(g.rx_height);
    g.origin = {corridor.junction().x - 0.5 * g.x_extent, g.origin.y, g.rx_height};
    if (o.origin)
        g.origin = *o.origin;
    g.rx_antenna = o.antenna;
    g.validate();
    return g;
}
} // namespace

SimulationConfig parse_config(const std::string &text)
{
    json root;
    try
    {
        root = json::parse(text, nullptr, true, true);
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError("", std::string("JSON parse error: ") + e.what(), line_of(text, e.byte > 0 ? e.byte - 1 : 0));
    }

    const Section top(root, "");
    top.allow({"description", "scene", "corridor", "materials", "reflector", "grid", "trace"});

    SimulationConfig cfg;
    CorridorParams &c = cfg.corridor;

    if (top.has("scene"))
    {
        const Section s = top.child("scene");
        s.allow({"frequency_hz", "tx"});
        c.frequency_hz = s.number("frequency_hz", c.frequency_hz);
        if (!(c.frequency_hz > 0.0))
            throw ConfigError(s.field("frequency_hz"), "must be positive");
        if (s.has("tx"))
        {
            const Section tx = s.child("tx");
            tx.allow({"position", "power_dbm", "antenna"});
            c.tx_position = tx.vec3("position");
            c.tx_power_dbm = tx.number("power_dbm", c.tx_power_dbm);
            if (tx.has("antenna"))
            {
                bool given = false;
                c.tx_antenna = read_antenna(tx.child("antenna"), c.tx_antenna, given);
                c.aim_tx = !given;
            }
        }
    }

    if (top.has("corridor"))
    {
        const Section s = top.child("corridor");
        s.allow({"main_width", "side_width", "side_length", "height", "tx_to_reflector", "behind_tx", "tx_height",
                 "door"});
        c.main_width = s.number("main_width", c.main_width);
        c.side_width = s.number("side_width", c.side_width);
        c.side_length = s.number("side_length", c.side_length);
        c.height = s.number("height", c.height);
        c.tx_to_reflector = s.number("tx_to_reflector", c.tx_to_reflector);
        c.behind_tx = s.number("behind_tx", c.behind_tx);
        c.tx_height = s.number("tx_height", c.tx_height);
        if (s.has("door"))
        {
            const Section d = s.child("door");
            d.allow({"width", "height", "offset"});
            c.door_width = d.number("width", c.door_width);
            c.door_height = d.number("height", c.door_height);
            c.door_offset = d.number("offset", c.door_offset);
        }
    }

    if (top.has("materials"))
        read_materials(top.raw("materials"), c.materials);

    if (top.has("reflector"))
        c.reflector = read_reflector(top.child("reflector"));

    GridOverrides grid;
    if (top.has("grid"))
    {
        const Section s = top.child("grid");
        s.allow({"origin", "x_extent", "y_extent", "spacing", "height", "antenna"});
        grid.origin = s.vec3("origin");
        if (s.has("x_extent"))
            grid.x_extent = s.number("x_extent", 0.0);
        if (s.has("y_extent"))
            grid.y_extent = s.number("y_extent", 0.0);
        if (s.has("spacing"))
            grid.spacing = s.number("spacing", 0.0);
        if (s.has("height"))
            grid.height = s.number("height", 0.0);
        if (s.has("antenna"))
        {
            bool given = false;
            grid.antenna = read_antenna(s.child("antenna"), grid.antenna, given);
        }
    }

    if (top.has("trace"))
    {
        const Section s = top.child("trace");
        s.allow({"max_order", "tile_size", "seed", "diffuse", "rx_orientation"});
        const long long order = s.integer("max_order", cfg.trace.max_order);
        if (order < 0 || order > 6)
            throw ConfigError(s.field("max_order"), "must lie in [0, 6]");
        cfg.trace.max_order = static_cast<int>(order);
        cfg.trace.tile_size = s.number("tile_size", cfg.trace.tile_size);
        const long long seed = s.integer("seed", static_cast<long long>(cfg.trace.seed));
        if (seed < 0)
            throw ConfigError(s.field("seed"), "must be non-negative");
        cfg.trace.seed = static_cast<std::uint64_t>(seed);
        cfg.trace.diffuse = s.boolean("diffuse", cfg.trace.diffuse);
        const std::string policy = s.text("rx_orientation", "strongest_path");
        if (policy == "strongest_path")
            cfg.trace.rx_orientation = RxOrientation::strongest_path;
        else if (policy == "fixed")
            cfg.trace.rx_orientation = RxOrientation::fixed;
        else
            throw ConfigError(s.field("rx_orientation"), "must be strongest_path or fixed");
        cfg.trace.validate();
    }

    cfg.scene = make_corridor(c);
    cfg.grid = build_grid(c, grid);
    return cfg;
}

SimulationConfig load_scene(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("", "cannot open config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

SimulationConfig with_reflector(const SimulationConfig &config, const std::optional<ReflectorSpec> &reflector)
{
    SimulationConfig out = config;
    out.corridor.reflector = reflector;
    out.scene = make_corridor(out.corridor);
    return out;
}

} // namespace rtcov
