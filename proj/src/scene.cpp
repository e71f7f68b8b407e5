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

#include "rtcov/scene.hpp"

#include <algorithm>
#include <cmath>

namespace rtcov
{

namespace
{
constexpr double unit_tol = 1e-9;

bool is_unit(const Vec3 &v) { return is_finite(v) && std::abs(norm(v) - 1.0) <= unit_tol; }

void require(bool ok, const std::string &field, const std::string &message)
{
    if (!ok)
        throw ConfigError(field, message);
}

void require_positive(double v, const std::string &field)
{
    require(std::isfinite(v) && v > 0.0, field, "must be a positive number");
}
} // namespace

std::string ConfigError::format(const std::string &field, const std::string &message, int line)
{
    std::string s = field.empty() ? message : field + ": " + message;
    if (line > 0)
        s += " (line " + std::to_string(line) + ")";
    return s;
}

void Material::validate(const std::string &field) const
{
    require(!name.empty(), field + ".name", "must not be empty");
    require(scatter_coeff >= 0.0 && scatter_coeff <= 1.0, field + ".scatter_coeff", "must lie in [0, 1]");
    require(scatter_exponent >= 1, field + ".scatter_exponent", "must be an integer >= 1");
    if (!perfect_conductor)
    {
        require(std::isfinite(rel_permittivity) && rel_permittivity >= 1.0, field + ".eps_r", "must be >= 1");
        require(std::isfinite(conductivity) && conductivity >= 0.0, field + ".sigma", "must be >= 0");
    }
}

namespace materials
{
// eps_r = a f^b, sigma = c f^d with f in GHz (ITU-R P.2040 Table 3), evaluated at 28 GHz.
Material layered_drywall() { return {"layered_drywall", false, 2.73, 0.22, 0.3, 4}; }
Material concrete() { return {"concrete", false, 5.24, 0.46, 0.2, 4}; }
Material ceiling_board() { return {"ceiling_board", false, 1.48, 0.16, 0.25, 4}; }
Material perfect_conductor() { return {"perfect_conductor", true, 1.0, 0.0, 0.1, 4}; }

std::vector<Material> defaults()
{
    return {layered_drywall(), concrete(), ceiling_board(), perfect_conductor()};
}
} // namespace materials

Surface Surface::make(const Vec3 &origin, const Vec3 &edge_u, const Vec3 &edge_v, std::size_t material,
                      std::string name)
{
    Surface s;
    s.origin = origin;
    s.edge_u = edge_u;
    s.edge_v = edge_v;
    s.normal = normalized(cross(edge_u, edge_v));
    s.material = material;
    s.name = std::move(name);
    return s;
}

bool Surface::contains_projection(const Vec3 &p, double margin) const
{
    const Vec3 d = p - origin;
    const double w = width(), h = height();
    const double s = dot(d, edge_u) / w; // meters along edge_u
    const double t = dot(d, edge_v) / h;
    return s >= -margin && s <= w + margin && t >= -margin && t <= h + margin;
}

void Surface::validate(const std::string &field) const
{
    require(is_finite(origin) && is_finite(edge_u) && is_finite(edge_v), field, "non-finite geometry");
    const double w = width(), h = height();
    require(w > 0.0 && h > 0.0, field, "edge vectors must be nonzero");
    require(std::abs(dot(edge_u, edge_v)) <= 1e-9 * w * h, field, "edge vectors must be orthogonal");
    require(std::abs(norm(normal) - 1.0) <= 1e-12, field + ".normal", "must be unit length");
    require(std::abs(dot(normal, edge_u)) <= 1e-12 * w && std::abs(dot(normal, edge_v)) <= 1e-12 * h,
            field + ".normal", "must be orthogonal to both edges");
}

Vec3 mirror_point(const Vec3 &p, const Surface &surface)
{
    return p - 2.0 * surface.signed_distance(p) * surface.normal;
}

std::string to_string(ReflectorKind kind)
{
    switch (kind)
    {
    case ReflectorKind::flat_plate:
        return "flat_plate";
    case ReflectorKind::cylinder:
        return "cylinder";
    case ReflectorKind::sphere:
        return "sphere";
    }
    return "unknown";
}

Surface Reflector::plate_surface() const
{
    const FlatPlate &p = std::get<FlatPlate>(shape);
    Vec3 across = cross(Vec3{0.0, 0.0, 1.0}, p.normal);
    if (norm(across) < 1e-9) // horizontal plate
        across = {1.0, 0.0, 0.0};
    const Vec3 u = normalized(across);
    const Vec3 v = normalized(cross(p.normal, u));
    const Vec3 eu = u * p.width, ev = v * p.height;
    return Surface::make(center - 0.5 * eu - 0.5 * ev, eu, ev, material, "reflector");
}

double Reflector::min_dimension() const
{
    return std::visit(
        [](const auto &s) -> double
        {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, FlatPlate>)
                return std::min(s.width, s.height);
            else if constexpr (std::is_same_v<T, Cylinder>)
                return std::min(s.radius, s.height);
            else
                return s.radius;
        },
        shape);
}

void Reflector::validate(const std::string &field) const
{
    require(is_finite(center), field + ".center", "must be finite");
    if (const auto *p = std::get_if<FlatPlate>(&shape))
    {
        require_positive(p->width, field + ".dims.width");
        require_positive(p->height, field + ".dims.height");
        require(is_unit(p->normal), field + ".normal", "must be a unit vector");
    }
    else if (const auto *c = std::get_if<Cylinder>(&shape))
    {
        require_positive(c->radius, field + ".dims.radius");
        require_positive(c->height, field + ".dims.height");
        require(is_unit(c->axis), field + ".dims.axis", "must be a unit vector");
    }
    else
    {
        require_positive(std::get<Sphere>(shape).radius, field + ".dims.radius");
    }
}

bool regime_warning(const Reflector &reflector, double wavelength)
{
    return reflector.min_dimension() < 5.0 * wavelength;
}

void AntennaSpec::validate(const std::string &field) const
{
    require(is_unit(boresight), field + ".boresight", "must be a unit vector");
    require(std::isfinite(gain_dbi), field + ".gain_dbi", "must be finite");
    require(hpbw_e_deg > 0.0 && hpbw_e_deg < 180.0, field + ".hpbw_e_deg", "must lie in (0, 180)");
    require(hpbw_h_deg > 0.0 && hpbw_h_deg < 180.0, field + ".hpbw_h_deg", "must lie in (0, 180)");
}

std::size_t Scene::find_material(const std::string &name) const
{
    for (std::size_t i = 0; i < materials.size(); ++i)
        if (materials[i].name == name)
            return i;
    throw ConfigError("materials", "unknown material '" + name + "'");
}

namespace
{
bool inside_reflector(const Reflector &r, const Vec3 &p)
{
    if (const auto *s = std::get_if<Sphere>(&r.shape))
        return distance(p, r.center) <= s->radius;
    if (const auto *c = std::get_if<Cylinder>(&r.shape))
    {
        const Vec3 d = p - r.center;
        const double along = dot(d, c->axis);
        return std::abs(along) <= 0.5 * c->height && norm(d - along * c->axis) <= c->radius;
    }
    const Surface plate = r.plate_surface();
    return std::abs(plate.signed_distance(p)) <= 1e-9 && plate.contains_projection(p);
}
} // namespace

void Scene::validate() const
{
    require(std::isfinite(frequency_hz) && frequency_hz > 0.0, "scene.frequency_hz", "must be positive");
    require(std::isfinite(tx_power_dbm), "scene.tx.power_dbm", "must be finite");
    for (std::size_t i = 0; i < materials.size(); ++i)
        materials[i].validate("materials[" + std::to_string(i) + "]");
    for (std::size_t i = 0; i < surfaces.size(); ++i)
    {
        const std::string f = "surfaces[" + std::to_string(i) + "]";
        surfaces[i].validate(f);
        require(surfaces[i].material < materials.size(), f + ".material", "unknown material index");
    }
    tx_antenna.validate("scene.tx.antenna");
    require(is_finite(tx_position), "scene.tx.position", "must be finite");
    for (const Surface &s : surfaces)
        require(!(std::abs(s.signed_distance(tx_position)) <= 1e-9 && s.contains_projection(tx_position)),
                "scene.tx.position", "transmitter lies on surface '" + s.name + "'");
    if (reflector)
    {
        reflector->validate();
        require(reflector->material < materials.size(), "reflector.material", "unknown material index");
        require(!inside_reflector(*reflector, tx_position), "scene.tx.position", "transmitter inside the reflector");
    }
}

std::size_t ReceiverGrid::nx() const
{
    return static_cast<std::size_t>(std::ceil(x_extent / spacing + 1.0 - 1e-9));
}

std::size_t ReceiverGrid::ny() const
{
    return static_cast<std::size_t>(std::ceil(y_extent / spacing + 1.0 - 1e-9));
}

Vec3 ReceiverGrid::point(std::size_t ix, std::size_t iy) const
{
    const double dx = std::min(static_cast<double>(ix) * spacing, x_extent);
    const double dy = std::min(static_cast<double>(iy) * spacing, y_extent);
    return {origin.x + dx, origin.y + dy, rx_height};
}

void ReceiverGrid::validate() const
{
    require(is_finite(origin), "grid.origin", "must be finite");
    require_positive(x_extent, "grid.x_extent");
    require_positive(y_extent, "grid.y_extent");
    require_positive(spacing, "grid.spacing");
    require(std::isfinite(rx_height), "grid.height", "must be finite");
    rx_antenna.validate("grid.antenna");
}

Vec3 orient_flat_reflector(const Vec3 &incident_dir, double steer_angle)
{
    if (!(steer_angle >= 0.0 && steer_angle < 0.5 * pi))
        throw InvalidOrientation("steering angle must lie in [0, pi/2)");
    if (std::abs(incident_dir.z) > 1e-9 || std::abs(norm(incident_dir) - 1.0) > 1e-9)
        throw InvalidOrientation("incident direction must be a unit vector in the azimuth plane");
    return normalized(rotate_z(-incident_dir, -steer_angle));
}

ReflectorSpec ReflectorSpec::plate(double side, double tilt_rad)
{
    ReflectorSpec s;
    s.kind = ReflectorKind::flat_plate;
    s.width = s.height = side;
    s.tilt = tilt_rad;
    return s;
}

ReflectorSpec ReflectorSpec::sphere(double radius)
{
    ReflectorSpec s;
    s.kind = ReflectorKind::sphere;
    s.radius = radius;
    s.width = s.height = 0.0;
    return s;
}

ReflectorSpec ReflectorSpec::cylinder(double radius, double height)
{
    ReflectorSpec s;
    s.kind = ReflectorKind::cylinder;
    s.radius = radius;
    s.height = height;
    s.width = 0.0;
    return s;
}

Reflector make_reflector(const ReflectorSpec &spec, const Scene &scene, const Vec3 &default_center)
{
    Reflector r;
    r.center = spec.center.value_or(default_center);
    r.material = scene.find_material(spec.material);
    switch (spec.kind)
    {
    case ReflectorKind::flat_plate:
    {
        Vec3 incident = r.center - scene.tx_position;
        incident.z = 0.0;
        if (norm(incident) < 1e-9)
            throw ConfigError("reflector.center", "reflector lies directly above or below the transmitter");
        FlatPlate plate{spec.width, spec.height, {}};
        try
        {
            plate.normal = orient_flat_reflector(normalized(incident), spec.tilt);
        }
        catch (const InvalidOrientation &e)
        {
            throw ConfigError("reflector.tilt_deg", e.what());
        }
        r.shape = plate;
        r.tilt = spec.tilt;
        break;
    }
    case ReflectorKind::cylinder:
        r.shape = Cylinder{spec.radius, spec.height, spec.axis};
        break;
    case ReflectorKind::sphere:
        r.shape = Sphere{spec.radius};
        break;
    }
    r.validate();
    return r;
}

void CorridorParams::validate() const
{
    require_positive(main_width, "corridor.main_width");
    require_positive(side_width, "corridor.side_width");
    require_positive(side_length, "corridor.side_length");
    require_positive(height, "corridor.height");
    require_positive(tx_to_reflector, "corridor.tx_to_reflector");
    require_positive(behind_tx, "corridor.behind_tx");
    require(tx_height > 0.0 && tx_height < height, "corridor.tx_height", "must lie strictly between floor and ceiling");
    require_positive(door_width, "corridor.door.width");
    require(door_height > 0.0 && door_height < height, "corridor.door.height",
            "must lie strictly between floor and ceiling");
    const double x0 = junction().x - door_offset - 0.5 * door_width;
    require(x0 > 0.0 && x0 + door_width < main_length(), "corridor.door.offset", "door must fit inside the south wall");
    require_positive(frequency_hz, "scene.frequency_hz");
}

Scene make_corridor(const CorridorParams &params)
{
    params.validate();

    Scene scene;
    scene.materials = params.materials;
    scene.frequency_hz = params.frequency_hz;
    scene.tx_power_dbm = params.tx_power_dbm;
    scene.tx_position = params.tx_position.value_or(params.default_tx());
    scene.tx_antenna = params.tx_antenna;
    if (params.aim_tx)
    {
        Vec3 aim = params.junction() - scene.tx_position;
        if (norm(aim) > 1e-9)
            scene.tx_antenna.boresight = normalized(aim);
    }

    const std::size_t drywall = scene.find_material("layered_drywall");
    const std::size_t concrete = scene.find_material("concrete");
    const std::size_t ceiling = scene.find_material("ceiling_board");
    const std::size_t conductor = scene.find_material("perfect_conductor");

    const double L = params.main_length(), W = params.main_width, H = params.height;
    const double ws = params.side_width, Ls = params.side_length;
    const double x0 = L - ws, Y = W + Ls;
    const double dh = params.door_height;
    const double xd0 = params.junction().x - params.door_offset - 0.5 * params.door_width;
    const double xd1 = xd0 + params.door_width;
    const Vec3 ex{1, 0, 0}, ey{0, 1, 0}, ez{0, 0, 1};

    auto &s = scene.surfaces;
    // South wall (y = 0) with the door cut out; edges ordered so normals point to +y.
    s.push_back(Surface::make({0, 0, 0}, ez * H, ex * xd0, drywall, "south_wall_west"));
    s.push_back(Surface::make({xd0, 0, 0}, ez * dh, ex * (xd1 - xd0), conductor, "door"));
    s.push_back(Surface::make({xd0, 0, dh}, ez * (H - dh), ex * (xd1 - xd0), drywall, "south_wall_lintel"));
    s.push_back(Surface::make({xd1, 0, 0}, ez * H, ex * (L - xd1), drywall, "south_wall_east"));
    s.push_back(Surface::make({0, W, 0}, ex * x0, ez * H, drywall, "north_wall"));
    s.push_back(Surface::make({L, 0, 0}, ez * H, ey * Y, drywall, "east_wall"));
    s.push_back(Surface::make({0, 0, 0}, ey * W, ez * H, drywall, "west_end_wall"));
    s.push_back(Surface::make({x0, W, 0}, ey * Ls, ez * H, drywall, "side_west_wall"));
    s.push_back(Surface::make({x0, Y, 0}, ex * ws, ez * H, drywall, "side_end_wall"));
    s.push_back(Surface::make({0, 0, 0}, ex * L, ey * W, concrete, "main_floor"));
    s.push_back(Surface::make({x0, W, 0}, ex * ws, ey * Ls, concrete, "side_floor"));
    s.push_back(Surface::make({0, 0, H}, ey * W, ex * L, ceiling, "main_ceiling"));
    s.push_back(Surface::make({x0, W, H}, ey * Ls, ex * ws, ceiling, "side_ceiling"));

    if (params.reflector)
        scene.reflector = make_reflector(*params.reflector, scene, params.junction());

    scene.validate();
    return scene;
}

ReceiverGrid default_grid(const CorridorParams &params)
{
    ReceiverGrid g;
    g.x_extent = 1.5;
    g.y_extent = 15.0;
    g.spacing = 0.25;
    g.rx_height = params.tx_height;
    g.origin = {params.junction().x - 0.5 * g.x_extent, params.main_width + 0.5, params.tx_height};
    return g;
}

} // namespace rtcov
