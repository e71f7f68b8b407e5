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

#include "rtcov/tracer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <tuple>

namespace rtcov
{

namespace
{
constexpr double plane_eps = 1e-9; // m; points closer than this to a plane count as on it
constexpr double edge_eps = 1e-9;  // m; open-edge tolerance for occluders, closed for bounce points

struct CVec3
{
    Amplitude x, y, z;
};

CVec3 scaled(const Vec3 &v, Amplitude a) { return {a * v.x, a * v.y, a * v.z}; }
CVec3 operator+(const CVec3 &a, const CVec3 &b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Amplitude cdot(const CVec3 &e, const Vec3 &v) { return e.x * v.x + e.y * v.y + e.z * v.z; }

Vec3 any_perpendicular(const Vec3 &k)
{
    const Vec3 helper = std::abs(k.z) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
    return normalized(cross(k, helper));
}

// Unit vertical polarization vector transverse to propagation direction k.
Vec3 vertical_polarization(const Vec3 &k)
{
    const Vec3 z{0.0, 0.0, 1.0};
    const Vec3 p = z - dot(z, k) * k;
    return norm(p) < 1e-12 ? any_perpendicular(k) : normalized(p);
}

double incidence_angle(const Vec3 &k_in, const Vec3 &normal)
{
    const double c = std::min(std::abs(dot(k_in, normal)), 1.0);
    return std::min(std::acos(c), std::nextafter(0.5 * pi, 0.0));
}

auto interaction_key(const Interaction &i) { return std::make_tuple(static_cast<int>(i.kind), i.geometry, i.tile); }

bool ignored(std::span<const GeometryId> ignore, GeometryId id)
{
    return std::find(ignore.begin(), ignore.end(), id) != ignore.end();
}

// Range of segment parameter t in which p + t d lies inside the reflector body, intersected with [lo, hi].
// Returns the length of that range in parameter units (0 when disjoint).
double inside_span(const Reflector &r, const Vec3 &p, const Vec3 &d, double lo, double hi)
{
    auto clip_quadratic = [&](double A, double B, double C) -> bool
    {
        // A t^2 + B t + C <= 0
        if (A < 1e-30)
            return C < 0.0;
        const double disc = B * B - 4.0 * A * C;
        if (disc <= 0.0)
            return false;
        const double sq = std::sqrt(disc);
        lo = std::max(lo, (-B - sq) / (2.0 * A));
        hi = std::min(hi, (-B + sq) / (2.0 * A));
        return true;
    };

    const Vec3 q = p - r.center;
    if (const auto *s = std::get_if<Sphere>(&r.shape))
    {
        if (!clip_quadratic(dot(d, d), 2.0 * dot(q, d), dot(q, q) - s->radius * s->radius))
            return 0.0;
    }
    else
    {
        const auto &c = std::get<Cylinder>(r.shape);
        const double qa = dot(q, c.axis), da = dot(d, c.axis);
        if (std::abs(da) < 1e-15)
        {
            if (std::abs(qa) >= 0.5 * c.height)
                return 0.0;
        }
        else
        {
            const double t1 = (-0.5 * c.height - qa) / da, t2 = (0.5 * c.height - qa) / da;
            lo = std::max(lo, std::min(t1, t2));
            hi = std::min(hi, std::max(t1, t2));
        }
        const Vec3 qp = q - qa * c.axis, dp = d - da * c.axis;
        if (!clip_quadratic(dot(dp, dp), 2.0 * dot(qp, dp), dot(qp, qp) - c.radius * c.radius))
            return 0.0;
    }
    return std::max(hi - lo, 0.0);
}

bool segment_hits_rectangle(const Vec3 &p1, const Vec3 &d, double length, const Surface &s)
{
    const double denom = dot(s.normal, d);
    if (std::abs(denom) < 1e-15)
        return false;
    const double t = dot(s.normal, s.origin - p1) / denom;
    if (t * length <= plane_eps || (1.0 - t) * length <= plane_eps)
        return false;
    return s.contains_projection(p1 + t * d, -edge_eps);
}

// Specular point on the circle |x - c| = r lying in the plane of c, p, q (great circle for a sphere).
std::optional<Vec3> circle_specular_point(const Vec3 &c, double r, const Vec3 &p, const Vec3 &q)
{
    const Vec3 a = p - c, b = q - c;
    if (norm(a) <= r || norm(b) <= r)
        return std::nullopt;
    const Vec3 ah = normalized(a), bh = normalized(b);
    Vec3 e2 = bh - dot(bh, ah) * ah;
    if (norm(e2) < 1e-12)
    {
        if (dot(ah, bh) > 0.0)
            return c + r * ah;
        return std::nullopt; // forward scatter, no lit specular point
    }
    e2 = normalized(e2);
    const double gamma = std::atan2(dot(bh, e2), dot(bh, ah));

    auto point = [&](double phi) { return c + r * (std::cos(phi) * ah + std::sin(phi) * e2); };
    // Derivative of |P - p| + |P - q| along the arc (up to the factor r).
    auto slope = [&](double phi)
    {
        const Vec3 P = point(phi);
        const Vec3 tangent = -std::sin(phi) * ah + std::cos(phi) * e2;
        return dot(tangent, normalized(P - p) + normalized(P - q));
    };

    double lo = 0.0, hi = gamma;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        (slope(mid) < 0.0 ? lo : hi) = mid;
    }
    const Vec3 P = point(0.5 * (lo + hi));
    const Vec3 n = (P - c) / r;
    if (dot(p - P, n) <= 0.0 || dot(q - P, n) <= 0.0)
        return std::nullopt;
    return P;
}

PropagationPath finish_path(std::vector<Interaction> interactions, const std::vector<Vec3> &vertices)
{
    PropagationPath path;
    path.interactions = std::move(interactions);
    for (std::size_t i = 1; i < vertices.size(); ++i)
    {
        const double len = distance(vertices[i - 1], vertices[i]);
        path.segment_lengths.push_back(len);
        path.total_length += len;
    }
    path.delay = path.total_length / speed_of_light;
    path.departure_dir = normalized(vertices[1] - vertices[0]);
    path.arrival_dir = normalized(vertices.back() - vertices[vertices.size() - 2]);
    return path;
}

void sort_paths(std::vector<PropagationPath> &paths) { std::sort(paths.begin(), paths.end(), path_order_less); }
} // namespace

std::size_t PropagationPath::specular_order() const
{
    return static_cast<std::size_t>(std::count_if(interactions.begin(), interactions.end(),
                                                  [](const Interaction &i)
                                                  { return i.kind != InteractionKind::diffuse_scatter; }));
}

bool PropagationPath::is_diffuse() const
{
    return std::any_of(interactions.begin(), interactions.end(),
                       [](const Interaction &i) { return i.kind == InteractionKind::diffuse_scatter; });
}

bool path_order_less(const PropagationPath &a, const PropagationPath &b)
{
    if (a.delay != b.delay)
        return a.delay < b.delay;
    return std::lexicographical_compare(a.interactions.begin(), a.interactions.end(), b.interactions.begin(),
                                        b.interactions.end(), [](const Interaction &x, const Interaction &y)
                                        { return interaction_key(x) < interaction_key(y); });
}

std::vector<Tile> generate_tiles(const Surface &surface, double tile_size, GeometryId surface_id)
{
    if (!(tile_size > 0.0))
        throw std::invalid_argument("generate_tiles: tile size must be positive");
    const double w = surface.width(), h = surface.height();
    const auto nu = static_cast<std::size_t>(std::max(1.0, std::ceil(w / tile_size - 1e-9)));
    const auto nv = static_cast<std::size_t>(std::max(1.0, std::ceil(h / tile_size - 1e-9)));
    const Vec3 u = surface.edge_u / w, v = surface.edge_v / h;

    std::vector<Tile> tiles;
    tiles.reserve(nu * nv);
    for (std::size_t a = 0; a < nu; ++a)
    {
        const double s0 = a * tile_size, s1 = (a + 1 == nu) ? w : std::min((a + 1) * tile_size, w);
        for (std::size_t b = 0; b < nv; ++b)
        {
            const double t0 = b * tile_size, t1 = (b + 1 == nv) ? h : std::min((b + 1) * tile_size, h);
            Tile tile;
            tile.surface = surface_id;
            tile.index = a * nv + b;
            tile.center = surface.origin + (0.5 * (s0 + s1)) * u + (0.5 * (t0 + t1)) * v;
            tile.area = (s1 - s0) * (t1 - t0);
            tiles.push_back(tile);
        }
    }
    return tiles;
}

double tile_phase(std::uint64_t seed, GeometryId surface, std::size_t tile)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(surface), static_cast<std::uint32_t>(tile)};
    std::mt19937_64 gen(seq);
    return std::uniform_real_distribution<double>(0.0, 2.0 * pi)(gen);
}

void TraceOptions::validate() const
{
    if (max_order < 0)
        throw ConfigError("trace.max_order", "must be >= 0");
    if (!(tile_size > 0.0) || !std::isfinite(tile_size))
        throw ConfigError("trace.tile_size", "must be a positive number");
}

bool occluded(const Vec3 &p1, const Vec3 &p2, const Scene &scene, std::span<const GeometryId> ignore)
{
    const Vec3 d = p2 - p1;
    const double length = norm(d);
    if (length <= 2.0 * plane_eps)
        return false;
    for (std::size_t i = 0; i < scene.surfaces.size(); ++i)
        if (!ignored(ignore, i) && segment_hits_rectangle(p1, d, length, scene.surfaces[i]))
            return true;

    if (!scene.reflector || ignored(ignore, reflector_id(scene)))
        return false;
    const Reflector &r = *scene.reflector;
    if (r.plate())
        return segment_hits_rectangle(p1, d, length, r.plate_surface());
    const double margin = plane_eps / length;
    return inside_span(r, p1, d, margin, 1.0 - margin) * length > plane_eps;
}

void apply_rx_antenna(std::vector<PropagationPath> &paths, const AntennaSpec &antenna)
{
    for (auto &p : paths)
        p.amplitude *= std::sqrt(antenna_gain(antenna, -p.arrival_dir));
}

Tracer::Tracer(const Scene &scene, const Vec3 &tx, const TraceOptions &options)
    : scene_(&scene), tx_(tx), options_(options), wavelength_(scene.wavelength())
{
    options_.validate();
    for (std::size_t i = 0; i < scene.surfaces.size(); ++i)
        mirrors_.push_back({i, scene.surfaces[i], false});
    if (scene.reflector && scene.reflector->plate())
        mirrors_.push_back({reflector_id(scene), scene.reflector->plate_surface(), true});

    std::vector<std::size_t> prefix;
    std::vector<Vec3> images;
    build_chains(prefix, images);

    if (options_.diffuse)
    {
        for (std::size_t i = 0; i < scene.surfaces.size(); ++i)
            build_tiles(scene.surfaces[i], i);
        if (scene.reflector && scene.reflector->plate())
            build_tiles(scene.reflector->plate_surface(), reflector_id(scene));
    }
}

void Tracer::build_chains(std::vector<std::size_t> &prefix, std::vector<Vec3> &images)
{
    if (static_cast<int>(prefix.size()) == options_.max_order)
        return;
    const Vec3 source = images.empty() ? tx_ : images.back();
    for (std::size_t m = 0; m < mirrors_.size(); ++m)
    {
        if (!prefix.empty() && prefix.back() == m)
            continue;
        const Surface &s = mirrors_[m].surface;
        if (std::abs(s.signed_distance(source)) <= plane_eps)
            continue;
        prefix.push_back(m);
        images.push_back(mirror_point(source, s));
        Chain chain{prefix, images, false};
        for (std::size_t idx : prefix)
            chain.touches_reflector = chain.touches_reflector || mirrors_[idx].is_reflector;
        chains_.push_back(std::move(chain));
        build_chains(prefix, images);
        prefix.pop_back();
        images.pop_back();
    }
}

void Tracer::build_tiles(const Surface &surface, GeometryId id)
{
    const Material &material = scene_->material_of(surface);
    if (material.scatter_coeff <= 0.0)
        return;
    const double tx_dist = surface.signed_distance(tx_);
    const std::array<GeometryId, 1> ignore{id};
    for (Tile &tile : generate_tiles(surface, options_.tile_size, id))
    {
        ++tile_count_;
        if (std::abs(tx_dist) <= plane_eps || occluded(tx_, tile.center, *scene_, ignore))
            continue;
        tile.phase = tile_phase(options_.seed, id, tile.index);
        LitTile lit;
        lit.tile = tile;
        lit.normal = surface.normal;
        lit.r_i = distance(tx_, tile.center);
        lit.incident_dir = (tile.center - tx_) / lit.r_i;
        lit.specular_dir = reflect(lit.incident_dir, surface.normal);
        lit.theta_i = incidence_angle(lit.incident_dir, surface.normal);
        lit.tx_field_gain = std::sqrt(antenna_gain(scene_->tx_antenna, lit.incident_dir));
        lit.material = &material;
        lit.tx_side = tx_dist > 0.0 ? 1.0 : -1.0;
        lit_tiles_.push_back(lit);
    }
}

std::optional<PropagationPath> Tracer::direct_path(const Vec3 &rx) const
{
    if (occluded(tx_, rx, *scene_))
        return std::nullopt;
    PropagationPath path = finish_path({}, {tx_, rx});
    path.amplitude = spreading_and_phase(path.total_length, wavelength_) *
                     std::sqrt(antenna_gain(scene_->tx_antenna, path.departure_dir));
    return path;
}

std::optional<PropagationPath> Tracer::resolve_chain(const Chain &chain, const Vec3 &rx) const
{
    const std::size_t k = chain.mirrors.size();
    std::vector<Vec3> vertices(k + 2);
    vertices.front() = tx_;
    vertices.back() = rx;

    // Walk back from the receiver through the images.
    Vec3 target = rx;
    for (std::size_t j = k; j-- > 0;)
    {
        const Surface &s = mirrors_[chain.mirrors[j]].surface;
        const Vec3 &image = chain.images[j];
        const double di = s.signed_distance(image), dt = s.signed_distance(target);
        if (!(di * dt < 0.0) || std::abs(dt) <= plane_eps)
            return std::nullopt;
        const Vec3 hit = image + (di / (di - dt)) * (target - image);
        if (!s.contains_projection(hit, edge_eps))
            return std::nullopt;
        vertices[j + 1] = hit;
        target = hit;
    }

    // Both neighbours of every bounce must lie strictly on the same side of its plane.
    for (std::size_t j = 0; j < k; ++j)
    {
        const Surface &s = mirrors_[chain.mirrors[j]].surface;
        const double a = s.signed_distance(vertices[j]), b = s.signed_distance(vertices[j + 2]);
        if (!(a * b > 0.0) || std::abs(a) <= plane_eps || std::abs(b) <= plane_eps)
            return std::nullopt;
    }

    for (std::size_t j = 0; j <= k; ++j)
    {
        std::array<GeometryId, 2> ignore{};
        std::size_t n = 0;
        if (j > 0)
            ignore[n++] = mirrors_[chain.mirrors[j - 1]].id;
        if (j < k)
            ignore[n++] = mirrors_[chain.mirrors[j]].id;
        if (occluded(vertices[j], vertices[j + 1], *scene_, std::span(ignore.data(), n)))
            return std::nullopt;
    }

    std::vector<Interaction> interactions;
    interactions.reserve(k);
    Vec3 k_first = normalized(vertices[1] - vertices[0]);
    CVec3 field = scaled(vertical_polarization(k_first), 1.0);
    for (std::size_t j = 0; j < k; ++j)
    {
        const Mirror &m = mirrors_[chain.mirrors[j]];
        const Vec3 k_in = normalized(vertices[j + 1] - vertices[j]);
        const Vec3 k_out = normalized(vertices[j + 2] - vertices[j + 1]);
        const double theta = incidence_angle(k_in, m.surface.normal);
        const Material &mat = scene_->material_of(m.surface);
        const Amplitude g_te = fresnel(theta, mat, Polarization::TE, scene_->frequency_hz);
        const Amplitude g_tm = fresnel(theta, mat, Polarization::TM, scene_->frequency_hz);

        Vec3 s = cross(k_in, m.surface.normal);
        s = norm(s) < 1e-9 ? any_perpendicular(k_in) : normalized(s);
        const Vec3 p_in = cross(s, k_in), p_out = cross(s, k_out);
        field = scaled(s, g_te * cdot(field, s)) + scaled(p_out, g_tm * cdot(field, p_in));

        interactions.push_back({m.is_reflector ? InteractionKind::reflector_bounce : InteractionKind::specular_reflection,
                                m.id, 0, vertices[j + 1], theta});
    }

    PropagationPath path = finish_path(std::move(interactions), vertices);
    path.amplitude = spreading_and_phase(path.total_length, wavelength_) *
                     std::sqrt(antenna_gain(scene_->tx_antenna, path.departure_dir)) *
                     cdot(field, vertical_polarization(path.arrival_dir));
    return path;
}

std::optional<PropagationPath> Tracer::curved_path(const Vec3 &rx) const
{
    const Reflector &r = *scene_->reflector;
    std::optional<Vec3> bounce;
    if (const auto *s = std::get_if<Sphere>(&r.shape))
    {
        bounce = circle_specular_point(r.center, s->radius, tx_, rx);
    }
    else
    {
        const auto &c = std::get<Cylinder>(r.shape);
        const Vec3 &a = c.axis;
        auto project = [&](const Vec3 &p) { return p - dot(p - r.center, a) * a; };
        const Vec3 ptx = project(tx_), prx = project(rx);
        const auto flat = circle_specular_point(r.center, c.radius, ptx, prx);
        if (!flat)
            return std::nullopt;
        const double d1 = distance(ptx, *flat), d2 = distance(*flat, prx);
        const double z_tx = dot(tx_ - r.center, a), z_rx = dot(rx - r.center, a);
        const double z = z_tx + (z_rx - z_tx) * d1 / (d1 + d2);
        if (std::abs(z) > 0.5 * c.height)
            return std::nullopt;
        bounce = *flat + z * a;
    }
    if (!bounce)
        return std::nullopt;

    const std::array<GeometryId, 1> ignore{reflector_id(*scene_)};
    if (occluded(tx_, *bounce, *scene_, ignore) || occluded(*bounce, rx, *scene_, ignore))
        return std::nullopt;

    Vec3 normal;
    if (std::holds_alternative<Sphere>(r.shape))
        normal = normalized(*bounce - r.center);
    else
    {
        const Vec3 &a = std::get<Cylinder>(r.shape).axis;
        const Vec3 radial = *bounce - r.center;
        normal = normalized(radial - dot(radial, a) * a);
    }

    PropagationPath path = finish_path(
        {{InteractionKind::reflector_bounce, reflector_id(*scene_), 0, *bounce, 0.0}}, {tx_, *bounce, rx});
    path.interactions[0].incidence_angle = incidence_angle(path.departure_dir, normal);

    const double sigma = rcs(r, path.departure_dir, path.arrival_dir, wavelength_).sigma;
    const double r_i = path.segment_lengths[0], r_s = path.segment_lengths[1];
    const double four_pi_cubed = std::pow(4.0 * pi, 3);
    const double power = antenna_gain(scene_->tx_antenna, path.departure_dir) * wavelength_ * wavelength_ * sigma /
                         (four_pi_cubed * r_i * r_i * r_s * r_s);
    path.amplitude = std::polar(std::sqrt(power), -2.0 * pi * path.total_length / wavelength_);
    return path;
}

void Tracer::scatter_paths(const Vec3 &rx, bool reflector_tiles, std::vector<PropagationPath> &out) const
{
    const GeometryId rid = reflector_id(*scene_);
    for (const LitTile &lit : lit_tiles_)
    {
        if ((lit.tile.surface == rid) != reflector_tiles)
            continue;
        const Vec3 &c = lit.tile.center;
        const double side = dot(rx - c, lit.normal);
        if (!(side * lit.tx_side > 0.0) || std::abs(side) <= plane_eps)
            continue;
        const std::array<GeometryId, 1> ignore{lit.tile.surface};
        if (occluded(c, rx, *scene_, ignore))
            continue;

        const double r_s = distance(c, rx);
        const Vec3 k_s = (rx - c) / r_s;
        const double psi = angle_between(lit.specular_dir, k_s);

        PropagationPath path = finish_path({{InteractionKind::diffuse_scatter, lit.tile.surface, lit.tile.index, c,
                                             lit.theta_i}},
                                           {tx_, c, rx});
        path.amplitude = directive_scatter(lit.tile.area, lit.theta_i, psi, *lit.material, lit.r_i, r_s,
                                           wavelength_, lit.tile.phase) *
                         lit.tx_field_gain;
        out.push_back(std::move(path));
    }
}

std::vector<PropagationPath> Tracer::specular(const Vec3 &rx) const
{
    if (rx == tx_)
        throw std::invalid_argument("trace: receiver coincides with transmitter");
    std::vector<PropagationPath> out;
    if (auto p = direct_path(rx))
        out.push_back(std::move(*p));
    for (const Chain &chain : chains_)
        if (!chain.touches_reflector)
            if (auto p = resolve_chain(chain, rx))
                out.push_back(std::move(*p));
    sort_paths(out);
    return out;
}

std::vector<PropagationPath> Tracer::diffuse(const Vec3 &rx) const
{
    std::vector<PropagationPath> out;
    scatter_paths(rx, false, out);
    sort_paths(out);
    return out;
}

std::vector<PropagationPath> Tracer::reflector(const Vec3 &rx) const
{
    std::vector<PropagationPath> out;
    if (!scene_->reflector)
        return out;
    if (scene_->reflector->plate())
    {
        for (const Chain &chain : chains_)
            if (chain.touches_reflector)
                if (auto p = resolve_chain(chain, rx))
                    out.push_back(std::move(*p));
        scatter_paths(rx, true, out);
    }
    else if (auto p = curved_path(rx))
    {
        out.push_back(std::move(*p));
    }
    sort_paths(out);
    return out;
}

std::vector<PropagationPath> Tracer::trace(const Vec3 &rx) const
{
    std::vector<PropagationPath> out = specular(rx);
    auto append = [&out](std::vector<PropagationPath> more)
    { out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end())); };
    append(diffuse(rx));
    append(reflector(rx));
    sort_paths(out);
    return out;
}

std::vector<PropagationPath> trace_specular(const Scene &scene, const Vec3 &tx, const Vec3 &rx, int max_order,
                                            const RxAntenna &rx_antenna)
{
    TraceOptions opt;
    opt.max_order = max_order;
    opt.diffuse = false;
    auto paths = Tracer(scene, tx, opt).specular(rx);
    if (rx_antenna)
        apply_rx_antenna(paths, *rx_antenna);
    return paths;
}

std::vector<PropagationPath> trace_diffuse(const Scene &scene, const Vec3 &tx, const Vec3 &rx, double tile_size,
                                           std::uint64_t seed, const RxAntenna &rx_antenna)
{
    TraceOptions opt;
    opt.max_order = 0;
    opt.tile_size = tile_size;
    opt.seed = seed;
    auto paths = Tracer(scene, tx, opt).diffuse(rx);
    if (rx_antenna)
        apply_rx_antenna(paths, *rx_antenna);
    return paths;
}

std::vector<PropagationPath> trace_reflector(const Scene &scene, const Vec3 &tx, const Vec3 &rx,
                                             const Reflector &reflector, const TraceOptions &options,
                                             const RxAntenna &rx_antenna)
{
    Scene with = scene;
    with.reflector = reflector;
    auto paths = Tracer(with, tx, options).reflector(rx);
    if (rx_antenna)
        apply_rx_antenna(paths, *rx_antenna);
    return paths;
}

} // namespace rtcov
