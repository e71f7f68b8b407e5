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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rtcov/em.hpp"
#include "rtcov/scene.hpp"

namespace rtcov
{

// Surfaces are identified by their index in Scene::surfaces; the reflector takes the next id.
using GeometryId = std::size_t;

inline GeometryId reflector_id(const Scene &scene) { return scene.surfaces.size(); }

enum class InteractionKind
{
    specular_reflection,
    diffuse_scatter,
    reflector_bounce
};

struct Interaction
{
    InteractionKind kind = InteractionKind::specular_reflection;
    GeometryId geometry = 0; // surface index, or reflector_id() for reflector bounces and plate tiles
    std::size_t tile = 0;    // tile index for diffuse scatter
    Vec3 point;
    double incidence_angle = 0.0; // from the local surface normal
};

struct PropagationPath
{
    std::vector<Interaction> interactions;
    std::vector<double> segment_lengths;
    double total_length = 0.0; // sum of segment_lengths
    double delay = 0.0;        // total_length / c
    Amplitude amplitude;
    Vec3 departure_dir; // propagation direction leaving the transmitter
    Vec3 arrival_dir;   // propagation direction arriving at the receiver

    // Number of specular bounces (walls and plate); 0 for the direct path.
    std::size_t specular_order() const;
    bool is_diffuse() const;
};

// Total order used wherever paths are summed: delay, then interaction ids.
bool path_order_less(const PropagationPath &a, const PropagationPath &b);

struct Tile
{
    GeometryId surface = 0;
    std::size_t index = 0;
    Vec3 center;
    double area = 0.0;
    double phase = 0.0; // random per-tile phase of the diffuse contribution [rad]
};

// Partition into ceil(w/t) x ceil(h/t) tiles; the last row and column absorb the remainder.
std::vector<Tile> generate_tiles(const Surface &surface, double tile_size, GeometryId surface_id = 0);

// Uniform phase in [0, 2 pi) that depends only on (seed, surface, tile).
double tile_phase(std::uint64_t seed, GeometryId surface, std::size_t tile);

enum class RxOrientation
{
    strongest_path, // boresight towards the arrival direction of the strongest path
    fixed           // grid antenna boresight as configured
};

struct TraceOptions
{
    int max_order = 2;
    double tile_size = 0.25;
    bool diffuse = true;
    std::uint64_t seed = 1;
    RxOrientation rx_orientation = RxOrientation::strongest_path;

    void validate() const;
};

// Receiver antenna; nullopt means isotropic (0 dBi).
using RxAntenna = std::optional<AntennaSpec>;

// True iff the open segment p1-p2 hits a surface or the reflector volume not listed in `ignore`.
// Hits within 1e-9 m of an endpoint or of a rectangle edge do not count; neither do tangencies.
bool occluded(const Vec3 &p1, const Vec3 &p2, const Scene &scene, std::span<const GeometryId> ignore = {});

// Multiplies every amplitude by the field gain of `antenna` towards the path's arrival.
void apply_rx_antenna(std::vector<PropagationPath> &paths, const AntennaSpec &antenna);

// Path enumeration for one transmitter position. Precomputes image chains and transmitter-side
// tile data, so it pays off when many receivers share a transmitter. Holds a pointer to `scene`.
// All results are for an isotropic receiver and are sorted by path_order_less.
class Tracer
{
public:
    Tracer(const Scene &scene, const Vec3 &tx, const TraceOptions &options = {});

    // Direct path and wall-only image-method paths up to max_order.
    std::vector<PropagationPath> specular(const Vec3 &rx) const;
    // One-bounce directive scattering from wall tiles.
    std::vector<PropagationPath> diffuse(const Vec3 &rx) const;
    // Every path that touches the reflector (empty without one).
    std::vector<PropagationPath> reflector(const Vec3 &rx) const;
    // Union of the three.
    std::vector<PropagationPath> trace(const Vec3 &rx) const;

    std::size_t tile_count() const { return tile_count_; }
    const TraceOptions &options() const { return options_; }

private:
    struct Mirror
    {
        GeometryId id;
        Surface surface;
        bool is_reflector;
    };
    struct Chain
    {
        std::vector<std::size_t> mirrors; // indices into mirrors_
        std::vector<Vec3> images;         // images[j]: tx mirrored through mirrors[0..j]
        bool touches_reflector;
    };
    struct LitTile
    {
        Tile tile;
        Vec3 normal;
        Vec3 specular_dir;
        Vec3 incident_dir;
        double r_i;
        double theta_i;
        double tx_field_gain;
        const Material *material;
        double tx_side; // sign of the transmitter's signed distance to the tile plane
    };

    void build_chains(std::vector<std::size_t> &prefix, std::vector<Vec3> &images);
    void build_tiles(const Surface &surface, GeometryId id);
    std::optional<PropagationPath> resolve_chain(const Chain &chain, const Vec3 &rx) const;
    std::optional<PropagationPath> direct_path(const Vec3 &rx) const;
    std::optional<PropagationPath> curved_path(const Vec3 &rx) const;
    void scatter_paths(const Vec3 &rx, bool reflector_tiles, std::vector<PropagationPath> &out) const;

    const Scene *scene_;
    Vec3 tx_;
    TraceOptions options_;
    double wavelength_;
    std::vector<Mirror> mirrors_;
    std::vector<Chain> chains_;
    std::vector<LitTile> lit_tiles_;
    std::size_t tile_count_ = 0;
};

std::vector<PropagationPath> trace_specular(const Scene &scene, const Vec3 &tx, const Vec3 &rx, int max_order,
                                            const RxAntenna &rx_antenna = {});

std::vector<PropagationPath> trace_diffuse(const Scene &scene, const Vec3 &tx, const Vec3 &rx, double tile_size,
                                           std::uint64_t seed = 1, const RxAntenna &rx_antenna = {});

// Paths via `reflector` (which replaces any reflector in `scene`). Flat plates: image-method bounces
// (combined with wall bounces up to options.max_order) plus diffuse plate tiles. Cylinders and
// spheres: one path through the geometric specular point, scaled by the bistatic RCS.
std::vector<PropagationPath> trace_reflector(const Scene &scene, const Vec3 &tx, const Vec3 &rx,
                                             const Reflector &reflector, const TraceOptions &options = {},
                                             const RxAntenna &rx_antenna = {});

} // namespace rtcov
