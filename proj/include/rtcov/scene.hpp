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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rtcov/vec3.hpp"

namespace rtcov
{

inline constexpr double speed_of_light = 299792458.0; // m/s
inline constexpr double vacuum_permittivity = 8.8541878128e-12;
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double inch = 0.0254; // m

inline constexpr double deg2rad(double deg) { return deg * pi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / pi; }

// Invalid scene or grid configuration. `field` names the offending entry ("materials[2].scatter_coeff").
class ConfigError : public std::runtime_error
{
public:
    ConfigError(std::string field, const std::string &message, int line = 0)
        : std::runtime_error(format(field, message, line)), field_(std::move(field)), line_(line) {}

    const std::string &field() const { return field_; }
    int line() const { return line_; } // 0 when unknown

private:
    static std::string format(const std::string &field, const std::string &message, int line);
    std::string field_;
    int line_;
};

// Steering angle outside [0, pi/2) or incident direction not in the azimuth plane.
class InvalidOrientation : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

struct Material
{
    std::string name;
    bool perfect_conductor = false;
    double rel_permittivity = 1.0; // unused for perfect conductors
    double conductivity = 0.0;     // S/m, unused for perfect conductors
    double scatter_coeff = 0.0;    // directive-model S in [0, 1]
    int scatter_exponent = 4;      // directive-model lobe exponent alpha_R >= 1

    void validate(const std::string &field = "material") const;
};

// Built-in materials evaluated at 28 GHz (ITU-R P.2040 fits) with the diffuse coefficients used for the corridor.
namespace materials
{
Material layered_drywall();
Material concrete();
Material ceiling_board();
Material perfect_conductor();
std::vector<Material> defaults();
} // namespace materials

// Finite rectangle: origin + s*edge_u + t*edge_v for s, t in [0, 1].
// The unit normal is normalized(edge_u x edge_v); for room walls it points into the interior.
struct Surface
{
    Vec3 origin, edge_u, edge_v, normal;
    std::size_t material = 0; // index into Scene::materials
    std::string name;

    static Surface make(const Vec3 &origin, const Vec3 &edge_u, const Vec3 &edge_v, std::size_t material,
                        std::string name = {});

    double width() const { return norm(edge_u); }
    double height() const { return norm(edge_v); }
    double area() const { return width() * height(); }
    Vec3 center() const { return origin + 0.5 * (edge_u + edge_v); }
    double signed_distance(const Vec3 &p) const { return dot(p - origin, normal); }

    // True if the orthogonal projection of p falls inside the rectangle enlarged by `margin` meters
    // (negative margin shrinks it).
    bool contains_projection(const Vec3 &p, double margin = 0.0) const;

    void validate(const std::string &field = "surface") const;
};

Vec3 mirror_point(const Vec3 &p, const Surface &surface);

struct FlatPlate
{
    double width = 0.0, height = 0.0;
    Vec3 normal{-1.0, 0.0, 0.0}; // unit surface normal u
};

struct Cylinder
{
    double radius = 0.0, height = 0.0;
    Vec3 axis{0.0, 0.0, 1.0};
};

struct Sphere
{
    double radius = 0.0;
};

enum class ReflectorKind
{
    flat_plate,
    cylinder,
    sphere
};

std::string to_string(ReflectorKind kind);

struct Reflector
{
    std::variant<FlatPlate, Cylinder, Sphere> shape;
    Vec3 center;
    std::size_t material = 0;
    double tilt = 0.0; // steering angle in radians, flat plates only

    ReflectorKind kind() const { return static_cast<ReflectorKind>(shape.index()); }
    const FlatPlate *plate() const { return std::get_if<FlatPlate>(&shape); }

    // The plate as a rectangle; edge_u horizontal, edge_v vertical (for a vertical plate).
    Surface plate_surface() const;

    // Smallest dimension; the optical-regime formulas need it well above the wavelength.
    double min_dimension() const;

    void validate(const std::string &field = "reflector") const;
};

// True when the reflector is too small (below 5 wavelengths) for optical-regime RCS formulas.
bool regime_warning(const Reflector &reflector, double wavelength);

enum class AntennaPolarization
{
    vertical
};

struct AntennaSpec
{
    Vec3 boresight{1.0, 0.0, 0.0};
    double gain_dbi = 17.0;
    double hpbw_e_deg = 26.0;
    double hpbw_h_deg = 24.0;
    AntennaPolarization polarization = AntennaPolarization::vertical;

    void validate(const std::string &field = "antenna") const;
};

struct Scene
{
    std::vector<Material> materials;
    std::vector<Surface> surfaces;
    std::optional<Reflector> reflector;
    Vec3 tx_position;
    AntennaSpec tx_antenna;
    double frequency_hz = 28e9;
    double tx_power_dbm = 0.0;

    double wavelength() const { return speed_of_light / frequency_hz; }
    const Material &material_of(const Surface &s) const { return materials.at(s.material); }
    std::size_t find_material(const std::string &name) const; // throws ConfigError if absent

    void validate() const;
};

struct ReceiverGrid
{
    Vec3 origin; // z ignored; points sit at rx_height
    double x_extent = 1.5, y_extent = 15.0;
    double spacing = 0.25;
    double rx_height = 1.5;
    AntennaSpec rx_antenna{{0.0, -1.0, 0.0}};

    std::size_t nx() const;
    std::size_t ny() const;
    std::size_t size() const { return nx() * ny(); }
    Vec3 point(std::size_t ix, std::size_t iy) const;

    void validate() const;
};

// Unit normal that steers a beam arriving along `incident_dir` by 2*steer_angle away from the
// back-reflection direction: -incident_dir rotated clockwise by steer_angle about z, so a positive
// angle turns the beam to the left of travel.
Vec3 orient_flat_reflector(const Vec3 &incident_dir, double steer_angle);

struct ReflectorSpec
{
    ReflectorKind kind = ReflectorKind::flat_plate;
    double width = 24 * inch, height = 24 * inch; // plate width/height, cylinder height
    double radius = 0.0;                          // cylinder and sphere
    Vec3 axis{0.0, 0.0, 1.0};                     // cylinder
    double tilt = deg2rad(45.0);                  // plate steering angle
    std::optional<Vec3> center;                   // default: corridor junction
    std::string material = "perfect_conductor";

    static ReflectorSpec plate(double side, double tilt_rad = deg2rad(45.0));
    static ReflectorSpec sphere(double radius);
    static ReflectorSpec cylinder(double radius, double height);
};

// L-shaped corridor. The main corridor runs along +x (y in [0, main_width]); the receiver corridor
// branches off towards +y at its far end (x in [main_length - side_width, main_length]).
// The reflector sits at the junction centre, in line with the transmitter.
struct CorridorParams
{
    double main_width = 2.0;
    double side_width = 2.0;
    double side_length = 18.0;
    double height = 2.7;
    double tx_to_reflector = 5.0;
    double behind_tx = 2.0; // main corridor length behind the transmitter
    double tx_height = 1.5;
    double door_width = 1.0;
    double door_height = 2.1;
    double door_offset = 3.0; // door centre, measured back from the reflector along x

    double frequency_hz = 28e9;
    double tx_power_dbm = 0.0;
    AntennaSpec tx_antenna; // boresight is replaced by the direction to the junction unless aim_tx is false
    bool aim_tx = true;
    std::optional<Vec3> tx_position;
    std::vector<Material> materials = materials::defaults();
    std::optional<ReflectorSpec> reflector;

    double main_length() const { return behind_tx + tx_to_reflector + 0.5 * side_width; }
    Vec3 junction() const { return {main_length() - 0.5 * side_width, 0.5 * main_width, tx_height}; }
    Vec3 default_tx() const { return {behind_tx, 0.5 * main_width, tx_height}; }

    void validate() const;
};

Scene make_corridor(const CorridorParams &params);

// 1.5 m x 15 m grid centred in the receiver corridor, starting 0.5 m past the junction.
ReceiverGrid default_grid(const CorridorParams &params);

Reflector make_reflector(const ReflectorSpec &spec, const Scene &scene, const Vec3 &default_center);

} // namespace rtcov
