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

#include "rtcov/em.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace rtcov
{

Amplitude fresnel(double theta_i, const Material &material, Polarization pol, double frequency_hz)
{
    if (!(theta_i >= 0.0 && theta_i < 0.5 * pi))
        throw std::domain_error("fresnel: incidence angle must lie in [0, pi/2)");
    if (material.perfect_conductor)
        return pol == Polarization::TE ? Amplitude(-1.0, 0.0) : Amplitude(1.0, 0.0);

    const Amplitude eps(material.rel_permittivity,
                        -material.conductivity / (2.0 * pi * frequency_hz * vacuum_permittivity));
    const double c = std::cos(theta_i), s = std::sin(theta_i);
    const Amplitude root = std::sqrt(eps - s * s);
    if (pol == Polarization::TE)
        return (c - root) / (c + root);
    return (eps * c - root) / (eps * c + root);
}

double antenna_gain(const AntennaSpec &spec, const Vec3 &direction)
{
    const Vec3 &b = spec.boresight;
    Vec3 h = cross(Vec3{0.0, 0.0, 1.0}, b);
    h = norm(h) < 1e-12 ? Vec3{0.0, 1.0, 0.0} : normalized(h);
    const Vec3 e = cross(b, h);

    const Vec3 d = normalized(direction);
    const double off_h = std::atan2(dot(d, h), dot(d, b));
    const double off_e = std::asin(std::clamp(dot(d, e), -1.0, 1.0));

    const double he = deg2rad(spec.hpbw_e_deg), hh = deg2rad(spec.hpbw_h_deg);
    const double rel = std::exp(-4.0 * std::log(2.0) * (off_e * off_e / (he * he) + off_h * off_h / (hh * hh)));
    return std::pow(10.0, spec.gain_dbi / 10.0) * std::max(rel, 1e-4);
}

double antenna_gain_dbi(const AntennaSpec &spec, const Vec3 &direction)
{
    return 10.0 * std::log10(antenna_gain(spec, direction));
}

Amplitude spreading_and_phase(double path_length, double wavelength)
{
    if (!(path_length > 0.0))
        throw std::domain_error("spreading_and_phase: path length must be positive");
    const double mag = wavelength / (4.0 * pi * path_length);
    return std::polar(mag, -2.0 * pi * path_length / wavelength);
}

double free_space_path_loss_db(double path_length, double wavelength)
{
    return 20.0 * std::log10(4.0 * pi * path_length / wavelength);
}

namespace
{
double sinc(double x) { return std::abs(x) < 1e-12 ? 1.0 : std::sin(x) / x; }

Vec3 plate_axis_u(const Vec3 &n)
{
    const Vec3 a = cross(Vec3{0.0, 0.0, 1.0}, n);
    return norm(a) < 1e-9 ? Vec3{1.0, 0.0, 0.0} : normalized(a);
}
} // namespace

RcsResult rcs(const Reflector &reflector, const Vec3 &incident_dir, const Vec3 &scattered_dir, double wavelength)
{
    const Vec3 i = normalized(incident_dir), s = normalized(scattered_dir);
    const double k = 2.0 * pi / wavelength;
    RcsResult out;
    out.regime_warning = regime_warning(reflector, wavelength);

    if (const auto *sph = std::get_if<Sphere>(&reflector.shape))
    {
        out.sigma = pi * sph->radius * sph->radius;
    }
    else if (const auto *cyl = std::get_if<Cylinder>(&reflector.shape))
    {
        const Vec3 &a = cyl->axis;
        const Vec3 to_tx = -(i - dot(i, a) * a);
        const Vec3 to_rx = s - dot(s, a) * a;
        if (norm(to_tx) < 1e-12 || norm(to_rx) < 1e-12)
            return out; // end-on
        const double cos_beta = std::clamp(dot(to_tx, to_rx) / (norm(to_tx) * norm(to_rx)), -1.0, 1.0);
        const double half = std::sqrt(0.5 * (1.0 + cos_beta));
        const double axial = sinc(0.5 * k * cyl->height * dot(i - s, a));
        out.sigma = 2.0 * pi * cyl->radius * cyl->height * cyl->height / wavelength * half * axial * axial;
    }
    else
    {
        const FlatPlate &p = std::get<FlatPlate>(reflector.shape);
        const double in = dot(i, p.normal), sn = dot(s, p.normal);
        if (in * sn >= 0.0)
            return out; // observer on the dark side, or grazing
        const Vec3 u = plate_axis_u(p.normal);
        const Vec3 v = normalized(cross(p.normal, u));
        const Vec3 q = i - s;
        const double fu = sinc(0.5 * k * p.width * dot(q, u));
        const double fv = sinc(0.5 * k * p.height * dot(q, v));
        const double area = p.width * p.height;
        out.sigma = 4.0 * pi * area * area / (wavelength * wavelength) * in * in * fu * fu * fv * fv;
    }
    return out;
}

double directive_lobe(double psi, int alpha)
{
    return std::pow(0.5 * (1.0 + std::cos(psi)), alpha);
}

namespace
{
double integrate_lobe(int alpha)
{
    // Simpson over mu = cos(psi) in [0, 1]; azimuth integral is 2 pi.
    constexpr int n = 2000;
    const double h = 1.0 / n;
    double sum = 0.0;
    for (int j = 0; j <= n; ++j)
    {
        const double w = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
        sum += w * std::pow(0.5 * (1.0 + j * h), alpha);
    }
    return 2.0 * pi * sum * h / 3.0;
}

constexpr int cached_exponents = 64;
} // namespace

double directive_normalization(int alpha)
{
    if (alpha < 1)
        throw std::domain_error("directive_normalization: exponent must be >= 1");
    static const auto table = []
    {
        std::array<double, cached_exponents + 1> t{};
        for (int a = 1; a <= cached_exponents; ++a)
            t[a] = integrate_lobe(a);
        return t;
    }();
    return alpha <= cached_exponents ? table[alpha] : integrate_lobe(alpha);
}

Amplitude directive_scatter(double tile_area, double theta_i, double psi_r, const Material &material, double r_i,
                            double r_s, double wavelength, double tile_phase)
{
    if (!(r_i > 0.0 && r_s > 0.0))
        throw std::domain_error("directive_scatter: distances must be positive");
    const double S = material.scatter_coeff;
    if (S == 0.0)
        return {0.0, 0.0};
    const double cos_i = std::max(std::cos(theta_i), 0.0);
    const double power = S * S * tile_area * cos_i * directive_lobe(psi_r, material.scatter_exponent) /
                         directive_normalization(material.scatter_exponent);
    const double mag = wavelength / (4.0 * pi) * std::sqrt(power) / (r_i * r_s);
    return std::polar(mag, -2.0 * pi * (r_i + r_s) / wavelength + tile_phase);
}

} // namespace rtcov
