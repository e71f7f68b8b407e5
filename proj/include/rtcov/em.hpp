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

#include <complex>

#include "rtcov/scene.hpp"

namespace rtcov
{

// Complex field amplitude relative to the transmitter: rx power [dBm] = tx power [dBm] + 20 log10 |a|.
using Amplitude = std::complex<double>;

// Field component relative to the local plane of incidence.
//  TE: E perpendicular to the plane of incidence.
//  TM: E in the plane of incidence. The reflected TM reference vector is s x k_reflected, where s is
//      the TE unit vector and k the propagation direction; with this convention a perfect conductor
//      has Gamma_TE = -1 and Gamma_TM = +1 at every angle.
enum class Polarization
{
    TE,
    TM
};

// Fresnel reflection coefficient of a half-space with complex permittivity eps_r - j sigma / (2 pi f eps0).
// theta_i is measured from the surface normal and must lie in [0, pi/2).
Amplitude fresnel(double theta_i, const Material &material, Polarization pol, double frequency_hz);

// Gaussian beam: G0 exp(-4 ln2 (dE^2/HPBW_E^2 + dH^2/HPBW_H^2)), floored 40 dB below boresight.
// dH is the azimuth offset from boresight and dE the elevation out of the boresight's horizontal plane.
// Returns linear power gain.
double antenna_gain(const AntennaSpec &spec, const Vec3 &direction);
double antenna_gain_dbi(const AntennaSpec &spec, const Vec3 &direction);

// Free-space field factor lambda / (4 pi d) exp(-j 2 pi d / lambda).
Amplitude spreading_and_phase(double path_length, double wavelength);
double free_space_path_loss_db(double path_length, double wavelength);

struct RcsResult
{
    double sigma = 0.0;          // m^2
    bool regime_warning = false; // reflector smaller than 5 wavelengths
};

// Optical-regime bistatic radar cross section. `incident_dir` is the propagation direction of the
// incoming wave, `scattered_dir` the direction from the reflector towards the observer.
//  sphere:   pi r^2
//  cylinder: (2 pi r h^2 / lambda) cos(beta/2) sinc^2(k h (i - s).a / 2), beta the bistatic angle
//            measured in the plane normal to the axis
//  plate:    (4 pi w^2 h^2 / lambda^2) cos^2(theta_i) sinc^2(k w (i - s).u / 2) sinc^2(k h (i - s).v / 2)
RcsResult rcs(const Reflector &reflector, const Vec3 &incident_dir, const Vec3 &scattered_dir, double wavelength);

// Directive lobe ((1 + cos psi) / 2)^alpha around the specular direction.
double directive_lobe(double psi, int alpha);

// Hemisphere integral of the lobe at normal incidence [sr], by numeric quadrature. Cached per alpha.
double directive_normalization(int alpha);

// Field scattered by one surface tile of area dA towards an observer at angle psi_R from the specular
// direction. Power |a|^2 = S^2 (lambda/4pi)^2 dA cos(theta_i) lobe(psi_R) / (F r_i^2 r_s^2); the phase is
// -2 pi (r_i + r_s) / lambda + tile_phase. Antenna gains are not included.
Amplitude directive_scatter(double tile_area, double theta_i, double psi_r, const Material &material, double r_i,
                            double r_s, double wavelength, double tile_phase = 0.0);

} // namespace rtcov
