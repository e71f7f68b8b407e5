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
#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "rtcov/em.hpp"
#include "rtcov/tracer.hpp"
#include "test_support.hpp"

using namespace rtcov;
using Catch::Approx;

namespace
{

constexpr double f28 = 28e9;
const double lambda28 = 299792458.0 / 28e9;

double db10(double x) { return 10.0 * std::log10(x); }

Material dielectric(double eps, double sigma)
{
    Material m;
    m.name = "test";
    m.rel_permittivity = eps;
    m.conductivity = sigma;
    m.scatter_coeff = 0.3;
    return m;
}

AntennaSpec horn(const Vec3 &boresight = {1, 0, 0})
{
    AntennaSpec a;
    a.boresight = boresight;
    return a;
}

Vec3 elevated(double deg) { return {std::cos(deg2rad(deg)), 0.0, std::sin(deg2rad(deg))}; }
Vec3 azimuthal(double deg) { return {std::cos(deg2rad(deg)), std::sin(deg2rad(deg)), 0.0}; }

} // namespace

TEST_CASE("perfect conductor reflection")
{
    const Material pec = materials::perfect_conductor();
    for (double deg : {0.0, 10.0, 45.0, 80.0, 89.9})
    {
        CHECK(fresnel(deg2rad(deg), pec, Polarization::TE, f28) == Amplitude(-1.0, 0.0));
        CHECK(fresnel(deg2rad(deg), pec, Polarization::TM, f28) == Amplitude(1.0, 0.0));
    }
}

TEST_CASE("Brewster angle of a lossless dielectric")
{
    const Material m = dielectric(4.0, 0.0);
    CHECK(std::abs(fresnel(std::atan(2.0), m, Polarization::TM, f28)) < 1e-12);
    CHECK(std::abs(fresnel(std::atan(2.0), m, Polarization::TE, f28)) > 0.5);
}

TEST_CASE("normal incidence matches (1 - n) / (1 + n)")
{
    const Material m = dielectric(4.0, 0.0);
    CHECK(fresnel(0.0, m, Polarization::TE, f28).real() == Approx(-1.0 / 3.0));
    CHECK(std::abs(fresnel(0.0, m, Polarization::TM, f28)) == Approx(1.0 / 3.0));
}

TEST_CASE("grazing incidence tends to total reflection")
{
    for (const Material &m : {materials::layered_drywall(), materials::concrete(), materials::ceiling_board()})
        for (auto pol : {Polarization::TE, Polarization::TM})
            CHECK(std::abs(fresnel(0.5 * pi - 1e-7, m, pol, f28)) > 0.9999);
}

TEST_CASE("fresnel magnitude bounded and continuous")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> eps(1.0, 30.0), sigma(0.0, 20.0), theta(0.0, 0.5 * pi - 1e-3);
    for (int i = 0; i < 1000; ++i)
    {
        const Material m = dielectric(eps(rng), sigma(rng));
        const double t = theta(rng);
        for (auto pol : {Polarization::TE, Polarization::TM})
        {
            const Amplitude g = fresnel(t, m, pol, f28);
            CHECK(std::abs(g) <= 1.0);
            CHECK(std::abs(fresnel(t + 1e-8, m, pol, f28) - g) < 1e-5);
        }
    }
}

TEST_CASE("fresnel rejects angles outside [0, pi/2)")
{
    const Material m = materials::concrete();
    CHECK_THROWS_AS(fresnel(0.5 * pi, m, Polarization::TE, f28), std::domain_error);
    CHECK_THROWS_AS(fresnel(-0.01, m, Polarization::TM, f28), std::domain_error);
}

TEST_CASE("antenna pattern")
{
    const AntennaSpec a = horn();
    CHECK(antenna_gain_dbi(a, {1, 0, 0}) == Approx(17.0));
    SECTION("E plane")
    {
        CHECK(antenna_gain_dbi(a, elevated(13.0)) == Approx(17.0 - 3.0103).margin(1e-3));
        CHECK(antenna_gain_dbi(a, elevated(26.0)) == Approx(17.0 - 12.0412).margin(1e-3));
        CHECK(antenna_gain_dbi(a, elevated(-13.0)) == Approx(antenna_gain_dbi(a, elevated(13.0))));
    }
    SECTION("H plane")
    {
        CHECK(antenna_gain_dbi(a, azimuthal(12.0)) == Approx(17.0 - 3.0103).margin(1e-3));
        CHECK(antenna_gain_dbi(a, azimuthal(-7.0)) == Approx(antenna_gain_dbi(a, azimuthal(7.0))));
    }
    SECTION("back lobe floor")
    {
        CHECK(antenna_gain_dbi(a, {-1, 0, 0}) == Approx(17.0 - 40.0));
    }
    SECTION("boresight is the maximum")
    {
        std::mt19937_64 rng(9);
        const double g0 = antenna_gain(a, {1, 0, 0});
        for (int i = 0; i < 1000; ++i)
            CHECK(antenna_gain(a, testing::random_unit(rng)) <= g0);
    }
}

TEST_CASE("free-space spreading")
{
    CHECK(free_space_path_loss_db(10.0, lambda28) == Approx(81.39).margin(0.01));
    const double oracle = 20.0 * std::log10(4.0 * 3.141592653589793 * 10.0 * 28e9 / 299792458.0);
    CHECK(free_space_path_loss_db(10.0, lambda28) == Approx(oracle).epsilon(1e-14));
    CHECK(std::abs(spreading_and_phase(lambda28 / (4.0 * pi), lambda28)) == Approx(1.0));
    const double ratio = std::abs(spreading_and_phase(20.0, lambda28)) / std::abs(spreading_and_phase(10.0, lambda28));
    CHECK(20.0 * std::log10(ratio) == Approx(-6.0206).margin(1e-4));
    CHECK(-20.0 * std::log10(std::abs(spreading_and_phase(10.0, lambda28))) ==
          Approx(free_space_path_loss_db(10.0, lambda28)));
    const double d = 3.217;
    const Amplitude a = spreading_and_phase(d, lambda28);
    const Amplitude expected = std::polar(1.0, -2.0 * pi * d / lambda28);
    CHECK(std::abs(a / std::abs(a) - expected) < 1e-9);
    CHECK_THROWS(spreading_and_phase(0.0, lambda28));
    CHECK_THROWS(spreading_and_phase(-1.0, lambda28));
}

TEST_CASE("radar cross sections of the reflector set")
{
    const double lambda = 0.0107069;
    Reflector r;
    SECTION("sphere")
    {
        r.shape = Sphere{13 * inch};
        const double s = rcs(r, {1, 0, 0}, {-1, 0, 0}, lambda).sigma;
        CHECK(db10(s) == Approx(db10(0.3425)).margin(0.1));
        CHECK(rcs(r, {1, 0, 0}, {0, 1, 0}, lambda).sigma == Approx(s));
    }
    SECTION("plate at normal incidence")
    {
        r.shape = FlatPlate{24 * inch, 24 * inch, {-1, 0, 0}};
        const double s = rcs(r, {1, 0, 0}, {-1, 0, 0}, lambda).sigma;
        CHECK(db10(s) == Approx(41.8).margin(0.1));
        CHECK(s == Approx(1.514e4).epsilon(2e-3));
    }
    SECTION("cylinder at broadside")
    {
        r.shape = Cylinder{4.5 * inch, 18 * inch, {0, 0, 1}};
        const double s = rcs(r, {1, 0, 0}, {-1, 0, 0}, lambda).sigma;
        CHECK(db10(s) == Approx(db10(14.02)).margin(0.1));
    }
    SECTION("regime warning")
    {
        r.shape = Sphere{0.01};
        CHECK(rcs(r, {1, 0, 0}, {-1, 0, 0}, lambda).regime_warning);
    }
}

TEST_CASE("plate RCS peaks in the specular direction and is never negative")
{
    const double lambda = lambda28;
    Reflector r;
    const Vec3 n = normalized(Vec3{-1, 1, 0});
    r.shape = FlatPlate{24 * inch, 24 * inch, n};
    const Vec3 inc{1, 0, 0};
    const Vec3 spec = inc - 2.0 * dot(inc, n) * n;
    const double peak = rcs(r, inc, spec, lambda).sigma;
    std::mt19937_64 rng(21);
    for (int i = 0; i < 2000; ++i)
    {
        const double s = rcs(r, inc, testing::random_unit(rng), lambda).sigma;
        CHECK(s >= 0.0);
        CHECK(s <= peak * (1 + 1e-12));
    }
    Reflector c;
    c.shape = Cylinder{4.5 * inch, 18 * inch, {0, 0, 1}};
    Reflector sp;
    sp.shape = Sphere{13 * inch};
    for (int i = 0; i < 500; ++i)
    {
        const Vec3 a = testing::random_unit(rng), b = testing::random_unit(rng);
        CHECK(rcs(c, a, b, lambda).sigma >= 0.0);
        CHECK(rcs(sp, a, b, lambda).sigma >= 0.0);
    }
}

TEST_CASE("directive lobe shape")
{
    CHECK(directive_lobe(0.0, 4) == 1.0);
    CHECK(directive_lobe(pi, 4) == Approx(0.0).margin(1e-30));
    CHECK(directive_lobe(pi / 3, 4) < directive_lobe(pi / 6, 4));
    Material m = materials::layered_drywall();
    m.scatter_coeff = 0.0;
    CHECK(std::abs(directive_scatter(0.01, 0.3, 0.1, m, 2.0, 3.0, lambda28)) == 0.0);
}

TEST_CASE("directive normalization matches an independent quadrature")
{
    for (int alpha : {1, 2, 4, 8, 20})
    {
        // Midpoint rule over polar angle at normal incidence, where psi equals the polar angle.
        const int n = 200000;
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
        {
            const double t = (i + 0.5) * (0.5 * pi / n);
            sum += std::pow(0.5 * (1.0 + std::cos(t)), alpha) * 2.0 * pi * std::sin(t);
        }
        sum *= 0.5 * pi / n;
        CHECK(sum / directive_normalization(alpha) == Approx(1.0).margin(1e-3));
        const double closed = 4.0 * pi / (alpha + 1) * (1.0 - std::pow(2.0, -(alpha + 1)));
        CHECK(directive_normalization(alpha) == Approx(closed).epsilon(1e-9));
    }
}

TEST_CASE("diffuse energy from a tiled surface stays below S^2 of the incident power")
{
    // Scattered power from each tile integrated over the observer hemisphere, compared with the
    // power the tile intercepts. Observer at radius R in the far field of the tile.
    const double lambda = lambda28;
    const Material m = materials::layered_drywall();
    const double s2 = m.scatter_coeff * m.scatter_coeff;
    const Surface floor = Surface::make({-2, -2, 0}, {4, 0, 0}, {0, 4, 0}, 0);
    const auto tiles = generate_tiles(floor, 0.5);
    const Vec3 tx{0.3, -0.2, 1.0};
    const double R = 100.0;
    const int nt = 180, np = 360;
    double scattered = 0.0, intercepted = 0.0;
    for (const Tile &tile : tiles)
    {
        const Vec3 inc = tile.center - tx;
        const double ri = norm(inc);
        const Vec3 k = inc / ri;
        const double cos_i = -dot(k, floor.normal);
        const double theta_i = std::acos(cos_i);
        const Vec3 spec = k - 2.0 * dot(k, floor.normal) * floor.normal;
        intercepted += tile.area * cos_i / (4.0 * pi * ri * ri);
        double tile_sum = 0.0;
        for (int a = 0; a < nt; ++a)
        {
            const double t = (a + 0.5) * (0.5 * pi / nt);
            for (int b = 0; b < np; ++b)
            {
                const double p = (b + 0.5) * (2.0 * pi / np);
                const Vec3 dir{std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)};
                const double psi = angle_between(dir, spec);
                const double amp = std::abs(directive_scatter(tile.area, theta_i, psi, m, ri, R, lambda));
                tile_sum += amp * amp * std::sin(t);
            }
        }
        // |a|^2 is received power over an isotropic aperture lambda^2 / 4 pi; flux through R^2 dOmega.
        scattered += tile_sum * (0.5 * pi / nt) * (2.0 * pi / np) * R * R * 4.0 * pi / (lambda * lambda);
    }
    CHECK(scattered <= s2 * intercepted * 1.02);
    CHECK(scattered >= 0.5 * s2 * intercepted);

    // A single tile under normal incidence returns exactly S^2 of its share.
    const double ri = 2.0, area = 0.01;
    double sum = 0.0;
    for (int a = 0; a < nt; ++a)
    {
        const double t = (a + 0.5) * (0.5 * pi / nt);
        const double amp = std::abs(directive_scatter(area, 0.0, t, m, ri, R, lambda));
        sum += amp * amp * 2.0 * pi * std::sin(t);
    }
    sum *= (0.5 * pi / nt) * R * R * 4.0 * pi / (lambda * lambda);
    CHECK(sum / (s2 * area / (4.0 * pi * ri * ri)) == Approx(1.0).margin(0.02));
}
