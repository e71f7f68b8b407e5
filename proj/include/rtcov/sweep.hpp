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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rtcov/link.hpp"
#include "rtcov/scene.hpp"
#include "rtcov/tracer.hpp"

namespace rtcov
{

class GridMismatch : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct CoverageMetadata
{
    std::uint64_t scene_hash = 0;
    std::string reflector_kind = "none";
    double tilt_deg = 0.0;
    std::string timestamp; // ISO 8601, UTC
    std::uint64_t seed = 0;
    int max_order = 0;
    double tile_size = 0.0;
    std::size_t sentinel_count = 0;     // points at no_signal_dbm
    std::size_t unmeasurable_count = 0; // points beyond the 185 dB path-loss limit
    bool regime_warning = false;
};

// Received power per grid point. Row index = y index, column index = x index.
struct CoverageMap
{
    std::vector<double> xs, ys; // grid coordinates [m]
    double rx_height = 0.0;
    std::vector<double> power_dbm; // ys.size() * xs.size(), row-major
    CoverageMetadata metadata;

    std::size_t nx() const { return xs.size(); }
    std::size_t ny() const { return ys.size(); }
    double at(std::size_t iy, std::size_t ix) const { return power_dbm[iy * nx() + ix]; }
    double &at(std::size_t iy, std::size_t ix) { return power_dbm[iy * nx() + ix]; }

    static CoverageMap empty_for(const ReceiverGrid &grid);
    void validate() const;
};

bool same_grid(const CoverageMap &a, const CoverageMap &b);

// Worker count from RTCOV_WORKERS, else the available hardware parallelism.
unsigned default_worker_count();

std::uint64_t scene_hash(const Scene &scene, const ReceiverGrid &grid, const TraceOptions &options);

// Link result for every grid point. Deterministic for fixed inputs regardless of `workers`
// (0 = default_worker_count()).
CoverageMap run_grid(const Scene &scene, const ReceiverGrid &grid, const TraceOptions &options, unsigned workers = 0);

// Traces one receiver position with the grid's antenna and orientation policy.
LinkResult simulate_point(const Tracer &tracer, const Scene &scene, const Vec3 &rx, const AntennaSpec &rx_antenna,
                          RxOrientation policy, std::vector<PropagationPath> *paths_out = nullptr);

struct Cdf
{
    std::vector<double> values; // ascending dBm
    std::vector<double> probs;  // (i + 1) / n
};

Cdf cdf(std::span<const double> values);
Cdf cdf(const CoverageMap &map);

// Linear-interpolation quantile of the sorted sample, q in [0, 1].
double quantile(std::span<const double> values, double q);
double median(std::span<const double> values);

// median(a) - median(b) in dB; throws GridMismatch unless both maps share grid coordinates.
double median_gain(const CoverageMap &a, const CoverageMap &b);

struct Uniformity
{
    double std_db = 0.0;   // population standard deviation of dBm values
    std::size_t used = 0;
    std::size_t excluded = 0; // no-signal points left out
};

Uniformity uniformity(std::span<const double> values);
Uniformity uniformity(const CoverageMap &map);

// Rows whose y coordinate lies within `length` meters of the first row.
CoverageMap leading_rows(const CoverageMap &map, double length);

struct LobeStats
{
    std::size_t cells = 0;       // cells in the top fraction
    std::size_t components = 0;  // 4-connected components among them
    double centroid_azimuth = 0; // circular mean azimuth of the cells as seen from `apex` [rad]
};

// Picks the strongest ceil(fraction * N) cells and describes their shape relative to `apex`.
LobeStats top_cells_lobe(const CoverageMap &map, double fraction, const Vec3 &apex);

} // namespace rtcov
