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

#include "rtcov/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <mutex>
#include <thread>

namespace rtcov
{

namespace
{
// FNV-1a over the bit patterns of the inputs.
class Fingerprint
{
public:
    void add(std::uint64_t v)
    {
        for (int i = 0; i < 8; ++i)
        {
            h_ ^= (v >> (8 * i)) & 0xffu;
            h_ *= 0x100000001b3ull;
        }
    }
    void add(double v) { add(std::bit_cast<std::uint64_t>(v)); }
    void add(const Vec3 &v) { add(v.x), add(v.y), add(v.z); }
    void add(const std::string &s)
    {
        add(static_cast<std::uint64_t>(s.size()));
        for (unsigned char c : s)
        {
            h_ ^= c;
            h_ *= 0x100000001b3ull;
        }
    }
    void add(const AntennaSpec &a) { add(a.boresight), add(a.gain_dbi), add(a.hpbw_e_deg), add(a.hpbw_h_deg); }
    std::uint64_t value() const { return h_; }

private:
    std::uint64_t h_ = 0xcbf29ce484222325ull;
};

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<double> sorted_copy(std::span<const double> values)
{
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    return v;
}
} // namespace

CoverageMap CoverageMap::empty_for(const ReceiverGrid &grid)
{
    CoverageMap m;
    for (std::size_t ix = 0; ix < grid.nx(); ++ix)
        m.xs.push_back(grid.point(ix, 0).x);
    for (std::size_t iy = 0; iy < grid.ny(); ++iy)
        m.ys.push_back(grid.point(0, iy).y);
    m.rx_height = grid.rx_height;
    m.power_dbm.assign(m.xs.size() * m.ys.size(), no_signal_dbm);
    return m;
}

void CoverageMap::validate() const
{
    if (xs.empty() || ys.empty() || power_dbm.size() != xs.size() * ys.size())
        throw GridMismatch("coverage map dimensions do not match its grid");
    for (double p : power_dbm)
        if (!std::isfinite(p))
            throw std::invalid_argument("coverage map holds a non-finite power");
}

bool same_grid(const CoverageMap &a, const CoverageMap &b)
{
    auto close = [](const std::vector<double> &u, const std::vector<double> &v)
    {
        if (u.size() != v.size())
            return false;
        for (std::size_t i = 0; i < u.size(); ++i)
            if (std::abs(u[i] - v[i]) > 1e-9)
                return false;
        return true;
    };
    return close(a.xs, b.xs) && close(a.ys, b.ys);
}

unsigned default_worker_count()
{
    if (const char *env = std::getenv("RTCOV_WORKERS"))
    {
        char *end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0)
            return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::uint64_t scene_hash(const Scene &scene, const ReceiverGrid &grid, const TraceOptions &options)
{
    Fingerprint f;
    f.add(scene.frequency_hz), f.add(scene.tx_power_dbm), f.add(scene.tx_position), f.add(scene.tx_antenna);
    for (const Material &m : scene.materials)
    {
        f.add(m.name), f.add(static_cast<std::uint64_t>(m.perfect_conductor));
        f.add(m.rel_permittivity), f.add(m.conductivity), f.add(m.scatter_coeff);
        f.add(static_cast<std::uint64_t>(m.scatter_exponent));
    }
    for (const Surface &s : scene.surfaces)
        f.add(s.origin), f.add(s.edge_u), f.add(s.edge_v), f.add(static_cast<std::uint64_t>(s.material));
    if (scene.reflector)
    {
        const Reflector &r = *scene.reflector;
        f.add(to_string(r.kind())), f.add(r.center), f.add(static_cast<std::uint64_t>(r.material)), f.add(r.tilt);
        std::visit(
            [&](const auto &s)
            {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, FlatPlate>)
                    f.add(s.width), f.add(s.height), f.add(s.normal);
                else if constexpr (std::is_same_v<T, Cylinder>)
                    f.add(s.radius), f.add(s.height), f.add(s.axis);
                else
                    f.add(s.radius);
            },
            r.shape);
    }
    f.add(grid.origin), f.add(grid.x_extent), f.add(grid.y_extent), f.add(grid.spacing), f.add(grid.rx_height);
    f.add(grid.rx_antenna);
    f.add(static_cast<std::uint64_t>(options.max_order)), f.add(options.tile_size);
    f.add(static_cast<std::uint64_t>(options.diffuse)), f.add(options.seed);
    f.add(static_cast<std::uint64_t>(options.rx_orientation));
    return f.value();
}

LinkResult simulate_point(const Tracer &tracer, const Scene &scene, const Vec3 &rx, const AntennaSpec &rx_antenna,
                          RxOrientation policy, std::vector<PropagationPath> *paths_out)
{
    std::vector<PropagationPath> paths = tracer.trace(rx);
    AntennaSpec antenna = rx_antenna;
    if (policy == RxOrientation::strongest_path && !paths.empty())
    {
        std::size_t best = 0;
        for (std::size_t i = 1; i < paths.size(); ++i)
            if (std::abs(paths[i].amplitude) > std::abs(paths[best].amplitude))
                best = i;
        antenna.boresight = -paths[best].arrival_dir;
    }
    apply_rx_antenna(paths, antenna);
    LinkResult result = coherent_power(paths, scene.tx_power_dbm);
    if (paths_out)
        *paths_out = std::move(paths);
    return result;
}

CoverageMap run_grid(const Scene &scene, const ReceiverGrid &grid, const TraceOptions &options, unsigned workers)
{
    scene.validate();
    grid.validate();
    options.validate();

    CoverageMap map = CoverageMap::empty_for(grid);
    const Tracer tracer(scene, scene.tx_position, options);
    const std::size_t nx = grid.nx(), total = grid.size();

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&]
    {
        try
        {
            for (std::size_t i = next++; i < total; i = next++)
            {
                const Vec3 rx = grid.point(i % nx, i / nx);
                map.power_dbm[i] =
                    simulate_point(tracer, scene, rx, grid.rx_antenna, options.rx_orientation).rx_power_dbm;
            }
        }
        catch (...)
        {
            std::lock_guard lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
            next = total;
        }
    };

    if (workers == 0)
        workers = default_worker_count();
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
    if (workers <= 1)
        work();
    else
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work);
    }
    if (failure)
        std::rethrow_exception(failure);

    CoverageMetadata &meta = map.metadata;
    meta.scene_hash = scene_hash(scene, grid, options);
    meta.timestamp = utc_timestamp();
    meta.seed = options.seed;
    meta.max_order = options.max_order;
    meta.tile_size = options.tile_size;
    if (scene.reflector)
    {
        meta.reflector_kind = to_string(scene.reflector->kind());
        meta.tilt_deg = rad2deg(scene.reflector->tilt);
        meta.regime_warning = regime_warning(*scene.reflector, scene.wavelength());
    }
    for (double p : map.power_dbm)
    {
        meta.sentinel_count += is_no_signal(p);
        meta.unmeasurable_count += is_no_signal(p) || scene.tx_power_dbm - p > max_measurable_path_loss_db;
    }
    return map;
}

Cdf cdf(std::span<const double> values)
{
    if (values.empty())
        throw std::invalid_argument("cdf: empty sample");
    Cdf out;
    out.values = sorted_copy(values);
    const double n = static_cast<double>(out.values.size());
    out.probs.resize(out.values.size());
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.probs[i] = static_cast<double>(i + 1) / n;
    return out;
}

Cdf cdf(const CoverageMap &map) { return cdf(map.power_dbm); }

double quantile(std::span<const double> values, double q)
{
    if (values.empty())
        throw std::invalid_argument("quantile: empty sample");
    const std::vector<double> v = sorted_copy(values);
    const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return frac == 0.0 ? v[lo] : v[lo] + frac * (v[hi] - v[lo]);
}

double median(std::span<const double> values) { return quantile(values, 0.5); }

double median_gain(const CoverageMap &a, const CoverageMap &b)
{
    if (!same_grid(a, b))
        throw GridMismatch("median_gain: coverage maps use different grids");
    return median(a.power_dbm) - median(b.power_dbm);
}

Uniformity uniformity(std::span<const double> values)
{
    Uniformity u;
    double sum = 0.0;
    for (double v : values)
    {
        if (is_no_signal(v))
        {
            ++u.excluded;
            continue;
        }
        sum += v;
        ++u.used;
    }
    if (u.used == 0)
        return u;
    const double mean = sum / static_cast<double>(u.used);
    double ss = 0.0;
    for (double v : values)
        if (!is_no_signal(v))
            ss += (v - mean) * (v - mean);
    u.std_db = std::sqrt(ss / static_cast<double>(u.used));
    return u;
}

Uniformity uniformity(const CoverageMap &map) { return uniformity(map.power_dbm); }

CoverageMap leading_rows(const CoverageMap &map, double length)
{
    CoverageMap out;
    out.xs = map.xs;
    out.rx_height = map.rx_height;
    out.metadata = map.metadata;
    for (std::size_t iy = 0; iy < map.ny(); ++iy)
    {
        if (map.ys[iy] - map.ys.front() > length + 1e-9)
            break;
        out.ys.push_back(map.ys[iy]);
        for (std::size_t ix = 0; ix < map.nx(); ++ix)
            out.power_dbm.push_back(map.at(iy, ix));
    }
    return out;
}

LobeStats top_cells_lobe(const CoverageMap &map, double fraction, const Vec3 &apex)
{
    const std::size_t n = map.power_dbm.size();
    LobeStats stats;
    stats.cells = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(fraction * n - 1e-9)), 1, n);

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return map.power_dbm[a] > map.power_dbm[b]; });
    std::vector<char> selected(n, 0);
    double cx = 0.0, cy = 0.0;
    for (std::size_t k = 0; k < stats.cells; ++k)
    {
        const std::size_t i = order[k];
        selected[i] = 1;
        const double dx = map.xs[i % map.nx()] - apex.x, dy = map.ys[i / map.nx()] - apex.y;
        const double r = std::hypot(dx, dy);
        if (r > 0.0)
            cx += dx / r, cy += dy / r;
    }
    stats.centroid_azimuth = std::atan2(cy, cx);

    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < n; ++start)
    {
        if (!selected[start] || seen[start])
            continue;
        ++stats.components;
        stack.push_back(start);
        seen[start] = 1;
        while (!stack.empty())
        {
            const std::size_t i = stack.back();
            stack.pop_back();
            const std::size_t ix = i % map.nx(), iy = i / map.nx();
            auto visit = [&](std::size_t j)
            {
                if (selected[j] && !seen[j])
                {
                    seen[j] = 1;
                    stack.push_back(j);
                }
            };
            if (ix > 0)
                visit(i - 1);
            if (ix + 1 < map.nx())
                visit(i + 1);
            if (iy > 0)
                visit(i - map.nx());
            if (iy + 1 < map.ny())
                visit(i + map.nx());
        }
    }
    return stats;
}

} // namespace rtcov
