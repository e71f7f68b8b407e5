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

#include "rtcov/link.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rtcov
{

namespace
{
std::vector<std::size_t> summation_order(std::span<const PropagationPath> paths)
{
    std::vector<std::size_t> order(paths.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return path_order_less(paths[a], paths[b]); });
    return order;
}
} // namespace

LinkResult coherent_power(std::span<const PropagationPath> paths, double tx_power_dbm)
{
    LinkResult out;
    out.path_count = paths.size();
    Amplitude sum{0.0, 0.0};
    double best = -1.0;
    for (std::size_t i : summation_order(paths))
    {
        const Amplitude a = paths[i].amplitude;
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw std::invalid_argument("coherent_power: non-finite path amplitude");
        sum += a;
        if (std::abs(a) > best)
        {
            best = std::abs(a);
            out.strongest_path = i;
        }
    }
    const double mag = std::abs(sum);
    out.rx_power_dbm = mag > 0.0 ? std::max(tx_power_dbm + 20.0 * std::log10(mag), no_signal_dbm) : no_signal_dbm;
    out.measurable = !is_no_signal(out.rx_power_dbm) &&
                     tx_power_dbm - out.rx_power_dbm <= max_measurable_path_loss_db;
    return out;
}

double ChannelImpulseResponse::energy() const
{
    double e = 0.0;
    for (const auto &t : taps)
        e += std::norm(t);
    return e;
}

std::size_t tap_count(double bin_width, double max_excess_delay)
{
    return static_cast<std::size_t>(std::ceil(max_excess_delay / bin_width));
}

ChannelImpulseResponse bin_cir(std::span<const PropagationPath> paths, double bin_width, double max_excess_delay)
{
    if (!(bin_width > 0.0) || !(max_excess_delay > 0.0))
        throw std::invalid_argument("bin_cir: bin width and window must be positive");
    ChannelImpulseResponse cir;
    cir.bin_width = bin_width;
    cir.max_excess_delay = max_excess_delay;
    cir.taps.assign(tap_count(bin_width, max_excess_delay), Amplitude{0.0, 0.0});
    if (paths.empty())
        return cir;

    cir.first_arrival = std::min_element(paths.begin(), paths.end(), [](const auto &a, const auto &b)
                                         { return a.delay < b.delay; })->delay;
    for (std::size_t i : summation_order(paths))
    {
        const double excess = paths[i].delay - cir.first_arrival;
        const auto bin = static_cast<std::size_t>(std::floor(excess / bin_width));
        if (excess > max_excess_delay || bin >= cir.taps.size())
        {
            ++cir.dropped;
            continue;
        }
        cir.taps[bin] += paths[i].amplitude;
    }
    return cir;
}

} // namespace rtcov
