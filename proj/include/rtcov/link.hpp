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
#include <span>
#include <vector>

#include "rtcov/tracer.hpp"

namespace rtcov
{

// Received power of a link with no energy (no paths, or a perfect null). Used in memory and in files.
inline constexpr double no_signal_dbm = -400.0;

inline bool is_no_signal(double dbm) { return dbm <= no_signal_dbm; }

// Largest path loss the channel sounder can measure.
inline constexpr double max_measurable_path_loss_db = 185.0;

struct LinkResult
{
    double rx_power_dbm = no_signal_dbm;
    std::size_t path_count = 0;
    std::optional<std::size_t> strongest_path; // index into the input list
    bool measurable = false;                   // tx_power - rx_power <= 185 dB
};

// Coherent sum of path amplitudes. Paths are summed in path_order_less order, so any permutation of
// the input gives a bit-identical result.
LinkResult coherent_power(std::span<const PropagationPath> paths, double tx_power_dbm);

// Sounder defaults: 0.65 ns delay bins over a 1.33 us excess-delay window.
inline constexpr double default_bin_width = 0.65e-9;
inline constexpr double default_max_excess_delay = 1.33e-6;

struct ChannelImpulseResponse
{
    double bin_width = default_bin_width;
    double max_excess_delay = default_max_excess_delay;
    double first_arrival = 0.0; // absolute delay of bin 0 [s]
    std::vector<Amplitude> taps;
    std::size_t dropped = 0; // paths beyond max_excess_delay

    double energy() const;
};

std::size_t tap_count(double bin_width, double max_excess_delay);

// Bins paths by excess delay over the first arrival: bin = floor(excess / bin_width).
ChannelImpulseResponse bin_cir(std::span<const PropagationPath> paths, double bin_width = default_bin_width,
                               double max_excess_delay = default_max_excess_delay);

} // namespace rtcov
