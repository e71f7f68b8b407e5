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

#include <filesystem>
#include <optional>
#include <string>

#include "rtcov/scene.hpp"
#include "rtcov/tracer.hpp"

namespace rtcov
{

// Everything a simulation run needs. `corridor` is kept so variants can rebuild the scene.
struct SimulationConfig
{
    CorridorParams corridor;
    Scene scene;
    ReceiverGrid grid;
    TraceOptions trace;
};

// Parses and validates a JSON configuration:
//   scene{frequency_hz, tx{position, power_dbm, antenna{gain_dbi, hpbw_e_deg, hpbw_h_deg, boresight}}}
//   corridor{main_width, side_width, side_length, height, tx_to_reflector, behind_tx, tx_height,
//            door{width, height, offset}}
//   materials[{name, perfect_conductor, eps_r, sigma, scatter_coeff, scatter_exponent}]
//   reflector{kind, dims{width, height | radius, height, axis | radius}, center, tilt_deg, material}
//   grid{origin, x_extent, y_extent, spacing, height, antenna{...}}
//   trace{max_order, tile_size, seed, diffuse, rx_orientation}
// Every section is optional. Lengths in meters, angles in degrees. Throws ConfigError.
SimulationConfig parse_config(const std::string &text);
SimulationConfig load_scene(const std::filesystem::path &path);

// Same configuration with another reflector (nullopt removes it).
SimulationConfig with_reflector(const SimulationConfig &config, const std::optional<ReflectorSpec> &reflector);

} // namespace rtcov
