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
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rtcov/scene.hpp"

namespace rtcov::cli
{

enum ExitCode : int
{
    exit_ok = 0,
    exit_config = 1,
    exit_io = 2,
    exit_grid_mismatch = 3,
    exit_usage = 64,
};

struct RunManifest
{
    std::filesystem::path config;
    std::filesystem::path out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<int> max_order;
    std::optional<double> tile_size;
    std::string label = "run";
    unsigned workers = 0; // 0: RTCOV_WORKERS or hardware concurrency
};

// Letters, digits, '.', '_', '-'; must not start with '.'.
bool is_safe_label(const std::string &label);

struct Variant
{
    std::string label;
    std::optional<ReflectorSpec> reflector;
};

// "none", "plate<inches>", "sphere", "cylinder". Throws ConfigError for anything else.
Variant parse_variant(const std::string &name);
std::vector<Variant> default_variants();

unsigned worker_count_from_env();

int cmd_sweep(const RunManifest &manifest, std::ostream &out, std::ostream &err);
int cmd_compare(const std::filesystem::path &a, const std::filesystem::path &b, const std::filesystem::path &out_dir,
                const std::string &label, std::ostream &out, std::ostream &err);
int cmd_scenarios(const RunManifest &manifest, const std::vector<std::string> &variants, std::ostream &out,
                  std::ostream &err);

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace rtcov::cli
