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
#include <stdexcept>
#include <string>

#include "rtcov/sweep.hpp"

namespace rtcov
{

class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Malformed coverage or CDF file.
class FormatError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Shortest decimal form that parses back to the same double.
std::string format_number(double v);

std::string read_file(const std::filesystem::path &path);

// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path &path, const std::string &content);

// CSV with header "x_m,y_m,power_dbm"; one row per grid point, x varying fastest.
std::string coverage_csv(const CoverageMap &map);
CoverageMap parse_coverage_csv(const std::string &text);
CoverageMap read_coverage_csv(const std::filesystem::path &path);

// CSV with header "power_dbm,prob".
std::string cdf_csv(const Cdf &cdf);
Cdf parse_cdf_csv(const std::string &text);

struct HeatmapRange
{
    double lo_dbm = -120.0;
    double hi_dbm = -40.0;
};

// Binary PGM (P5), one pixel per grid point; the first image row is the last grid row (+y up).
// Power maps linearly from [lo_dbm, hi_dbm] to [0, 255]; values outside are clipped and counted.
std::string heatmap_pgm(const CoverageMap &map, const HeatmapRange &range, std::size_t *clipped = nullptr);

// JSON sidecar describing a coverage run.
std::string metadata_json(const CoverageMap &map, const std::string &label, const HeatmapRange &range,
                          std::size_t clipped, unsigned workers);

} // namespace rtcov
