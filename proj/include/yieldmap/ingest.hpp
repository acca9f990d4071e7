// Copyright (c) 2026 The yieldmap authors.
//
// This software is licensed under the Apache License, Version 2.0 (the "License").
// You may not use this file except in compliance with the License. You may
// obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0.
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace yieldmap {

// One harvester logging cycle. t is the cycle ordinal assigned after sorting
// by the source time column; x/y are planar metric coordinates; w is the
// swath half-width; m the mass harvested over the cycle.
struct MonitorRecord {
    long long t = 0;
    double x = 0.0;
    double y = 0.0;
    double w = 0.0; // meters, half-width, > 0
    double m = 0.0; // kilograms, >= 0
};

// Maps source columns to record fields. Multipliers convert source units to
// meters and kilograms; swath_multiplier 0.5 turns a full-width column into
// the half-width the geometry uses.
struct ColumnSchema {
    std::string time_column = "t";
    std::string x_column = "x";
    std::string y_column = "y";
    std::string swath_column = "w";
    std::string mass_column = "m";
    double xy_multiplier = 1.0;
    double swath_multiplier = 1.0;
    double mass_multiplier = 1.0;
};

// Soft plausibility bounds; out-of-range values draw warnings, never edits.
struct FeasibilityBounds {
    double min_displacement = 0.01; // meters; below this a pair is "stationary"
    double swath_min = 0.05;
    double swath_max = 30.0;
    double mass_max = 10000.0;
};

// Parses delimited text (comma or tab, decided by the header line) into
// records sorted by source time and re-indexed t = 0..n-1.
// Throws ConfigError for schema problems, DataError for malformed rows,
// duplicate times, lon/lat-looking coordinates, or fewer than 2 records.
std::vector<MonitorRecord> parse_records(std::string_view text, const ColumnSchema& schema);

// Scans consecutive pairs and value ranges; returns human-readable warnings.
// Validation never mutates or deletes records.
std::vector<std::string> validate_geometry_feasibility(const std::vector<MonitorRecord>& records,
                                                       const FeasibilityBounds& bounds = {});

} // namespace yieldmap
