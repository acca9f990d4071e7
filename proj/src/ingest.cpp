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

#include "yieldmap/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>

#include "yieldmap/errors.hpp"
#include "yieldmap/io.hpp"

namespace yieldmap {

namespace {

std::vector<std::string_view> split_line(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    for (std::string_view& cell : out) {
        while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\r')) {
            cell.remove_prefix(1);
        }
        while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\r')) {
            cell.remove_suffix(1);
        }
    }
    return out;
}

double parse_cell(std::string_view cell, std::size_t line_no, std::string_view column) {
    double v = 0.0;
    auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
        throw DataError("line " + std::to_string(line_no) + ": cannot parse '" +
                        std::string(cell) + "' in column '" + std::string(column) + "'");
    }
    if (!std::isfinite(v)) {
        throw DataError("line " + std::to_string(line_no) + ": non-finite value in column '" +
                        std::string(column) + "'");
    }
    return v;
}

std::size_t find_column(const std::vector<std::string_view>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    throw ConfigError("required column '" + name + "' not found in header");
}

} // namespace

std::vector<MonitorRecord> parse_records(std::string_view text, const ColumnSchema& schema) {
    if (schema.xy_multiplier <= 0.0 || schema.swath_multiplier <= 0.0 ||
        schema.mass_multiplier <= 0.0) {
        throw ConfigError("unit multipliers must be positive");
    }

    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t pos = text.find('\n', start);
        if (pos == std::string_view::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
    while (!lines.empty() && lines.back().find_first_not_of(" \r\t") == std::string_view::npos) {
        lines.pop_back();
    }
    if (lines.empty()) {
        throw DataError("input is empty");
    }

    const char delim = lines[0].find('\t') != std::string_view::npos ? '\t' : ',';
    const std::vector<std::string_view> header = split_line(lines[0], delim);
    const std::size_t it = find_column(header, schema.time_column);
    const std::size_t ix = find_column(header, schema.x_column);
    const std::size_t iy = find_column(header, schema.y_column);
    const std::size_t iw = find_column(header, schema.swath_column);
    const std::size_t im = find_column(header, schema.mass_column);

    struct RawRecord {
        double time;
        MonitorRecord rec;
    };
    std::vector<RawRecord> raw;
    raw.reserve(lines.size() - 1);
    std::optional<double> last_w;

    for (std::size_t li = 1; li < lines.size(); ++li) {
        const std::size_t line_no = li + 1;
        if (lines[li].find_first_not_of(" \r\t") == std::string_view::npos) {
            continue;
        }
        const std::vector<std::string_view> cells = split_line(lines[li], delim);
        const std::size_t needed = std::max({it, ix, iy, iw, im});
        if (cells.size() <= needed) {
            throw DataError("line " + std::to_string(line_no) + ": expected at least " +
                            std::to_string(needed + 1) + " columns, found " +
                            std::to_string(cells.size()));
        }

        RawRecord r;
        r.time = parse_cell(cells[it], line_no, schema.time_column);
        r.rec.x = parse_cell(cells[ix], line_no, schema.x_column) * schema.xy_multiplier;
        r.rec.y = parse_cell(cells[iy], line_no, schema.y_column) * schema.xy_multiplier;
        if (cells[iw].empty()) {
            if (!last_w) {
                throw DataError("line " + std::to_string(line_no) +
                                ": swath width missing with no earlier value to carry forward");
            }
            r.rec.w = *last_w;
        } else {
            r.rec.w = parse_cell(cells[iw], line_no, schema.swath_column) * schema.swath_multiplier;
            last_w = r.rec.w;
        }
        r.rec.m = parse_cell(cells[im], line_no, schema.mass_column) * schema.mass_multiplier;

        if (r.rec.w <= 0.0) {
            throw DataError("line " + std::to_string(line_no) + ": swath half-width must be > 0");
        }
        if (r.rec.m < 0.0) {
            throw DataError("line " + std::to_string(line_no) + ": mass must be >= 0");
        }
        raw.push_back(r);
    }

    if (raw.size() < 2) {
        throw DataError("need at least 2 records, found " + std::to_string(raw.size()));
    }

    std::stable_sort(raw.begin(), raw.end(),
                     [](const RawRecord& a, const RawRecord& b) { return a.time < b.time; });
    for (std::size_t i = 0; i + 1 < raw.size(); ++i) {
        if (raw[i].time == raw[i + 1].time) {
            throw DataError("duplicate time value " + format_double(raw[i].time));
        }
    }

    // The geometry assumes a Euclidean plane in meters. A dataset whose
    // coordinates all fit in [-180, 180] x [-90, 90] AND span less than one
    // unit is almost certainly lon/lat: a field in degrees is a small
    // fraction of a degree across, while meter-unit data of that extent
    // would be a sub-meter field, equally unusable.
    double min_x = raw.front().rec.x, max_x = min_x;
    double min_y = raw.front().rec.y, max_y = min_y;
    bool within_degree_range = true;
    for (const RawRecord& r : raw) {
        min_x = std::min(min_x, r.rec.x);
        max_x = std::max(max_x, r.rec.x);
        min_y = std::min(min_y, r.rec.y);
        max_y = std::max(max_y, r.rec.y);
        if (std::abs(r.rec.x) > 180.0 || std::abs(r.rec.y) > 90.0) {
            within_degree_range = false;
        }
    }
    if (within_degree_range && (max_x - min_x) < 1.0 && (max_y - min_y) < 1.0) {
        throw DataError(
            "coordinates look like longitude/latitude degrees; project them to a metric "
            "CRS (for example UTM) before running");
    }

    std::vector<MonitorRecord> out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        MonitorRecord rec = raw[i].rec;
        rec.t = static_cast<long long>(i);
        out.push_back(rec);
    }
    return out;
}

std::vector<std::string> validate_geometry_feasibility(const std::vector<MonitorRecord>& records,
                                                       const FeasibilityBounds& bounds) {
    std::vector<std::string> warnings;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const MonitorRecord& r = records[i];
        if (i > 0) {
            const double dx = r.x - records[i - 1].x;
            const double dy = r.y - records[i - 1].y;
            const double disp = std::hypot(dx, dy);
            if (disp < bounds.min_displacement) {
                warnings.push_back("t=" + std::to_string(r.t) + ": displacement " +
                                   format_double(disp) + " m below " +
                                   format_double(bounds.min_displacement) + " m (stationary)");
            }
        }
        if (r.w < bounds.swath_min || r.w > bounds.swath_max) {
            warnings.push_back("t=" + std::to_string(r.t) + ": swath half-width " +
                               format_double(r.w) + " m outside [" +
                               format_double(bounds.swath_min) + ", " +
                               format_double(bounds.swath_max) + "]");
        }
        if (r.m > bounds.mass_max) {
            warnings.push_back("t=" + std::to_string(r.t) + ": mass " + format_double(r.m) +
                               " kg above " + format_double(bounds.mass_max) + " kg");
        }
    }
    return warnings;
}

} // namespace yieldmap
