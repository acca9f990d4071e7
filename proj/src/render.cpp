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

#include "yieldmap/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <variant>

#include <json.hpp>

#include "yieldmap/errors.hpp"
#include "yieldmap/geometry.hpp"

namespace yieldmap {

namespace {

constexpr Rgb kBlank{255, 255, 255};
// Cells per image axis beyond which the raster is refused outright; a grid
// this large signals malformed geometry, not a plausible field.
constexpr std::size_t kMaxAxisCells = 20000;

struct Cell {
    std::size_t ix = 0;
    std::size_t iy = 0;
    double value = 0.0;
    bool painted = false;
};

std::uint8_t lerp_channel(std::uint8_t a, std::uint8_t b, double t) {
    return static_cast<std::uint8_t>(std::lround(static_cast<double>(a) +
                                                 t * (static_cast<double>(b) - a)));
}

std::string hex_color(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

// Index on a regular axis, rejecting cells that sit between grid lines.
std::size_t axis_index(double offset, double resolution) {
    const double f = offset / resolution;
    const double r = std::round(f);
    if (std::abs(f - r) > 1e-6 || r < 0.0) {
        throw DataError("render: cell does not sit on the common grid");
    }
    return static_cast<std::size_t>(r);
}

} // namespace

std::vector<Rgb> make_palette(std::size_t bins, Rgb light, Rgb dark) {
    std::vector<Rgb> palette(bins);
    for (std::size_t i = 0; i < bins; ++i) {
        const double t = bins > 1 ? static_cast<double>(i) / static_cast<double>(bins - 1) : 1.0;
        palette[i] = {lerp_channel(light.r, dark.r, t), lerp_channel(light.g, dark.g, t),
                      lerp_channel(light.b, dark.b, t)};
    }
    return palette;
}

std::vector<double> quantile_breakpoints(std::vector<double> values, std::size_t bins) {
    if (values.empty()) {
        throw DataError("render: no values to take quantiles of");
    }
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    std::vector<double> bp(bins + 1);
    for (std::size_t k = 0; k <= bins; ++k) {
        const double h =
            static_cast<double>(n - 1) * static_cast<double>(k) / static_cast<double>(bins);
        const std::size_t lo = static_cast<std::size_t>(h);
        const double frac = h - static_cast<double>(lo);
        bp[k] = lo + 1 < n ? values[lo] + frac * (values[lo + 1] - values[lo]) : values[lo];
    }
    return bp;
}

std::size_t bin_of(double v, const std::vector<double>& breakpoints) {
    const std::size_t bins = breakpoints.size() - 1;
    const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), v);
    const std::ptrdiff_t k = (it - breakpoints.begin()) - 1;
    if (k < 0) {
        return 0;
    }
    return std::min(static_cast<std::size_t>(k), bins - 1);
}

RenderResult render(const std::vector<Feature>& features, const RenderOptions& options) {
    if (options.bins < 2) {
        throw ConfigError("render: at least two palette bins are required");
    }
    if (features.empty()) {
        throw DataError("render: empty artifact");
    }

    // Pass 1: cell boxes and the common resolution.
    std::vector<BBox> boxes;
    boxes.reserve(features.size());
    BBox extent;
    double resolution = 0.0;
    for (const Feature& f : features) {
        if (f.geometry.empty()) {
            throw DataError("render: feature without geometry");
        }
        const BBox b = bbox(f.geometry);
        const double side = b.max_x - b.min_x;
        if (!(side > 0.0) || std::abs((b.max_y - b.min_y) - side) > 1e-9 * std::max(1.0, side)) {
            throw DataError("render: feature cells must be axis-aligned squares");
        }
        if (resolution == 0.0) {
            resolution = side;
        } else if (std::abs(side - resolution) > 1e-9 * std::max(1.0, resolution)) {
            throw DataError("render: feature cells differ in size");
        }
        extent.expand(b);
        boxes.push_back(b);
    }

    const std::size_t nx = axis_index(extent.max_x - extent.min_x, resolution);
    const std::size_t ny = axis_index(extent.max_y - extent.min_y, resolution);
    if (nx == 0 || ny == 0 || nx > kMaxAxisCells || ny > kMaxAxisCells) {
        throw DataError("render: raster dimensions out of range");
    }

    // Pass 2: grid placement and the values to bin.
    std::vector<Cell> cells(features.size());
    std::vector<double> values;
    values.reserve(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        Cell& cell = cells[i];
        cell.ix = axis_index(boxes[i].min_x - extent.min_x, resolution);
        cell.iy = axis_index(boxes[i].min_y - extent.min_y, resolution);
        if (cell.ix >= nx || cell.iy >= ny) {
            throw DataError("render: cell outside the inferred raster");
        }
        const Feature& f = features[i];
        const auto retained = f.properties.find("retained");
        if (retained != f.properties.end()) {
            if (const bool* keep = std::get_if<bool>(&retained->second); keep && !*keep) {
                continue;
            }
        }
        const auto it = f.properties.find(options.property);
        if (it == f.properties.end()) {
            throw DataError("render: feature lacks property '" + options.property + "'");
        }
        if (const double* d = std::get_if<double>(&it->second)) {
            cell.value = *d;
        } else if (const long long* n = std::get_if<long long>(&it->second)) {
            cell.value = static_cast<double>(*n);
        } else {
            throw DataError("render: property '" + options.property + "' is not numeric");
        }
        cell.painted = true;
        values.push_back(cell.value);
    }
    if (values.empty()) {
        throw DataError("render: no retained cells to plot");
    }

    RenderResult out;
    out.width = nx;
    out.height = ny;

    const std::vector<double> bp = quantile_breakpoints(values, options.bins);
    const std::vector<Rgb> palette = make_palette(options.bins, options.light, options.dark);
    const bool degenerate = bp.front() == bp.back();
    if (degenerate) {
        out.warnings.push_back(
            "degenerate quantiles: the plotted values are constant, map drawn in one mid tone");
    }

    std::vector<Rgb> img(nx * ny, kBlank);
    for (const Cell& cell : cells) {
        if (!cell.painted) {
            continue;
        }
        img[cell.iy * nx + cell.ix] =
            degenerate ? palette[options.bins / 2] : palette[bin_of(cell.value, bp)];
    }

    out.ppm = "P6\n" + std::to_string(nx) + " " + std::to_string(ny) + "\n255\n";
    out.ppm.reserve(out.ppm.size() + 3 * nx * ny);
    for (std::size_t row = ny; row-- > 0;) {
        for (std::size_t col = 0; col < nx; ++col) {
            const Rgb& c = img[row * nx + col];
            out.ppm.push_back(static_cast<char>(c.r));
            out.ppm.push_back(static_cast<char>(c.g));
            out.ppm.push_back(static_cast<char>(c.b));
        }
    }

    nlohmann::ordered_json legend;
    legend["property"] = options.property;
    legend["bins"] = options.bins;
    legend["breakpoints"] = bp;
    nlohmann::ordered_json colors = nlohmann::ordered_json::array();
    for (const Rgb& c : palette) {
        colors.push_back(hex_color(c));
    }
    legend["colors"] = std::move(colors);
    legend["width"] = nx;
    legend["height"] = ny;
    legend["warnings"] = out.warnings;
    out.legend_json = legend.dump(2) + "\n";
    return out;
}

} // namespace yieldmap
