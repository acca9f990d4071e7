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

#include "yieldmap/apportion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "yieldmap/errors.hpp"

namespace yieldmap {

namespace {

// Slack for boundary classification: a tile edge exactly on the grid border
// must not be read as "outside", and a max coordinate that lands exactly on
// a grid line must not force an extra empty row of pixels.
constexpr double kEdgeSlackM = 1e-9;

std::size_t ceil_count(double extent, double resolution) {
    const double count = std::ceil(extent / resolution - kEdgeSlackM);
    return static_cast<std::size_t>(std::max(1.0, count));
}

} // namespace

Grid make_grid(const std::vector<TessTile>& tiles, double resolution, OriginPolicy policy) {
    if (!(resolution > 0.0)) {
        throw ConfigError("grid resolution must be positive, got " +
                          std::to_string(resolution));
    }
    if (tiles.empty()) {
        throw DataError("make_grid: no tiles to cover");
    }

    BBox bounds;
    for (const TessTile& tile : tiles) {
        bounds.expand(bbox(tile.geometry));
    }

    Grid grid;
    grid.resolution = resolution;
    if (policy == OriginPolicy::kSnap) {
        grid.origin_x = std::floor(bounds.min_x / resolution) * resolution;
        grid.origin_y = std::floor(bounds.min_y / resolution) * resolution;
    } else {
        grid.origin_x = bounds.min_x;
        grid.origin_y = bounds.min_y;
    }
    grid.nx = ceil_count(bounds.max_x - grid.origin_x, resolution);
    grid.ny = ceil_count(bounds.max_y - grid.origin_y, resolution);
    return grid;
}

ApportionResult apportion(const std::vector<TessTile>& tiles, const Grid& grid,
                          double coverage_threshold) {
    if (!(coverage_threshold >= 0.0 && coverage_threshold <= 1.0)) {
        throw ConfigError("coverage threshold must lie in [0,1], got " +
                          std::to_string(coverage_threshold));
    }
    if (!(grid.resolution > 0.0) || grid.nx == 0 || grid.ny == 0) {
        throw ConfigError("apportion: grid is not initialized");
    }

    const double r = grid.resolution;
    const double pixel_area = r * r;
    const BBox grid_extent = grid.extent();

    std::vector<double> mass(grid.size(), 0.0);
    std::vector<double> covered(grid.size(), 0.0);

    double total_mass_in = 0.0;
    double union_area = 0.0;

    // Tiles are visited in their stored tau order and pixels accumulate in
    // that order, so the result is deterministic with no index structure:
    // the regular grid maps a tile's bounds straight to a pixel range.
    for (const TessTile& tile : tiles) {
        total_mass_in += tile.mass;
        union_area += tile.effective_area;

        const BBox tb = bbox(tile.geometry);
        if (tb.min_x < grid_extent.min_x - kEdgeSlackM ||
            tb.min_y < grid_extent.min_y - kEdgeSlackM ||
            tb.max_x > grid_extent.max_x + kEdgeSlackM ||
            tb.max_y > grid_extent.max_y + kEdgeSlackM) {
            throw GeometryError("apportion: tile tau=" + std::to_string(tile.tau) +
                                " extends outside the grid");
        }
        if (!(tile.effective_area > 0.0)) {
            throw DataError("apportion: tile tau=" + std::to_string(tile.tau) +
                            " has non-positive effective area");
        }

        const auto clamp_idx = [](double v, std::size_t hi) {
            if (v < 0.0) return std::size_t{0};
            const std::size_t i = static_cast<std::size_t>(v);
            return std::min(i, hi - 1);
        };
        const std::size_t ix0 = clamp_idx(std::floor((tb.min_x - grid.origin_x) / r), grid.nx);
        const std::size_t ix1 = clamp_idx(std::floor((tb.max_x - grid.origin_x) / r), grid.nx);
        const std::size_t iy0 = clamp_idx(std::floor((tb.min_y - grid.origin_y) / r), grid.ny);
        const std::size_t iy1 = clamp_idx(std::floor((tb.max_y - grid.origin_y) / r), grid.ny);

        for (std::size_t iy = iy0; iy <= iy1; ++iy) {
            for (std::size_t ix = ix0; ix <= ix1; ++ix) {
                const double a = clip_area_box(tile.geometry, grid.pixel_box(ix, iy));
                if (a <= 0.0) {
                    continue;
                }
                const std::size_t n = iy * grid.nx + ix;
                covered[n] += a;
                mass[n] += tile.mass * (a / tile.effective_area);
            }
        }
    }

    ApportionResult result;
    result.pixels.reserve(grid.size());
    result.report.total_mass_in = total_mass_in;

    double covered_area_on_retained = 0.0;
    for (std::size_t iy = 0; iy < grid.ny; ++iy) {
        for (std::size_t ix = 0; ix < grid.nx; ++ix) {
            const std::size_t n = iy * grid.nx + ix;
            GridPixel px;
            px.n = n;
            const BBox box = grid.pixel_box(ix, iy);
            px.geometry = make_box(box.min_x, box.min_y, box.max_x, box.max_y);
            px.centroid = grid.pixel_centroid(ix, iy);
            px.mass = mass[n];
            px.covered_fraction = std::clamp(covered[n] / pixel_area, 0.0, 1.0);
            px.retained = px.covered_fraction >= coverage_threshold;
            if (px.retained) {
                result.report.mass_on_retained += px.mass;
                covered_area_on_retained += covered[n];
            } else {
                result.report.mass_on_discarded += px.mass;
            }
            result.pixels.push_back(std::move(px));
        }
    }

    result.report.coverage_deficit_percent =
        union_area > 0.0
            ? (union_area - covered_area_on_retained) / union_area * 100.0
            : 0.0;
    return result;
}

} // namespace yieldmap
