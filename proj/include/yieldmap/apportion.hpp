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

#include <cstddef>
#include <vector>

#include "yieldmap/geometry.hpp"
#include "yieldmap/tessellate.hpp"

namespace yieldmap {

// Regular square grid, row-major indexing: pixel n = iy * nx + ix, with
// pixel (ix, iy) spanning [origin + i*r, origin + (i+1)*r) on each axis.
struct Grid {
    double origin_x = 0.0;
    double origin_y = 0.0;
    double resolution = 0.0;
    std::size_t nx = 0;
    std::size_t ny = 0;

    std::size_t size() const { return nx * ny; }

    BBox pixel_box(std::size_t ix, std::size_t iy) const {
        const double x0 = origin_x + static_cast<double>(ix) * resolution;
        const double y0 = origin_y + static_cast<double>(iy) * resolution;
        return BBox{x0, y0, x0 + resolution, y0 + resolution};
    }

    Point pixel_centroid(std::size_t ix, std::size_t iy) const {
        return {origin_x + (static_cast<double>(ix) + 0.5) * resolution,
                origin_y + (static_cast<double>(iy) + 0.5) * resolution};
    }

    BBox extent() const {
        return BBox{origin_x, origin_y,
                    origin_x + static_cast<double>(nx) * resolution,
                    origin_y + static_cast<double>(ny) * resolution};
    }
};

struct GridPixel {
    std::size_t n = 0; // row-major index into the grid
    Polygon geometry;
    double mass = 0.0;
    double covered_fraction = 0.0; // harvested area inside the pixel / r^2
    bool retained = false;
    Point centroid;
};

struct ApportionReport {
    double total_mass_in = 0.0;
    double mass_on_retained = 0.0;
    double mass_on_discarded = 0.0;
    // Share of harvested area that sits on pixels below the coverage
    // threshold and therefore drops out of the final map, in percent.
    double coverage_deficit_percent = 0.0;
};

struct ApportionResult {
    std::vector<GridPixel> pixels;
    ApportionReport report;
};

// How the grid origin is chosen: kSnap floors it to a multiple of the
// resolution so grids from different runs or seasons align; kExact pins it
// to the minimum corner of the tile bounds.
enum class OriginPolicy {
    kSnap,
    kExact,
};

// Builds the smallest grid of the given resolution that covers every tile.
// Throws ConfigError on a non-positive resolution, DataError on empty input.
Grid make_grid(const std::vector<TessTile>& tiles, double resolution,
               OriginPolicy policy = OriginPolicy::kSnap);

// Distributes each tile's mass over the pixels it intersects, in proportion
// to the overlap area; a pixel keeps its mass only if the harvested area
// covers at least coverage_threshold of it. Pixel state is written for the
// whole grid, retained or not. Throws GeometryError if a tile extends
// outside the grid (a make_grid contract violation), ConfigError on a
// threshold outside [0,1].
ApportionResult apportion(const std::vector<TessTile>& tiles, const Grid& grid,
                          double coverage_threshold = 0.5);

} // namespace yieldmap
