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

#include "yieldmap/tessellate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "yieldmap/bool_ops.hpp"
#include "yieldmap/errors.hpp"
#include "yieldmap/spatial_index.hpp"

namespace yieldmap {

namespace {

// A cell roughly the size of one rectangle keeps the candidate lists short
// without letting a single rectangle span hundreds of cells.
double pick_cell_size(const std::vector<HarvestRect>& rects) {
    double sum = 0.0;
    std::size_t count = std::min<std::size_t>(rects.size(), 256);
    for (std::size_t i = 0; i < count; ++i) {
        const BBox box = bbox(rects[i].geometry);
        sum += std::max(box.max_x - box.min_x, box.max_y - box.min_y);
    }
    return std::max(1.0, sum / static_cast<double>(count));
}

} // namespace

TessResult tessellate(const std::vector<HarvestRect>& rects, NestedPolicy policy) {
    if (rects.empty()) {
        throw DataError("tessellate: no rectangles to process");
    }

    TessResult result;
    result.tiles.reserve(rects.size());

    SpatialIndex index(pick_cell_size(rects));
    // tile_of[i] is the position of rectangle i's tile in result.tiles, or
    // npos when the rectangle was swallowed entirely.
    constexpr std::size_t kNoTile = static_cast<std::size_t>(-1);
    std::vector<std::size_t> tile_of(rects.size(), kNoTile);

    double total_mass = 0.0;
    double total_recorded_area = 0.0;
    double union_area = 0.0;

    for (std::size_t i = 0; i < rects.size(); ++i) {
        const HarvestRect& rect = rects[i];
        total_mass += rect.mass;
        total_recorded_area += rect.recorded_area;

        const BBox rect_box = bbox(rect.geometry);
        std::vector<std::size_t> prior = index.query(rect_box);

        MultiPolygon tile = to_multi(rect.geometry);
        try {
            for (std::size_t j : prior) {
                tile = difference(tile, to_multi(rects[j].geometry));
                if (tile.polygons.empty()) {
                    break;
                }
            }
        } catch (const Error& e) {
            throw GeometryError("tessellate: subtraction failed at tau=" +
                                std::to_string(rect.tau) + ": " + e.what());
        }

        index.insert(i, rect_box);

        const double tile_area = tile.polygons.empty() ? 0.0 : area(tile);
        if (tile_area >= kSliverAreaM2) {
            tile_of[i] = result.tiles.size();
            TessTile out;
            out.tau = rect.tau;
            out.geometry = std::move(tile);
            out.mass = rect.mass;
            out.effective_area = tile_area;
            result.tiles.push_back(std::move(out));
            union_area += tile_area;
            continue;
        }

        // Rectangle i lies inside ground already harvested.
        result.report.dropped_count += 1;
        if (policy == NestedPolicy::kDrop) {
            result.report.leaked_mass += rect.mass;
            continue;
        }

        // Reassign: split the mass over the earlier tiles this rectangle
        // overlaps, weighted by overlap area. The prior tiles cover the
        // rectangle completely, so the weights sum to its area.
        std::vector<std::pair<std::size_t, double>> weights;
        double weight_sum = 0.0;
        for (std::size_t j : prior) {
            const std::size_t t = tile_of[j];
            if (t == kNoTile) {
                continue;
            }
            const double w = clip_area_convex(result.tiles[t].geometry,
                                              rect.geometry.exterior());
            if (w > 0.0) {
                weights.emplace_back(t, w);
                weight_sum += w;
            }
        }
        if (weight_sum <= 0.0) {
            // Unreachable when geometry is consistent; keep the ledger exact
            // anyway by folding the mass into the most recent tile.
            if (result.tiles.empty()) {
                throw GeometryError(
                    "tessellate: covered rectangle with no prior tile at tau=" +
                    std::to_string(rect.tau));
            }
            result.tiles.back().mass += rect.mass;
            continue;
        }
        for (const auto& [t, w] : weights) {
            result.tiles[t].mass += rect.mass * (w / weight_sum);
        }
    }

    result.report.leaked_mass_fraction =
        total_mass > 0.0 ? result.report.leaked_mass / total_mass : 0.0;
    result.report.overlap_percent =
        union_area > 0.0
            ? (total_recorded_area - union_area) / union_area * 100.0
            : 0.0;
    return result;
}

} // namespace yieldmap
