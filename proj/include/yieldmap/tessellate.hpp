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
#include "yieldmap/rectangles.hpp"

namespace yieldmap {

// Non-overlapping piece left of rectangle tau after everything harvested
// earlier is carved away. Together the tiles partition the union of all
// rectangles: no gaps, no double counting.
struct TessTile {
    long long tau = 0;
    MultiPolygon geometry;
    double mass = 0.0;
    double effective_area = 0.0;
};

struct TessReport {
    std::size_t dropped_count = 0;  // rectangles fully inside earlier area
    double leaked_mass = 0.0;       // kg lost to dropped rectangles (drop policy)
    double leaked_mass_fraction = 0.0;
    double overlap_percent = 0.0;   // excess of summed rectangle area over the union
};

// What happens to the mass of a rectangle whose area was already harvested:
// kDrop books it as leakage; kReassign spreads it over the earlier tiles it
// overlaps, in proportion to the overlap area.
enum class NestedPolicy {
    kDrop,
    kReassign,
};

struct TessResult {
    std::vector<TessTile> tiles;
    TessReport report;
};

// Sequential in tau by definition: each rectangle subtracts the rectangles
// before it (bbox-indexed, so only actual neighbours are touched).
// Throws DataError on empty input; GeometryError names the failing tau.
TessResult tessellate(const std::vector<HarvestRect>& rects,
                      NestedPolicy policy = NestedPolicy::kDrop);

} // namespace yieldmap
