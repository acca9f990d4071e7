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
#include "yieldmap/ingest.hpp"

namespace yieldmap {

// Swath rectangle spanned by one displacement step. The ring runs
// counter-clockwise from the start edge: s_prev - w*n, s_cur - w*n,
// s_cur + w*n, s_prev + w*n, with n the unit normal of the displacement.
struct HarvestRect {
    long long tau = 0; // 1-based time order
    Polygon geometry;
    double mass = 0.0;
    double recorded_area = 0.0; // |displacement| * 2w
    long long source_t = 0;     // t of the later record of the pair
};

struct MergeReport {
    std::size_t input_records = 0;
    std::size_t merged_records = 0;   // output count after coalescing
    std::size_t forward_merged = 0;   // stationary records pooled onto the next mover
    std::size_t trailing_merged = 0;  // stationary tail folded onto the last rectangle
    double trailing_mass = 0.0;       // kg folded backward
    double anchor_mass = 0.0;         // mass of the first record, carried by rectangle 1
};

// Coalesces runs of stationary records (displacement < min_displacement from
// the last kept record): their mass rides forward onto the next moving
// record. A stationary tail is folded backward onto the last kept record.
// Total mass is preserved.
std::vector<MonitorRecord> merge_degenerate(const std::vector<MonitorRecord>& records,
                                            double min_displacement, MergeReport& report);

struct RectanglesResult {
    std::vector<HarvestRect> rects;
    MergeReport report;
};

// Builds one rectangle per consecutive pair of merged records. The swath
// half-width of the later record sets the rectangle width; the first
// record's mass is added to rectangle 1 so no mass is lost.
// Throws DataError when every record is stationary.
RectanglesResult make_rectangles(const std::vector<MonitorRecord>& records,
                                 double min_displacement = 0.01);

} // namespace yieldmap
