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

#include "yieldmap/rectangles.hpp"

#include <cmath>

#include "yieldmap/errors.hpp"

namespace yieldmap {

std::vector<MonitorRecord> merge_degenerate(const std::vector<MonitorRecord>& records,
                                            double min_displacement, MergeReport& report) {
    report = MergeReport{};
    report.input_records = records.size();
    std::vector<MonitorRecord> out;
    if (records.empty()) {
        return out;
    }
    out.push_back(records.front());
    double pending_mass = 0.0;
    std::size_t pending_count = 0;

    for (std::size_t i = 1; i < records.size(); ++i) {
        const MonitorRecord& r = records[i];
        const MonitorRecord& kept = out.back();
        const double disp = std::hypot(r.x - kept.x, r.y - kept.y);
        if (disp < min_displacement) {
            pending_mass += r.m;
            ++pending_count;
        } else {
            out.push_back(r);
            out.back().m += pending_mass;
            report.forward_merged += pending_count;
            pending_mass = 0.0;
            pending_count = 0;
        }
    }

    if (pending_count > 0) {
        // Stationary tail: nothing follows to carry it, so the last kept
        // record absorbs it. Counted separately because the mass flows
        // backward in time here.
        out.back().m += pending_mass;
        report.trailing_merged = pending_count;
        report.trailing_mass = pending_mass;
    }
    report.merged_records = out.size();
    return out;
}

RectanglesResult make_rectangles(const std::vector<MonitorRecord>& records,
                                 double min_displacement) {
    RectanglesResult result;
    std::vector<MonitorRecord> merged =
        merge_degenerate(records, min_displacement, result.report);
    if (merged.size() < 2) {
        throw DataError("every record is within " + std::to_string(min_displacement) +
                        " m of its predecessor; no rectangle can be formed");
    }

    result.rects.reserve(merged.size() - 1);
    for (std::size_t i = 1; i < merged.size(); ++i) {
        const MonitorRecord& a = merged[i - 1];
        const MonitorRecord& b = merged[i];
        const double dx = b.x - a.x;
        const double dy = b.y - a.y;
        const double len = std::hypot(dx, dy);
        const double w = b.w;
        // Unit normal of the displacement; equals the slope-based offsets
        // wherever those are defined and stays finite on axis-aligned travel.
        const double nx = -dy / len * w;
        const double ny = dx / len * w;

        HarvestRect rect;
        rect.tau = static_cast<long long>(i);
        rect.source_t = b.t;
        rect.mass = b.m;
        rect.recorded_area = len * 2.0 * w;
        rect.geometry.rings.push_back({{a.x - nx, a.y - ny},
                                       {b.x - nx, b.y - ny},
                                       {b.x + nx, b.y + ny},
                                       {a.x + nx, a.y + ny},
                                       {a.x - nx, a.y - ny}});
        result.rects.push_back(std::move(rect));
    }

    // The anchor record has no displacement of its own; its mass belongs to
    // the first harvested area.
    result.report.anchor_mass = merged.front().m;
    result.rects.front().mass += merged.front().m;
    return result;
}

} // namespace yieldmap
