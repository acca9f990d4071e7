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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "yieldmap/geometry.hpp"

namespace yieldmap {

// Uniform hash-grid over item bounding boxes. Each item is registered in
// every grid cell its box touches; queries gather candidates from the cells
// touched by the query box. Candidate lists may contain false positives but
// never miss an item whose box intersects the query box.
class SpatialIndex {
  public:
    explicit SpatialIndex(double cell_size) : cell_size_(cell_size) {}

    void insert(std::size_t id, const BBox& box) {
        if (box.empty()) {
            return;
        }
        boxes_.resize(std::max(boxes_.size(), id + 1));
        boxes_[id] = box;
        for_each_cell(box, [&](std::int64_t cx, std::int64_t cy) {
            cells_[key(cx, cy)].push_back(id);
        });
    }

    // Ids of items whose bounding box intersects `query`, sorted ascending,
    // no duplicates.
    std::vector<std::size_t> query(const BBox& query_box) const {
        std::vector<std::size_t> out;
        if (query_box.empty()) {
            return out;
        }
        for_each_cell(query_box, [&](std::int64_t cx, std::int64_t cy) {
            auto it = cells_.find(key(cx, cy));
            if (it != cells_.end()) {
                out.insert(out.end(), it->second.begin(), it->second.end());
            }
        });
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        std::erase_if(out, [&](std::size_t id) { return !boxes_[id].intersects(query_box); });
        return out;
    }

    double cell_size() const { return cell_size_; }

  private:
    static std::uint64_t key(std::int64_t cx, std::int64_t cy) {
        return (static_cast<std::uint64_t>(cx) << 32) ^
               (static_cast<std::uint64_t>(cy) & 0xffffffffULL);
    }

    template <typename Fn>
    void for_each_cell(const BBox& box, Fn&& fn) const {
        const auto x0 = static_cast<std::int64_t>(std::floor(box.min_x / cell_size_));
        const auto x1 = static_cast<std::int64_t>(std::floor(box.max_x / cell_size_));
        const auto y0 = static_cast<std::int64_t>(std::floor(box.min_y / cell_size_));
        const auto y1 = static_cast<std::int64_t>(std::floor(box.max_y / cell_size_));
        for (std::int64_t cx = x0; cx <= x1; ++cx) {
            for (std::int64_t cy = y0; cy <= y1; ++cy) {
                fn(cx, cy);
            }
        }
    }

    double cell_size_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
    std::vector<BBox> boxes_;
};

} // namespace yieldmap
