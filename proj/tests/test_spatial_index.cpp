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

#include <random>
#include <vector>

#include <doctest.h>

#include "yieldmap/spatial_index.hpp"

using namespace yieldmap;

TEST_SUITE("spatial_index") {

TEST_CASE("query matches a brute force scan") {
    // The index must return exactly the ids whose boxes intersect the query,
    // regardless of cell size. Brute force is the oracle.
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> pos(-200.0, 200.0);
    std::uniform_real_distribution<double> extent(0.1, 30.0);

    for (double cell : {1.0, 7.5, 64.0}) {
        SpatialIndex index(cell);
        std::vector<BBox> boxes;
        for (std::size_t id = 0; id < 400; ++id) {
            BBox b{pos(rng), pos(rng), 0, 0};
            b.max_x = b.min_x + extent(rng);
            b.max_y = b.min_y + extent(rng);
            boxes.push_back(b);
            index.insert(id, b);
        }
        for (int q = 0; q < 200; ++q) {
            BBox query{pos(rng), pos(rng), 0, 0};
            query.max_x = query.min_x + extent(rng);
            query.max_y = query.min_y + extent(rng);

            std::vector<std::size_t> expected;
            for (std::size_t id = 0; id < boxes.size(); ++id) {
                if (boxes[id].intersects(query)) {
                    expected.push_back(id);
                }
            }
            CHECK(index.query(query) == expected);
        }
    }
}

TEST_CASE("touching boxes count as intersecting") {
    SpatialIndex index(10.0);
    index.insert(0, BBox{0, 0, 5, 5});
    CHECK(index.query(BBox{5, 5, 9, 9}) == std::vector<std::size_t>{0});
    CHECK(index.query(BBox{5.0001, 5.0001, 9, 9}).empty());
}

TEST_CASE("negative coordinates straddling cell boundaries") {
    SpatialIndex index(5.0);
    index.insert(3, BBox{-12.5, -2.5, -7.5, 2.5});
    index.insert(8, BBox{-100, -100, -99, -99});
    CHECK(index.query(BBox{-8, -1, -7, 1}) == std::vector<std::size_t>{3});
    CHECK(index.query(BBox{0.1, 0.1, 1, 1}).empty());
    auto both = index.query(BBox{-150, -150, 0, 0});
    CHECK(both == std::vector<std::size_t>{3, 8});
}

TEST_CASE("empty inputs stay empty") {
    SpatialIndex index(5.0);
    index.insert(0, BBox{});
    CHECK(index.query(BBox{-1000, -1000, 1000, 1000}).empty());
    index.insert(1, BBox{0, 0, 1, 1});
    CHECK(index.query(BBox{}).empty());
}

} // TEST_SUITE
