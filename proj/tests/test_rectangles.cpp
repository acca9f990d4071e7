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

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include <doctest.h>

#include "yieldmap/errors.hpp"
#include "yieldmap/geometry.hpp"
#include "yieldmap/rectangles.hpp"

using namespace yieldmap;

namespace {

// Independent construction through the slope of the connecting line:
// b = dy/dx, off_x = w (1 + b^-2)^(-1/2), off_y = -off_x / b, corners at
// (x_i +- off_x, y_i +- off_y) for both endpoints. Only valid off-axis;
// that restriction is the reason the production code uses the unit normal.
std::array<Point, 4> slope_construction(Point s0, Point s1, double w) {
    const double b = (s1.y - s0.y) / (s1.x - s0.x);
    const double off_x = w / std::sqrt(1.0 + 1.0 / (b * b));
    const double off_y = -off_x / b;
    return {Point{s0.x + off_x, s0.y + off_y}, Point{s0.x - off_x, s0.y - off_y},
            Point{s1.x + off_x, s1.y + off_y}, Point{s1.x - off_x, s1.y - off_y}};
}

// Smallest distance from p to any corner of the rectangle ring.
double nearest_corner_distance(const Polygon& rect, Point p) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < rect.exterior().size(); ++i) {
        best = std::min(best, norm(rect.exterior()[i] - p));
    }
    return best;
}

std::vector<MonitorRecord> two_records(Point s0, Point s1, double w, double m0, double m1) {
    return {{0, s0.x, s0.y, w, m0}, {1, s1.x, s1.y, w, m1}};
}

} // namespace

TEST_SUITE("rectangles") {

TEST_CASE("worked example on a 3-4-5 displacement") {
    auto result = make_rectangles(two_records({0, 0}, {4, 3}, 1.0, 0.0, 7.5));
    REQUIRE(result.rects.size() == 1);
    const HarvestRect& rect = result.rects[0];
    CHECK(rect.mass == 7.5);
    CHECK(rect.recorded_area == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(area(rect.geometry) == doctest::Approx(10.0).epsilon(1e-12));

    // Corner set from the slope construction: (0.6,-0.8), (-0.6,0.8),
    // (4.6,2.2), (3.4,3.8).
    for (Point expected : {Point{0.6, -0.8}, Point{-0.6, 0.8}, Point{4.6, 2.2}, Point{3.4, 3.8}}) {
        CHECK(nearest_corner_distance(rect.geometry, expected) < 1e-12);
    }
}

TEST_CASE("axis-aligned travel stays finite") {
    SUBCASE("due north") {
        auto result = make_rectangles(two_records({0, 0}, {0, 10}, 3.0, 0.0, 1.0));
        const Polygon& g = result.rects[0].geometry;
        CHECK(area(g) == doctest::Approx(60.0));
        for (Point expected : {Point{-3, 0}, Point{3, 0}, Point{3, 10}, Point{-3, 10}}) {
            CHECK(nearest_corner_distance(g, expected) < 1e-12);
        }
    }
    SUBCASE("due east") {
        auto result = make_rectangles(two_records({0, 0}, {10, 0}, 3.0, 0.0, 1.0));
        const Polygon& g = result.rects[0].geometry;
        CHECK(area(g) == doctest::Approx(60.0));
        for (Point expected : {Point{0, -3}, Point{0, 3}, Point{10, 3}, Point{10, -3}}) {
            CHECK(nearest_corner_distance(g, expected) < 1e-12);
        }
    }
}

TEST_CASE("unit-normal corners equal the slope construction off-axis") {
    // 1,000 random pairs kept away from the axes, where the slope form is
    // defined; corners must match to 1e-12 absolute.
    std::mt19937_64 rng(1001);
    std::uniform_real_distribution<double> coord(-50.0, 50.0);
    std::uniform_real_distribution<double> width(0.5, 5.0);
    int tested = 0;
    while (tested < 1000) {
        Point s0{coord(rng), coord(rng)};
        Point s1{coord(rng), coord(rng)};
        if (std::abs(s1.x - s0.x) < 0.1 || std::abs(s1.y - s0.y) < 0.1) {
            continue;
        }
        ++tested;
        const double w = width(rng);
        auto result = make_rectangles(two_records(s0, s1, w, 0.0, 1.0));
        const Polygon& g = result.rects[0].geometry;
        for (Point expected : slope_construction(s0, s1, w)) {
            CAPTURE(s0.x);
            CAPTURE(s1.x);
            REQUIRE(nearest_corner_distance(g, expected) < 1e-12);
        }
    }
}

TEST_CASE("rectangle construction commutes with rotation") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> coord(-50.0, 50.0);
    std::uniform_real_distribution<double> angle(0.0, 6.28318);
    for (int iter = 0; iter < 200; ++iter) {
        Point s0{coord(rng), coord(rng)};
        Point s1{coord(rng), coord(rng)};
        if (norm(s1 - s0) < 0.1) {
            continue;
        }
        const double theta = angle(rng);
        const double c = std::cos(theta), s = std::sin(theta);
        auto rotate = [&](Point p) { return Point{c * p.x - s * p.y, s * p.x + c * p.y}; };

        auto plain = make_rectangles(two_records(s0, s1, 2.0, 0.0, 1.0));
        auto rotated = make_rectangles(two_records(rotate(s0), rotate(s1), 2.0, 0.0, 1.0));
        const Ring& built = rotated.rects[0].geometry.exterior();
        for (std::size_t i = 0; i + 1 < built.size(); ++i) {
            Point expected = rotate(plain.rects[0].geometry.exterior()[i]);
            REQUIRE(norm(built[i] - expected) < 1e-9);
        }
    }
}

TEST_CASE("recorded area tracks displacement times swath") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> coord(-100.0, 100.0);
    std::uniform_real_distribution<double> width(0.3, 6.0);
    for (int iter = 0; iter < 300; ++iter) {
        Point s0{coord(rng), coord(rng)};
        Point s1{coord(rng), coord(rng)};
        if (norm(s1 - s0) < 0.05) {
            continue;
        }
        const double w = width(rng);
        auto result = make_rectangles(two_records(s0, s1, w, 0.0, 1.0));
        const HarvestRect& rect = result.rects[0];
        CHECK(rect.recorded_area ==
              doctest::Approx(2.0 * w * norm(s1 - s0)).epsilon(1e-9));
        CHECK(area(rect.geometry) == doctest::Approx(rect.recorded_area).epsilon(1e-9));
    }
}

TEST_CASE("stationary records pool forward") {
    // Two records parked at A (masses 2 and 3), then a move to B carrying 5:
    // one rectangle, all 10 kg on it.
    std::vector<MonitorRecord> records = {
        {0, 0, 0, 1.0, 2.0}, {1, 0, 0, 1.0, 3.0}, {2, 5, 0, 1.0, 5.0}};
    auto result = make_rectangles(records);
    REQUIRE(result.rects.size() == 1);
    CHECK(result.rects[0].mass == 10.0);
    CHECK(result.report.forward_merged == 1);
    CHECK(result.report.anchor_mass == 2.0);
    CHECK(result.report.merged_records == 2);
}

TEST_CASE("stationary tail folds backward") {
    std::vector<MonitorRecord> records = {{0, 0, 0, 1.0, 1.0},
                                          {1, 5, 0, 1.0, 2.0},
                                          {2, 5, 0, 1.0, 0.5},
                                          {3, 5, 0, 1.0, 0.25}};
    auto result = make_rectangles(records);
    REQUIRE(result.rects.size() == 1);
    CHECK(result.rects[0].mass == doctest::Approx(3.75));
    CHECK(result.report.trailing_merged == 2);
    CHECK(result.report.trailing_mass == doctest::Approx(0.75));
}

TEST_CASE("clean path is untouched by merging") {
    std::vector<MonitorRecord> records;
    for (int i = 0; i < 10; ++i) {
        records.push_back({i, 0.0, 4.0 * i, 2.0, 1.5});
    }
    MergeReport report;
    auto merged = merge_degenerate(records, 0.01, report);
    CHECK(merged.size() == records.size());
    CHECK(report.forward_merged == 0);
    CHECK(report.trailing_merged == 0);
}

TEST_CASE("all-stationary input cannot form rectangles") {
    std::vector<MonitorRecord> records = {
        {0, 1, 1, 1.0, 2.0}, {1, 1, 1, 1.0, 3.0}, {2, 1, 1, 1.0, 4.0}};
    CHECK_THROWS_AS(make_rectangles(records), DataError);
}

TEST_CASE("mass is conserved through merging and construction") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> mass(0.0, 20.0);
    std::uniform_real_distribution<double> jump(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<MonitorRecord> records;
        Point pos{477000.0, 4598000.0};
        double total_in = 0.0;
        for (int i = 0; i < 200; ++i) {
            if (jump(rng) > 0.3) {
                pos.y += 2.0 + 3.0 * jump(rng);
            } // else stay put: degenerate record
            double m = mass(rng);
            total_in += m;
            records.push_back({i, pos.x, pos.y, 3.0, m});
        }
        auto result = make_rectangles(records);
        double total_out = 0.0;
        for (const HarvestRect& rect : result.rects) {
            total_out += rect.mass;
        }
        CHECK(total_out == doctest::Approx(total_in).epsilon(1e-12));
    }
}

TEST_CASE("tau runs from 1 and rings are counter-clockwise") {
    std::vector<MonitorRecord> records;
    for (int i = 0; i < 6; ++i) {
        records.push_back({i, 3.0 * i, 0.5 * i, 2.0, 1.0});
    }
    auto result = make_rectangles(records);
    REQUIRE(result.rects.size() == 5);
    for (std::size_t i = 0; i < result.rects.size(); ++i) {
        CHECK(result.rects[i].tau == static_cast<long long>(i + 1));
        CHECK(signed_ring_area(result.rects[i].geometry.exterior()) > 0.0);
    }
}

} // TEST_SUITE
