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

#include <cmath>
#include <random>

#include <doctest.h>

#include "yieldmap/errors.hpp"
#include "yieldmap/geometry.hpp"

using namespace yieldmap;

namespace {

// Axis-aligned overlap of two boxes, computable without any polygon code.
double box_overlap_area(const BBox& a, const BBox& b) {
    double w = std::min(a.max_x, b.max_x) - std::max(a.min_x, b.min_x);
    double h = std::min(a.max_y, b.max_y) - std::max(a.min_y, b.min_y);
    return (w > 0.0 && h > 0.0) ? w * h : 0.0;
}

Ring rotated_box(Point center, double half_w, double half_h, double angle) {
    Ring r;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const Point corners[4] = {{-half_w, -half_h}, {half_w, -half_h}, {half_w, half_h}, {-half_w, half_h}};
    for (const Point& p : corners) {
        r.push_back({center.x + c * p.x - s * p.y, center.y + s * p.x + c * p.y});
    }
    r.push_back(r.front());
    return r;
}

} // namespace

TEST_SUITE("geometry") {

TEST_CASE("shoelace area of canonical shapes") {
    Ring square = {{0, 0}, {2, 0}, {2, 2}, {0, 2}, {0, 0}};
    CHECK(signed_ring_area(square) == doctest::Approx(4.0));

    Ring triangle = {{0, 0}, {3, 0}, {0, 4}, {0, 0}};
    CHECK(signed_ring_area(triangle) == doctest::Approx(6.0));

    std::reverse(square.begin(), square.end());
    CHECK(signed_ring_area(square) == doctest::Approx(-4.0));
}

TEST_CASE("polygon area subtracts holes") {
    Polygon donut = make_box(0, 0, 10, 10);
    Ring hole = {{4, 4}, {4, 6}, {6, 6}, {6, 4}, {4, 4}}; // clockwise
    donut.rings.push_back(hole);
    CHECK(area(donut) == doctest::Approx(96.0));

    MultiPolygon mp;
    mp.polygons.push_back(donut);
    mp.polygons.push_back(make_box(20, 20, 21, 22));
    CHECK(area(mp) == doctest::Approx(98.0));
}

TEST_CASE("area rejects malformed rings") {
    Polygon open_ring;
    open_ring.rings.push_back({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK_THROWS_AS(area(open_ring), GeometryError);

    Polygon reversed;
    reversed.rings.push_back({{0, 0}, {0, 1}, {1, 1}, {1, 0}, {0, 0}});
    CHECK_THROWS_AS(area(reversed), GeometryError);

    Polygon tiny;
    tiny.rings.push_back({{0, 0}, {1, 0}, {0, 0}});
    CHECK_THROWS_AS(area(tiny), GeometryError);

    Polygon nan_ring;
    nan_ring.rings.push_back({{0, 0}, {1, 0}, {1, std::nan("")}, {0, 0}});
    CHECK_THROWS_AS(area(nan_ring), GeometryError);
}

TEST_CASE("normalize_orientation flips rings into place") {
    Polygon poly;
    poly.rings.push_back({{0, 0}, {0, 5}, {5, 5}, {5, 0}, {0, 0}});       // exterior given CW
    poly.rings.push_back({{1, 1}, {2, 1}, {2, 2}, {1, 2}, {1, 1}});       // hole given CCW
    normalize_orientation(poly);
    CHECK(signed_ring_area(poly.rings[0]) > 0.0);
    CHECK(signed_ring_area(poly.rings[1]) < 0.0);
    CHECK(area(poly) == doctest::Approx(24.0));
}

TEST_CASE("contains honours holes and disjoint parts") {
    Polygon donut = make_box(0, 0, 10, 10);
    donut.rings.push_back({{4, 4}, {4, 6}, {6, 6}, {6, 4}, {4, 4}});
    CHECK(contains(donut, {1, 1}));
    CHECK_FALSE(contains(donut, {5, 5}));
    CHECK_FALSE(contains(donut, {11, 5}));

    MultiPolygon mp;
    mp.polygons.push_back(donut);
    mp.polygons.push_back(make_box(20, 0, 22, 2));
    CHECK(contains(mp, {21, 1}));
    CHECK_FALSE(contains(mp, {15, 1}));
}

TEST_CASE("bbox and perimeter") {
    Polygon box = make_box(-1, 2, 3, 7);
    BBox b = bbox(box);
    CHECK(b.min_x == -1);
    CHECK(b.min_y == 2);
    CHECK(b.max_x == 3);
    CHECK(b.max_y == 7);
    CHECK(perimeter(box) == doctest::Approx(18.0));
    CHECK(b.intersects(BBox{2, 6, 10, 10}));
    CHECK_FALSE(b.intersects(BBox{4, 0, 10, 10}));
}

TEST_CASE("clip area against the subject's own bounds is the full area") {
    Ring subject = rotated_box({5, 5}, 3, 1.5, 0.7);
    Ring window = {{-20, -20}, {20, -20}, {20, 20}, {-20, 20}};
    CHECK(clip_area_convex(subject, window) == doctest::Approx(4.0 * 3 * 1.5).epsilon(1e-12));
}

TEST_CASE("clip area of disjoint shapes is zero") {
    Ring subject = rotated_box({100, 100}, 2, 2, 0.3);
    Ring window = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(clip_area_convex(subject, window) == doctest::Approx(0.0));
}

TEST_CASE("clip area matches the analytic box overlap") {
    // Axis-aligned random boxes give an overlap area we can compute directly.
    std::mt19937_64 rng(20260815);
    std::uniform_real_distribution<double> coord(-10.0, 10.0);
    std::uniform_real_distribution<double> extent(0.5, 8.0);
    for (int iter = 0; iter < 500; ++iter) {
        BBox a{coord(rng), coord(rng), 0, 0};
        a.max_x = a.min_x + extent(rng);
        a.max_y = a.min_y + extent(rng);
        BBox w{coord(rng), coord(rng), 0, 0};
        w.max_x = w.min_x + extent(rng);
        w.max_y = w.min_y + extent(rng);

        Polygon subject = make_box(a.min_x, a.min_y, a.max_x, a.max_y);
        double got = clip_area_box(subject, w);
        CHECK(got == doctest::Approx(box_overlap_area(a, w)).epsilon(1e-12));
    }
}

TEST_CASE("clip area splits exactly across a partition of the plane") {
    // Two windows that tile a strip: clipped areas must add up to the area
    // clipped by their union, whatever the subject's shape.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ang(0.0, 3.14);
    for (int iter = 0; iter < 200; ++iter) {
        Ring subject = rotated_box({2.0, 1.0}, 2.5, 1.0, ang(rng));
        Ring left = {{-10, -10}, {2, -10}, {2, 10}, {-10, 10}};
        Ring right = {{2, -10}, {14, -10}, {14, 10}, {2, 10}};
        Ring both = {{-10, -10}, {14, -10}, {14, 10}, {-10, 10}};
        double split = clip_area_convex(subject, left) + clip_area_convex(subject, right);
        CHECK(split == doctest::Approx(clip_area_convex(subject, both)).epsilon(1e-12));
    }
}

TEST_CASE("clip area of a donut discounts the hole") {
    Polygon donut = make_box(0, 0, 10, 10);
    donut.rings.push_back({{4, 4}, {4, 6}, {6, 6}, {6, 4}, {4, 4}});
    // Window covering the left half: 5x10 minus the 1x2 half-hole.
    CHECK(clip_area_box(donut, BBox{0, 0, 5, 10}) == doctest::Approx(50.0 - 2.0));
    // Window inside the hole.
    CHECK(clip_area_box(donut, BBox{4.5, 4.5, 5.5, 5.5}) == doctest::Approx(0.0));
}

TEST_CASE("overlap_area on analytic box pairs") {
    Polygon a = make_box(0, 0, 4, 4);
    CHECK(overlap_area(a, make_box(2, 1, 6, 3)) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(overlap_area(a, make_box(10, 10, 12, 12)) == doctest::Approx(0.0));
    CHECK(overlap_area(a, make_box(1, 1, 2, 2)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(overlap_area(a, a) == doctest::Approx(16.0).epsilon(1e-12));
    // Edge-adjacent boxes share only a zero-width boundary.
    CHECK(overlap_area(a, make_box(4, 0, 8, 4)) == doctest::Approx(0.0));
}

TEST_CASE("overlap_area handles holes on both sides") {
    Polygon donut_a = make_box(0, 0, 10, 10);
    donut_a.rings.push_back({{2, 2}, {2, 8}, {8, 8}, {8, 2}, {2, 2}});
    Polygon donut_b = make_box(5, 0, 15, 10);
    donut_b.rings.push_back({{7, 3}, {7, 7}, {11, 7}, {11, 3}, {7, 3}});

    // Analytic decomposition over the x in [5,10] strip shared by the two:
    // full strip 50, minus a's hole part 18 (x in [5,8], y in [2,8]), minus
    // b's hole part 12 (x in [7,10], y in [3,7]), plus the doubly-removed
    // block 4 (x in [7,8], y in [3,7]).
    const double expected = 50.0 - 18.0 - 12.0 + 4.0;
    CHECK(overlap_area(donut_a, donut_b) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("overlap_area of non-convex subjects matches convex clipping") {
    // L-shaped subject against convex windows: clip_area_convex is the
    // trusted reference for a convex window.
    Polygon ell = make_polygon({{0, 0}, {6, 0}, {6, 2}, {2, 2}, {2, 6}, {0, 6}});
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> pos(-1.0, 7.0);
    std::uniform_real_distribution<double> half(0.5, 3.0);
    std::uniform_real_distribution<double> ang(0.0, 3.14);
    for (int iter = 0; iter < 200; ++iter) {
        Ring window = rotated_box({pos(rng), pos(rng)}, half(rng), half(rng), ang(rng));
        Polygon window_poly;
        window_poly.rings.push_back(window);
        window_poly.rings.front().push_back(window_poly.rings.front().front());
        const double via_clip = clip_area_convex(ell, window);
        const double via_fans = overlap_area(ell, window_poly);
        CHECK(std::abs(via_fans - via_clip) <= 1e-12 * std::max(1.0, via_clip));
    }
}

TEST_CASE("overlap_area is symmetric") {
    Polygon a = make_polygon({{0, 0}, {5, 1}, {4, 4}, {1, 3}});
    Polygon b = make_polygon({{2, 2}, {7, 2}, {7, 6}, {2, 6}});
    CHECK(overlap_area(a, b) == doctest::Approx(overlap_area(b, a)).epsilon(1e-12));

    MultiPolygon ma;
    ma.polygons.push_back(a);
    CHECK(fan_triangle_count(ma) == 2); // a closed quad fans into two triangles
}

} // TEST_SUITE
