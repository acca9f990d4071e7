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

#include "yieldmap/render.hpp"

#include <string>
#include <vector>

#include <doctest.h>

#include "yieldmap/errors.hpp"
#include "yieldmap/geometry.hpp"

using namespace yieldmap;

namespace {

Feature cell(double x0, double y0, double res, double value) {
    Feature f;
    f.geometry.polygons.push_back(make_box(x0, y0, x0 + res, y0 + res));
    f.properties["v"] = value;
    return f;
}

RenderOptions value_options(std::size_t bins = 8) {
    RenderOptions o;
    o.property = "v";
    o.bins = bins;
    return o;
}

// Color of the raster cell at column ix, row iy (grid coordinates, y up).
Rgb color_at(const RenderResult& r, std::size_t ix, std::size_t iy) {
    const std::string header =
        "P6\n" + std::to_string(r.width) + " " + std::to_string(r.height) + "\n255\n";
    REQUIRE(r.ppm.size() == header.size() + 3 * r.width * r.height);
    const std::size_t offset = header.size() + 3 * ((r.height - 1 - iy) * r.width + ix);
    return {static_cast<std::uint8_t>(r.ppm[offset]),
            static_cast<std::uint8_t>(r.ppm[offset + 1]),
            static_cast<std::uint8_t>(r.ppm[offset + 2])};
}

} // namespace

TEST_SUITE("render") {

TEST_CASE("palette spans light to dark in even steps") {
    const RenderOptions o;
    const std::vector<Rgb> p = make_palette(8, o.light, o.dark);
    REQUIRE(p.size() == 8);
    CHECK(p.front() == o.light);
    CHECK(p.back() == o.dark);
    for (std::size_t i = 1; i < p.size(); ++i) {
        CHECK(p[i].g < p[i - 1].g); // single green hue, strictly darkening
    }
}

TEST_CASE("quantile breakpoints interpolate order statistics") {
    // Nine values 1..9: the k/8 quantiles land exactly on the sorted values.
    std::vector<double> v = {9, 2, 6, 4, 5, 3, 7, 1, 8};
    const std::vector<double> bp = quantile_breakpoints(v, 8);
    REQUIRE(bp.size() == 9);
    for (std::size_t k = 0; k < bp.size(); ++k) {
        CHECK(bp[k] == doctest::Approx(static_cast<double>(k + 1)).epsilon(1e-15));
    }

    // Two values: the midpoint interpolates.
    const std::vector<double> bp2 = quantile_breakpoints({0.0, 1.0}, 2);
    CHECK(bp2[1] == doctest::Approx(0.5).epsilon(1e-15));

    CHECK_THROWS_AS(quantile_breakpoints({}, 4), DataError);
}

TEST_CASE("bin lookup is the last breakpoint not above the value") {
    const std::vector<double> bp = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    CHECK(bin_of(0.5, bp) == 0); // below the minimum clamps up
    CHECK(bin_of(1.0, bp) == 0);
    CHECK(bin_of(1.99, bp) == 0);
    CHECK(bin_of(2.0, bp) == 1);
    CHECK(bin_of(5.0, bp) == 4); // the median lands in the middle bin
    CHECK(bin_of(9.0, bp) == 7); // the maximum clamps into the top bin
    CHECK(bin_of(42.0, bp) == 7);
}

TEST_CASE("constant field renders one mid tone and warns") {
    std::vector<Feature> cells;
    for (int iy = 0; iy < 4; ++iy) {
        for (int ix = 0; ix < 4; ++ix) {
            cells.push_back(cell(5.0 * ix, 5.0 * iy, 5.0, 7.25));
        }
    }
    const RenderOptions o = value_options();
    const RenderResult r = render(cells, o);
    REQUIRE(r.width == 4);
    REQUIRE(r.height == 4);
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("degenerate quantiles") != std::string::npos);
    CHECK(r.legend_json.find("degenerate quantiles") != std::string::npos);

    const std::vector<Rgb> p = make_palette(o.bins, o.light, o.dark);
    for (std::size_t iy = 0; iy < 4; ++iy) {
        for (std::size_t ix = 0; ix < 4; ++ix) {
            CHECK(color_at(r, ix, iy) == p[o.bins / 2]);
        }
    }
}

TEST_CASE("two-level field maps low west light and high east dark") {
    std::vector<Feature> cells;
    for (int iy = 0; iy < 2; ++iy) {
        for (int ix = 0; ix < 8; ++ix) {
            cells.push_back(cell(2.0 * ix, 2.0 * iy, 2.0, ix < 4 ? 1.0 : 5.0));
        }
    }
    const RenderOptions o = value_options();
    const RenderResult r = render(cells, o);
    REQUIRE(r.width == 8);
    REQUIRE(r.height == 2);
    CHECK(r.warnings.empty());

    const Rgb west = color_at(r, 0, 0);
    const Rgb east = color_at(r, 7, 1);
    for (std::size_t ix = 0; ix < 8; ++ix) {
        for (std::size_t iy = 0; iy < 2; ++iy) {
            CHECK(color_at(r, ix, iy) == (ix < 4 ? west : east));
        }
    }
    // Lighter west, darker east, on every channel of the green ramp.
    CHECK(west.g > east.g);
    CHECK(west.r > east.r);
    CHECK(west.b > east.b);
}

TEST_CASE("a pixel at the median gets the middle palette entry") {
    std::vector<Feature> cells;
    double v = 1.0;
    for (int iy = 0; iy < 3; ++iy) {
        for (int ix = 0; ix < 3; ++ix) {
            cells.push_back(cell(10.0 * ix, 10.0 * iy, 10.0, v));
            v += 1.0;
        }
    }
    // Values 1..9 in reading order: the median value 5 sits at ix=1, iy=1.
    const RenderOptions o = value_options();
    const RenderResult r = render(cells, o);
    const std::vector<Rgb> p = make_palette(o.bins, o.light, o.dark);
    CHECK(color_at(r, 1, 1) == p[o.bins / 2]);
    CHECK(color_at(r, 0, 0) == p.front());
    CHECK(color_at(r, 2, 2) == p.back());
}

TEST_CASE("cells marked not retained stay blank and outside the quantiles") {
    std::vector<Feature> cells;
    cells.push_back(cell(0, 0, 1, 1.0));
    cells.push_back(cell(1, 0, 1, 2.0));
    cells.push_back(cell(2, 0, 1, 3.0));
    Feature masked = cell(3, 0, 1, 999.0);
    masked.properties["retained"] = false;
    cells.push_back(masked);

    const RenderResult r = render(cells, value_options(4));
    CHECK(color_at(r, 3, 0) == Rgb{255, 255, 255});

    // 999 must not stretch the breakpoints: the maximum is 3.
    CHECK(r.legend_json.find("999") == std::string::npos);
    const std::vector<Rgb> p = make_palette(4, RenderOptions{}.light, RenderOptions{}.dark);
    CHECK(color_at(r, 2, 0) == p.back());
}

TEST_CASE("missing cells render blank") {
    std::vector<Feature> cells;
    cells.push_back(cell(0, 0, 1, 1.0));
    cells.push_back(cell(2, 0, 1, 2.0)); // gap at ix=1
    const RenderResult r = render(cells, value_options(2));
    REQUIRE(r.width == 3);
    CHECK(color_at(r, 1, 0) == Rgb{255, 255, 255});
}

TEST_CASE("malformed artifacts are rejected") {
    CHECK_THROWS_AS(render({}, value_options()), DataError);

    std::vector<Feature> one = {cell(0, 0, 1, 1.0)};
    CHECK_THROWS_AS(render(one, value_options(1)), ConfigError);

    // Property absent under the configured key.
    RenderOptions other = value_options();
    other.property = "absent";
    CHECK_THROWS_AS(render(one, other), DataError);

    // A rectangle that is not square.
    std::vector<Feature> stretched = {cell(0, 0, 1, 1.0)};
    stretched[0].geometry.polygons[0] = make_box(0, 0, 2, 1);
    CHECK_THROWS_AS(render(stretched, value_options()), DataError);

    // Two cells of different sizes.
    std::vector<Feature> mixed = {cell(0, 0, 1, 1.0), cell(5, 0, 2, 2.0)};
    CHECK_THROWS_AS(render(mixed, value_options()), DataError);

    // A cell off the common grid lattice.
    std::vector<Feature> off = {cell(0, 0, 1, 1.0), cell(1.5, 0, 1, 2.0)};
    CHECK_THROWS_AS(render(off, value_options()), DataError);

    // All cells masked leaves nothing to plot.
    std::vector<Feature> all_masked = {cell(0, 0, 1, 1.0)};
    all_masked[0].properties["retained"] = false;
    CHECK_THROWS_AS(render(all_masked, value_options()), DataError);
}

} // TEST_SUITE
