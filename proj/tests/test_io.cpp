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

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <random>

#include <doctest.h>

#include "yieldmap/errors.hpp"
#include "yieldmap/geometry.hpp"
#include "yieldmap/io.hpp"

using namespace yieldmap;

TEST_SUITE("io") {

TEST_CASE("format_double survives the round trip bit for bit") {
    std::vector<double> cases = {0.0,    1.0,     0.1,        1.0 / 3.0, -2.5e-17,
                                 1e300,  -1e-300, 123456.789, 477000.03, 4598000.000001};
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1e7, 1e7);
    for (int i = 0; i < 200; ++i) {
        cases.push_back(u(rng));
    }
    for (double v : cases) {
        std::string s = format_double(v);
        double back = 0.0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), back);
        REQUIRE(res.ec == std::errc());
        CHECK(back == v);
    }
}

TEST_CASE("wkt round trip for a polygon with a hole") {
    Polygon donut = make_box(0, 0, 10, 10);
    donut.rings.push_back({{4, 4}, {4, 6}, {6, 6}, {6, 4}, {4, 4}});
    MultiPolygon mp;
    mp.polygons.push_back(donut);

    std::string wkt = to_wkt(mp);
    MultiPolygon back = parse_wkt(wkt);
    REQUIRE(back.polygons.size() == 1);
    REQUIRE(back.polygons[0].rings.size() == 2);
    CHECK(area(back) == doctest::Approx(area(mp)));
    CHECK(to_wkt(back) == wkt);
}

TEST_CASE("wkt handles empties and single polygons") {
    CHECK(to_wkt(MultiPolygon{}) == "MULTIPOLYGON EMPTY");
    CHECK(parse_wkt("MULTIPOLYGON EMPTY").empty());
    CHECK(parse_wkt("POLYGON EMPTY").empty());

    MultiPolygon one = parse_wkt("POLYGON((0 0,4 0,4 4,0 4,0 0))");
    CHECK(area(one) == doctest::Approx(16.0));
    CHECK(to_wkt(one.polygons.front()) == "POLYGON((0 0,4 0,4 4,0 4,0 0))");
}

TEST_CASE("wkt parser rejects garbage") {
    CHECK_THROWS_AS(parse_wkt("LINESTRING(0 0,1 1)"), DataError);
    CHECK_THROWS_AS(parse_wkt("POLYGON((0 0,1 x))"), DataError);
    CHECK_THROWS_AS(parse_wkt("POLYGON((0 0,1 1"), DataError);
}

TEST_CASE("wkt round trips random coordinates exactly") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int iter = 0; iter < 100; ++iter) {
        Polygon p = make_polygon({{u(rng), u(rng)}, {u(rng) + 2e6, u(rng)}, {u(rng), u(rng) + 3e6}});
        normalize_orientation(p);
        MultiPolygon mp;
        mp.polygons.push_back(p);
        MultiPolygon back = parse_wkt(to_wkt(mp));
        REQUIRE(back.polygons.size() == 1);
        const Ring& r0 = mp.polygons[0].rings[0];
        const Ring& r1 = back.polygons[0].rings[0];
        REQUIRE(r0.size() == r1.size());
        for (std::size_t i = 0; i < r0.size(); ++i) {
            CHECK(r0[i] == r1[i]);
        }
    }
}

TEST_CASE("geojson round trip preserves geometry and properties") {
    Feature f;
    Polygon donut = make_box(0, 0, 8, 8);
    donut.rings.push_back({{2, 2}, {2, 3}, {3, 3}, {3, 2}, {2, 2}});
    f.geometry.polygons.push_back(donut);
    f.geometry.polygons.push_back(make_box(10, 10, 12, 11));
    f.properties["mass_kg"] = 12.75;
    f.properties["t"] = static_cast<long long>(42);
    f.properties["merged"] = true;
    f.properties["source"] = std::string("combine_a");

    Feature single;
    single.geometry.polygons.push_back(make_box(-5, -5, -4, -4));
    single.properties["t"] = static_cast<long long>(1);

    std::string text = to_geojson({f, single});
    std::vector<Feature> back = parse_geojson(text);
    REQUIRE(back.size() == 2);
    CHECK(area(back[0].geometry) == doctest::Approx(area(f.geometry)));
    CHECK(std::get<double>(back[0].properties.at("mass_kg")) == 12.75);
    CHECK(std::get<long long>(back[0].properties.at("t")) == 42);
    CHECK(std::get<bool>(back[0].properties.at("merged")) == true);
    CHECK(std::get<std::string>(back[0].properties.at("source")) == "combine_a");
    CHECK(back[1].geometry.polygons.size() == 1);
    CHECK(back[1].geometry.polygons[0].rings.size() == 1);
}

TEST_CASE("geojson parser rejects non-collections and odd geometries") {
    CHECK_THROWS_AS(parse_geojson("{\"type\":\"Feature\"}"), DataError);
    CHECK_THROWS_AS(parse_geojson("not json at all"), DataError);
    CHECK_THROWS_AS(
        parse_geojson("{\"type\":\"FeatureCollection\",\"features\":[{\"type\":\"Feature\","
                      "\"geometry\":{\"type\":\"Point\",\"coordinates\":[0,0]},\"properties\":{}}]}"),
        DataError);
}

TEST_CASE("atomic write then read returns the same bytes") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "yieldmap_io_test";
    fs::remove_all(dir);
    std::string path = (dir / "nested" / "out.txt").string();
    std::string content = "line one\nline two\n\x01\x02 binary ok\n";
    write_file_atomic(path, content);
    CHECK(read_file(path) == content);
    // Overwrite in place.
    write_file_atomic(path, "short");
    CHECK(read_file(path) == "short");
    CHECK_THROWS_AS(read_file((dir / "missing.txt").string()), DataError);
    fs::remove_all(dir);
}

} // TEST_SUITE
