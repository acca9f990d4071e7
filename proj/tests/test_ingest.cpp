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
#include <string>

#include <doctest.h>

#include "yieldmap/errors.hpp"
#include "yieldmap/ingest.hpp"

using namespace yieldmap;

TEST_SUITE("ingest") {

TEST_CASE("three-row csv passes through") {
    const std::string csv = "t,x,y,w,m\n0,0,0,3,0\n1,0,10,3,50\n2,0,20,3,60\n";
    auto records = parse_records(csv, ColumnSchema{});
    REQUIRE(records.size() == 3);
    CHECK(records[0].t == 0);
    CHECK(records[2].t == 2);
    CHECK(records[1].y == 10.0);
    CHECK(records[1].m == 50.0);
    CHECK(records[2].w == 3.0);
}

TEST_CASE("rows arrive shuffled, output is sorted by source time") {
    const std::string shuffled = "t,x,y,w,m\n2,0,20,3,60\n0,0,0,3,0\n1,0,10,3,50\n";
    const std::string ordered = "t,x,y,w,m\n0,0,0,3,0\n1,0,10,3,50\n2,0,20,3,60\n";
    auto a = parse_records(shuffled, ColumnSchema{});
    auto b = parse_records(ordered, ColumnSchema{});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].t == b[i].t);
        CHECK(a[i].x == b[i].x);
        CHECK(a[i].y == b[i].y);
        CHECK(a[i].m == b[i].m);
    }
}

TEST_CASE("non-integer source times become ordinals") {
    const std::string csv = "time,x,y,w,m\n10.5,0,0,3,1\n3.25,0,10,3,2\n7.75,0,20,3,3\n";
    ColumnSchema schema;
    schema.time_column = "time";
    auto records = parse_records(csv, schema);
    REQUIRE(records.size() == 3);
    // Sorted by source time 3.25, 7.75, 10.5.
    CHECK(records[0].m == 2.0);
    CHECK(records[1].m == 3.0);
    CHECK(records[2].m == 1.0);
    CHECK(records[0].t == 0);
    CHECK(records[2].t == 2);
}

TEST_CASE("full swath width column with a half multiplier") {
    const std::string csv = "t,x,y,width,m\n0,0,0,6.10,1\n1,0,10,6.10,2\n";
    ColumnSchema schema;
    schema.swath_column = "width";
    schema.swath_multiplier = 0.5;
    auto records = parse_records(csv, schema);
    CHECK(records[0].w == doctest::Approx(3.05));
    CHECK(records[1].w == doctest::Approx(3.05));
}

TEST_CASE("tab delimiter is detected from the header") {
    const std::string tsv = "t\tx\ty\tw\tm\n0\t100\t200\t3\t1\n1\t100\t210\t3\t2\n";
    auto records = parse_records(tsv, ColumnSchema{});
    REQUIRE(records.size() == 2);
    CHECK(records[1].y == 210.0);
}

TEST_CASE("swath width forward fill") {
    const std::string csv = "t,x,y,w,m\n0,0,0,2.5,1\n1,0,10,,2\n2,0,20,,3\n3,0,30,4,4\n";
    auto records = parse_records(csv, ColumnSchema{});
    CHECK(records[1].w == 2.5);
    CHECK(records[2].w == 2.5);
    CHECK(records[3].w == 4.0);

    const std::string missing_first = "t,x,y,w,m\n0,0,0,,1\n1,0,10,3,2\n";
    CHECK_THROWS_AS(parse_records(missing_first, ColumnSchema{}), DataError);
}

TEST_CASE("schema and data errors carry context") {
    CHECK_THROWS_WITH_AS(parse_records("t,x,y,w\n0,0,0,3\n", ColumnSchema{}),
                         doctest::Contains("'m'"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_records("t,x,y,w,m\n0,0,0,3,1\n1,0,10,3,oops\n", ColumnSchema{}),
                         doctest::Contains("line 3"), DataError);
    CHECK_THROWS_AS(parse_records("t,x,y,w,m\n0,0,0,3,1\n0,0,10,3,2\n", ColumnSchema{}),
                    DataError); // duplicate time
    CHECK_THROWS_AS(parse_records("t,x,y,w,m\n0,0,0,3,1\n", ColumnSchema{}), DataError);
    CHECK_THROWS_AS(parse_records("t,x,y,w,m\n", ColumnSchema{}), DataError);
    CHECK_THROWS_AS(parse_records("t,x,y,w,m\n0,0,0,3,-1\n1,0,9,3,1\n", ColumnSchema{}),
                    DataError); // negative mass
    CHECK_THROWS_AS(parse_records("t,x,y,w,m\n0,0,0,0,1\n1,0,9,3,1\n", ColumnSchema{}),
                    DataError); // zero swath width

    ColumnSchema bad_mult;
    bad_mult.mass_multiplier = 0.0;
    CHECK_THROWS_AS(parse_records("t,x,y,w,m\n0,0,0,3,1\n1,0,9,3,1\n", bad_mult), ConfigError);
}

TEST_CASE("degree-like coordinates are rejected") {
    // A 0.002 x 0.001 degree footprint near Des Moines: classic unprojected
    // lon/lat export.
    const std::string geo =
        "t,x,y,w,m\n0,-93.1021,41.5300,3,1\n1,-93.1020,41.5305,3,2\n2,-93.1019,41.5310,3,3\n";
    CHECK_THROWS_AS(parse_records(geo, ColumnSchema{}), DataError);

    // Small numbers with a field-sized extent are legitimate local meters.
    const std::string local = "t,x,y,w,m\n0,0,0,3,1\n1,0,10,3,2\n2,0,20,3,3\n";
    CHECK(parse_records(local, ColumnSchema{}).size() == 3);
}

TEST_CASE("unit multipliers compose") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> mass(0.1, 100.0);
    std::string csv = "t,x,y,w,m\n";
    for (int i = 0; i < 50; ++i) {
        csv += std::to_string(i) + ",477000," + std::to_string(4598000 + 10 * i) + ",3," +
               std::to_string(mass(rng)) + "\n";
    }
    ColumnSchema scaled;
    scaled.mass_multiplier = 0.453592; // pounds in, kilograms out
    auto a = parse_records(csv, ColumnSchema{});
    auto b = parse_records(csv, scaled);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(b[i].m / scaled.mass_multiplier == doctest::Approx(a[i].m).epsilon(1e-12));
    }
}

TEST_CASE("feasibility scan flags stationary pairs and odd values") {
    std::vector<MonitorRecord> records = {
        {0, 477000.0, 4598000.0, 3.0, 1.0},
        {1, 477000.0, 4598001.9, 3.0, 1.0},  // 1.9 m, typical
        {2, 477000.0, 4598005.9, 3.0, 1.0},  // 4.0 m, typical
        {3, 477000.0, 4598011.9, 3.0, 1.0},  // 6.0 m, typical
    };
    CHECK(validate_geometry_feasibility(records).empty());

    records.push_back({4, 477000.0, 4598011.9, 3.0, 1.0}); // zero displacement
    auto warnings = validate_geometry_feasibility(records);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("stationary") != std::string::npos);

    records.push_back({5, 477000.0, 4598020.0, 55.0, 1.0}); // absurd swath
    records.push_back({6, 477000.0, 4598030.0, 3.0, 99999.0}); // absurd mass
    warnings = validate_geometry_feasibility(records);
    CHECK(warnings.size() == 3);
}

} // TEST_SUITE
