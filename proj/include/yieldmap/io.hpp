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

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "yieldmap/geometry.hpp"

namespace yieldmap {

// Shortest round-trip decimal representation.
std::string format_double(double v);

// WKT, POLYGON / MULTIPOLYGON / *EMPTY.
std::string to_wkt(const Polygon& poly);
std::string to_wkt(const MultiPolygon& mp);
MultiPolygon parse_wkt(std::string_view text);

// GeoJSON features limited to what the stage dumps need: polygonal geometry
// plus a flat property map.
using PropertyValue = std::variant<double, long long, bool, std::string>;

struct Feature {
    MultiPolygon geometry;
    std::map<std::string, PropertyValue> properties;
};

std::string to_geojson(const std::vector<Feature>& features);
std::vector<Feature> parse_geojson(std::string_view text);

// Whole-file helpers. write_file_atomic writes to a sibling temp file and
// renames it over the target.
std::string read_file(const std::string& path);
void write_file_atomic(const std::string& path, std::string_view content);

} // namespace yieldmap
