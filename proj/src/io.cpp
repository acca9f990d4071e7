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

#include "yieldmap/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "yieldmap/errors.hpp"

namespace yieldmap {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

void append_ring_wkt(std::string& out, const Ring& ring) {
    out += '(';
    for (std::size_t i = 0; i < ring.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += format_double(ring[i].x);
        out += ' ';
        out += format_double(ring[i].y);
    }
    out += ')';
}

void append_polygon_body(std::string& out, const Polygon& poly) {
    out += '(';
    for (std::size_t r = 0; r < poly.rings.size(); ++r) {
        if (r > 0) {
            out += ',';
        }
        append_ring_wkt(out, poly.rings[r]);
    }
    out += ')';
}

} // namespace

std::string to_wkt(const Polygon& poly) {
    if (poly.empty()) {
        return "POLYGON EMPTY";
    }
    std::string out = "POLYGON";
    append_polygon_body(out, poly);
    return out;
}

std::string to_wkt(const MultiPolygon& mp) {
    if (mp.empty()) {
        return "MULTIPOLYGON EMPTY";
    }
    std::string out = "MULTIPOLYGON(";
    for (std::size_t i = 0; i < mp.polygons.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        append_polygon_body(out, mp.polygons[i]);
    }
    out += ')';
    return out;
}

namespace {

struct WktParser {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
    }

    bool consume(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!consume(c)) {
            throw DataError("WKT parse error: expected '" + std::string(1, c) + "' at offset " +
                            std::to_string(pos));
        }
    }

    bool consume_word(std::string_view word) {
        skip_ws();
        if (text.size() - pos >= word.size()) {
            for (std::size_t i = 0; i < word.size(); ++i) {
                if (std::toupper(static_cast<unsigned char>(text[pos + i])) != word[i]) {
                    return false;
                }
            }
            pos += word.size();
            return true;
        }
        return false;
    }

    double number() {
        skip_ws();
        double v = 0.0;
        auto res = std::from_chars(text.data() + pos, text.data() + text.size(), v);
        if (res.ec != std::errc()) {
            throw DataError("WKT parse error: bad number at offset " + std::to_string(pos));
        }
        pos = static_cast<std::size_t>(res.ptr - text.data());
        return v;
    }

    Ring ring() {
        expect('(');
        Ring r;
        do {
            double x = number();
            double y = number();
            r.push_back({x, y});
        } while (consume(','));
        expect(')');
        if (r.size() >= 2 && !(r.front() == r.back())) {
            r.push_back(r.front());
        }
        return r;
    }

    Polygon polygon_body() {
        expect('(');
        Polygon poly;
        do {
            poly.rings.push_back(ring());
        } while (consume(','));
        expect(')');
        return poly;
    }
};

} // namespace

MultiPolygon parse_wkt(std::string_view text) {
    WktParser p{text};
    MultiPolygon out;
    if (p.consume_word("MULTIPOLYGON")) {
        if (p.consume_word("EMPTY")) {
            return out;
        }
        p.expect('(');
        do {
            out.polygons.push_back(p.polygon_body());
        } while (p.consume(','));
        p.expect(')');
    } else if (p.consume_word("POLYGON")) {
        if (p.consume_word("EMPTY")) {
            return out;
        }
        out.polygons.push_back(p.polygon_body());
    } else {
        throw DataError("WKT parse error: expected POLYGON or MULTIPOLYGON");
    }
    normalize_orientation(out);
    return out;
}

namespace {

nlohmann::json ring_to_json(const Ring& ring) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Point& p : ring) {
        arr.push_back({p.x, p.y});
    }
    return arr;
}

nlohmann::json polygon_coords(const Polygon& poly) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Ring& ring : poly.rings) {
        arr.push_back(ring_to_json(ring));
    }
    return arr;
}

Ring ring_from_json(const nlohmann::json& arr) {
    Ring r;
    r.reserve(arr.size());
    for (const auto& pt : arr) {
        r.push_back({pt.at(0).get<double>(), pt.at(1).get<double>()});
    }
    if (r.size() >= 2 && !(r.front() == r.back())) {
        r.push_back(r.front());
    }
    return r;
}

Polygon polygon_from_json(const nlohmann::json& coords) {
    Polygon poly;
    for (const auto& ring : coords) {
        poly.rings.push_back(ring_from_json(ring));
    }
    return poly;
}

} // namespace

std::string to_geojson(const std::vector<Feature>& features) {
    nlohmann::json root;
    root["type"] = "FeatureCollection";
    nlohmann::json& feats = root["features"] = nlohmann::json::array();
    for (const Feature& f : features) {
        nlohmann::json jf;
        jf["type"] = "Feature";
        if (f.geometry.polygons.size() == 1) {
            jf["geometry"] = {{"type", "Polygon"},
                              {"coordinates", polygon_coords(f.geometry.polygons.front())}};
        } else {
            nlohmann::json coords = nlohmann::json::array();
            for (const Polygon& poly : f.geometry.polygons) {
                coords.push_back(polygon_coords(poly));
            }
            jf["geometry"] = {{"type", "MultiPolygon"}, {"coordinates", coords}};
        }
        nlohmann::json& props = jf["properties"] = nlohmann::json::object();
        for (const auto& [key, value] : f.properties) {
            std::visit([&](const auto& v) { props[key] = v; }, value);
        }
        feats.push_back(std::move(jf));
    }
    return root.dump();
}

std::vector<Feature> parse_geojson(std::string_view text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("GeoJSON parse error: ") + e.what());
    }
    if (root.value("type", "") != "FeatureCollection") {
        throw DataError("GeoJSON parse error: expected a FeatureCollection");
    }
    std::vector<Feature> out;
    for (const auto& jf : root.at("features")) {
        Feature f;
        const auto& geom = jf.at("geometry");
        std::string type = geom.at("type").get<std::string>();
        if (type == "Polygon") {
            f.geometry.polygons.push_back(polygon_from_json(geom.at("coordinates")));
        } else if (type == "MultiPolygon") {
            for (const auto& coords : geom.at("coordinates")) {
                f.geometry.polygons.push_back(polygon_from_json(coords));
            }
        } else {
            throw DataError("GeoJSON parse error: unsupported geometry type " + type);
        }
        normalize_orientation(f.geometry);
        if (jf.contains("properties") && jf["properties"].is_object()) {
            for (const auto& [key, value] : jf["properties"].items()) {
                if (value.is_boolean()) {
                    f.properties[key] = value.get<bool>();
                } else if (value.is_number_integer()) {
                    f.properties[key] = value.get<long long>();
                } else if (value.is_number()) {
                    f.properties[key] = value.get<double>();
                } else if (value.is_string()) {
                    f.properties[key] = value.get<std::string>();
                }
            }
        }
        out.push_back(std::move(f));
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open file: " + path);
    }
    std::ostringstream oss;
    oss << in.rdbuf();
    return oss.str();
}

void write_file_atomic(const std::string& path, std::string_view content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) {
        fs::create_directories(target.parent_path());
    }
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw DataError("cannot write file: " + tmp.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw DataError("short write: " + tmp.string());
        }
    }
    fs::rename(tmp, target);
}

} // namespace yieldmap
