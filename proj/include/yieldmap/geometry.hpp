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

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace yieldmap {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }

struct BBox {
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    double max_x = -std::numeric_limits<double>::infinity();
    double max_y = -std::numeric_limits<double>::infinity();

    bool empty() const { return min_x > max_x || min_y > max_y; }

    void expand(Point p) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }

    void expand(const BBox& b) {
        min_x = std::min(min_x, b.min_x);
        min_y = std::min(min_y, b.min_y);
        max_x = std::max(max_x, b.max_x);
        max_y = std::max(max_y, b.max_y);
    }

    bool intersects(const BBox& b) const {
        return !empty() && !b.empty() && min_x <= b.max_x && b.min_x <= max_x &&
               min_y <= b.max_y && b.min_y <= max_y;
    }

    bool contains(Point p) const {
        return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
    }
};

// A ring is a closed vertex chain: front() == back(). Exterior rings are
// counter-clockwise, hole rings clockwise, so the signed areas add up.
using Ring = std::vector<Point>;

struct Polygon {
    std::vector<Ring> rings; // rings[0] exterior, the rest holes

    bool empty() const { return rings.empty(); }
    const Ring& exterior() const { return rings.front(); }
};

struct MultiPolygon {
    std::vector<Polygon> polygons;

    bool empty() const { return polygons.empty(); }
};

// Shoelace formula; sign follows vertex order (CCW positive).
double signed_ring_area(const Ring& ring);

// Total area with holes subtracted. Throws GeometryError on an open or
// too-short ring or non-finite coordinates.
double area(const Polygon& poly);
double area(const MultiPolygon& mp);

BBox bbox(const Ring& ring);
BBox bbox(const Polygon& poly);
BBox bbox(const MultiPolygon& mp);

// Even-odd rule over all rings, so holes are excluded. Points exactly on an
// edge may land on either side.
bool contains(const Polygon& poly, Point p);
bool contains(const MultiPolygon& mp, Point p);

double perimeter(const Polygon& poly);

// Convenience constructors.
Polygon make_box(double min_x, double min_y, double max_x, double max_y);
Polygon make_polygon(std::vector<Point> exterior); // closes the ring if needed

// Orients exterior rings CCW and holes CW, in place.
void normalize_orientation(Polygon& poly);
void normalize_orientation(MultiPolygon& mp);

// Area of intersection between a geometry and a convex clip window given as a
// CCW ring (unclosed or closed). Exact polygon clipping is not materialized;
// only the signed clipped area is accumulated, which is all the apportioning
// path needs.
double clip_area_convex(const Ring& subject, const Ring& window_ccw);
double clip_area_convex(const Polygon& poly, const Ring& window_ccw);
double clip_area_convex(const MultiPolygon& mp, const Ring& window_ccw);

// Same, specialized to an axis-aligned box.
double clip_area_box(const MultiPolygon& mp, const BBox& box);
double clip_area_box(const Polygon& poly, const BBox& box);

// Area of intersection between two arbitrary polygon sets, computed by fan
// decomposition into signed triangles and pairwise convex triangle clipping.
// Deliberately shares no code with the overlay engine so the two can audit
// each other. The result is continuous in the vertex coordinates: inputs
// that touch along near-coincident boundaries perturb the area by at most
// boundary length times the coordinate gap, never by a topology flip.
// Preconditions: closed simple rings, exterior CCW, holes CW and nested.
double overlap_area(const MultiPolygon& a, const MultiPolygon& b);
double overlap_area(const Polygon& a, const Polygon& b);

// Number of fan triangles overlap_area would decompose a geometry into;
// callers use it to bound the cost of a pairwise check before paying it.
std::size_t fan_triangle_count(const MultiPolygon& mp);

} // namespace yieldmap
