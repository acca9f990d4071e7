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

#include "yieldmap/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "yieldmap/errors.hpp"

namespace yieldmap {

namespace {

void check_ring(const Ring& ring) {
    if (ring.size() < 4) {
        throw GeometryError("ring must have at least 4 vertices (closed triangle)");
    }
    if (!(ring.front() == ring.back())) {
        throw GeometryError("ring is not closed (first vertex != last vertex)");
    }
    for (const Point& p : ring) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw GeometryError("ring has non-finite coordinates");
        }
    }
}

} // namespace

double signed_ring_area(const Ring& ring) {
    if (ring.size() < 2) {
        return 0.0;
    }
    // Shoelace relative to the first vertex. On projected coordinates the
    // raw cross products are ~1e12 and cancellation costs ~1e-4 m^2 of
    // accuracy; translating first keeps the products at the extent scale.
    const Point o = ring.front();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
        const double ax = ring[i].x - o.x;
        const double ay = ring[i].y - o.y;
        const double bx = ring[i + 1].x - o.x;
        const double by = ring[i + 1].y - o.y;
        acc += ax * by - bx * ay;
    }
    return 0.5 * acc;
}

double area(const Polygon& poly) {
    double acc = 0.0;
    for (const Ring& ring : poly.rings) {
        check_ring(ring);
        acc += signed_ring_area(ring);
    }
    if (acc < 0.0) {
        throw GeometryError("polygon has negative total area; ring orientation is wrong");
    }
    return acc;
}

double area(const MultiPolygon& mp) {
    double acc = 0.0;
    for (const Polygon& poly : mp.polygons) {
        acc += area(poly);
    }
    return acc;
}

BBox bbox(const Ring& ring) {
    BBox b;
    for (const Point& p : ring) {
        b.expand(p);
    }
    return b;
}

BBox bbox(const Polygon& poly) {
    BBox b;
    if (!poly.rings.empty()) {
        b = bbox(poly.rings.front());
    }
    return b;
}

BBox bbox(const MultiPolygon& mp) {
    BBox b;
    for (const Polygon& poly : mp.polygons) {
        b.expand(bbox(poly));
    }
    return b;
}

namespace {

// Ray casting toward +x over one ring.
bool ring_crossings_odd(const Ring& ring, Point p) {
    bool inside = false;
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
        const Point& a = ring[i];
        const Point& b = ring[i + 1];
        if ((a.y > p.y) != (b.y > p.y)) {
            double x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (x_cross > p.x) {
                inside = !inside;
            }
        }
    }
    return inside;
}

} // namespace

bool contains(const Polygon& poly, Point p) {
    bool inside = false;
    for (const Ring& ring : poly.rings) {
        if (ring_crossings_odd(ring, p)) {
            inside = !inside;
        }
    }
    return inside;
}

bool contains(const MultiPolygon& mp, Point p) {
    for (const Polygon& poly : mp.polygons) {
        if (contains(poly, p)) {
            return true;
        }
    }
    return false;
}

double perimeter(const Polygon& poly) {
    double acc = 0.0;
    for (const Ring& ring : poly.rings) {
        for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
            acc += norm(ring[i + 1] - ring[i]);
        }
    }
    return acc;
}

Polygon make_box(double min_x, double min_y, double max_x, double max_y) {
    Polygon poly;
    poly.rings.push_back({{min_x, min_y}, {max_x, min_y}, {max_x, max_y}, {min_x, max_y}, {min_x, min_y}});
    return poly;
}

Polygon make_polygon(std::vector<Point> exterior) {
    if (!exterior.empty() && !(exterior.front() == exterior.back())) {
        exterior.push_back(exterior.front());
    }
    Polygon poly;
    poly.rings.push_back(std::move(exterior));
    return poly;
}

void normalize_orientation(Polygon& poly) {
    for (std::size_t r = 0; r < poly.rings.size(); ++r) {
        double sa = signed_ring_area(poly.rings[r]);
        bool want_ccw = (r == 0);
        if ((want_ccw && sa < 0.0) || (!want_ccw && sa > 0.0)) {
            std::reverse(poly.rings[r].begin(), poly.rings[r].end());
        }
    }
}

void normalize_orientation(MultiPolygon& mp) {
    for (Polygon& poly : mp.polygons) {
        normalize_orientation(poly);
    }
}

namespace {

// Sutherland-Hodgman against one half-plane (left of a->b). The clipped ring
// of a concave subject may contain zero-width bridges; they cancel in the
// shoelace sum, so the area remains correct.
void clip_half_plane(const std::vector<Point>& in, Point a, Point b, std::vector<Point>& out) {
    out.clear();
    if (in.empty()) {
        return;
    }
    const double ex = b.x - a.x;
    const double ey = b.y - a.y;
    auto side = [&](Point p) { return ex * (p.y - a.y) - ey * (p.x - a.x); };
    Point prev = in.back();
    double prev_side = side(prev);
    for (const Point& cur : in) {
        double cur_side = side(cur);
        if (cur_side >= 0.0) {
            if (prev_side < 0.0) {
                double t = prev_side / (prev_side - cur_side);
                out.push_back({prev.x + t * (cur.x - prev.x), prev.y + t * (cur.y - prev.y)});
            }
            out.push_back(cur);
        } else if (prev_side >= 0.0) {
            double t = prev_side / (prev_side - cur_side);
            out.push_back({prev.x + t * (cur.x - prev.x), prev.y + t * (cur.y - prev.y)});
        }
        prev = cur;
        prev_side = cur_side;
    }
}

double signed_open_ring_area(const std::vector<Point>& pts) {
    if (pts.size() < 3) {
        return 0.0;
    }
    const Point o = pts.front();
    double acc = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Point& p = pts[i];
        const Point& q = pts[(i + 1) % pts.size()];
        acc += (p.x - o.x) * (q.y - o.y) - (q.x - o.x) * (p.y - o.y);
    }
    return 0.5 * acc;
}

} // namespace

double clip_area_convex(const Ring& subject, const Ring& window_ccw) {
    if (subject.size() < 4 || window_ccw.size() < 3) {
        return 0.0;
    }
    // Work on the open chain; the ring is closed so drop the repeated vertex.
    std::vector<Point> cur(subject.begin(), subject.end() - 1);
    std::vector<Point> next;
    std::size_t nw = window_ccw.size();
    if (window_ccw.front() == window_ccw.back()) {
        --nw;
    }
    for (std::size_t i = 0; i < nw && !cur.empty(); ++i) {
        clip_half_plane(cur, window_ccw[i], window_ccw[(i + 1) % nw], next);
        cur.swap(next);
    }
    return signed_open_ring_area(cur);
}

double clip_area_convex(const Polygon& poly, const Ring& window_ccw) {
    double acc = 0.0;
    for (const Ring& ring : poly.rings) {
        acc += clip_area_convex(ring, window_ccw);
    }
    return acc;
}

double clip_area_convex(const MultiPolygon& mp, const Ring& window_ccw) {
    double acc = 0.0;
    for (const Polygon& poly : mp.polygons) {
        acc += clip_area_convex(poly, window_ccw);
    }
    return acc;
}

double clip_area_box(const Polygon& poly, const BBox& box) {
    Ring window = {{box.min_x, box.min_y}, {box.max_x, box.min_y}, {box.max_x, box.max_y}, {box.min_x, box.max_y}};
    return clip_area_convex(poly, window);
}

double clip_area_box(const MultiPolygon& mp, const BBox& box) {
    double acc = 0.0;
    for (const Polygon& poly : mp.polygons) {
        acc += clip_area_box(poly, box);
    }
    return acc;
}

namespace {

// One signed fan triangle: (apex, p, q) translated to local coordinates.
struct FanTri {
    Point a, b, c;     // vertices, local frame
    double signed_area; // 0.5 * cross(b-a, c-a); sign carries the winding
    BBox box;
};

// Decompose every ring into a triangle fan anchored at its first vertex.
// Summing the rings' signed windings reproduces the polygon indicator:
// exterior rings contribute +1 inside, holes -1, so the fan triangles of
// all rings taken together integrate any function over the polygon.
void fan_rings(const MultiPolygon& mp, Point origin, std::vector<FanTri>& out) {
    for (const Polygon& poly : mp.polygons) {
        for (const Ring& ring : poly.rings) {
            if (ring.size() < 4) {
                continue;
            }
            const std::size_t n = ring.size() - 1; // drop duplicate closer
            const Point a = ring[0] - origin;
            for (std::size_t i = 1; i + 1 < n; ++i) {
                FanTri t;
                t.a = a;
                t.b = ring[i] - origin;
                t.c = ring[i + 1] - origin;
                const double cr =
                    (t.b.x - t.a.x) * (t.c.y - t.a.y) - (t.c.x - t.a.x) * (t.b.y - t.a.y);
                t.signed_area = 0.5 * cr;
                if (t.signed_area == 0.0) {
                    continue;
                }
                t.box.expand(t.a);
                t.box.expand(t.b);
                t.box.expand(t.c);
                out.push_back(t);
            }
        }
    }
}

// Unsigned area of the intersection of two triangles, via three half-plane
// clips of one against the other. Buffers are sized for the worst case of a
// triangle gaining one vertex per clip stage.
double tri_overlap(const FanTri& s, const FanTri& w) {
    Point win0 = w.a, win1 = w.b, win2 = w.c;
    if (w.signed_area < 0.0) {
        std::swap(win1, win2); // window must wind CCW for left-side clipping
    }
    const Point win[3] = {win0, win1, win2};

    Point cur[8] = {s.a, s.b, s.c};
    Point next[8];
    int ncur = 3;
    for (int k = 0; k < 3 && ncur > 0; ++k) {
        const Point p = win[k];
        const Point q = win[(k + 1) % 3];
        const double dx = q.x - p.x;
        const double dy = q.y - p.y;
        int nn = 0;
        for (int i = 0; i < ncur; ++i) {
            const Point u = cur[i];
            const Point v = cur[(i + 1) % ncur];
            const double du = dx * (u.y - p.y) - dy * (u.x - p.x);
            const double dv = dx * (v.y - p.y) - dy * (v.x - p.x);
            if (du >= 0.0) {
                next[nn++] = u;
            }
            if ((du >= 0.0) != (dv >= 0.0)) {
                const double t = du / (du - dv);
                next[nn++] = {u.x + t * (v.x - u.x), u.y + t * (v.y - u.y)};
            }
        }
        for (int i = 0; i < nn; ++i) {
            cur[i] = next[i];
        }
        ncur = nn;
    }
    if (ncur < 3) {
        return 0.0;
    }
    double acc = 0.0;
    for (int i = 0; i < ncur; ++i) {
        const Point u = cur[i];
        const Point v = cur[(i + 1) % ncur];
        acc += u.x * v.y - v.x * u.y;
    }
    return std::abs(0.5 * acc);
}

} // namespace

std::size_t fan_triangle_count(const MultiPolygon& mp) {
    std::size_t n = 0;
    for (const Polygon& poly : mp.polygons) {
        for (const Ring& ring : poly.rings) {
            if (ring.size() >= 4) {
                n += ring.size() - 3;
            }
        }
    }
    return n;
}

double overlap_area(const MultiPolygon& a, const MultiPolygon& b) {
    if (a.empty() || b.empty()) {
        return 0.0;
    }
    const BBox ba = bbox(a);
    const BBox bb = bbox(b);
    if (!ba.intersects(bb)) {
        return 0.0;
    }
    // A shared local frame keeps the cross products at field extent instead
    // of projected-coordinate magnitude.
    const Point origin{ba.min_x, ba.min_y};

    std::vector<FanTri> fa;
    std::vector<FanTri> fb;
    fa.reserve(fan_triangle_count(a));
    fb.reserve(fan_triangle_count(b));
    fan_rings(a, origin, fa);
    fan_rings(b, origin, fb);

    double total = 0.0;
    for (const FanTri& ta : fa) {
        for (const FanTri& tb : fb) {
            if (!ta.box.intersects(tb.box)) {
                continue;
            }
            const double ov = tri_overlap(ta, tb);
            if (ov != 0.0) {
                const double sign =
                    (ta.signed_area < 0.0) == (tb.signed_area < 0.0) ? 1.0 : -1.0;
                total += sign * ov;
            }
        }
    }
    return total;
}

double overlap_area(const Polygon& a, const Polygon& b) {
    MultiPolygon ma;
    MultiPolygon mb;
    ma.polygons.push_back(a);
    mb.polygons.push_back(b);
    return overlap_area(ma, mb);
}

} // namespace yieldmap
