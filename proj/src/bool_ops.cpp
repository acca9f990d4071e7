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

#include "yieldmap/bool_ops.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <vector>

// The overlay engine's legacy rescaling snaps intersection points to an
// integer grid of roughly extent/1e8, which smears cut lines by up to a
// micrometre and leaves real slivers between adjacent tiles. Plain floating
// point placement is accurate to ~1e-13 m at field scale; the snap-retry and
// the area audit below handle the degenerate inputs rescaling was guarding.
#define BOOST_GEOMETRY_NO_ROBUSTNESS

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

#include "yieldmap/errors.hpp"
#include "yieldmap/io.hpp"

namespace bg = boost::geometry;

namespace yieldmap {

namespace {

using BgPoint = bg::model::d2::point_xy<double>;
using BgPolygon = bg::model::polygon<BgPoint, /*ClockWise=*/false, /*Closed=*/true>;
using BgMultiPolygon = bg::model::multi_polygon<BgPolygon>;

BgMultiPolygon to_bg(const MultiPolygon& mp) {
    BgMultiPolygon out;
    out.reserve(mp.polygons.size());
    for (const Polygon& poly : mp.polygons) {
        if (poly.rings.empty()) {
            continue;
        }
        BgPolygon bp;
        for (const Point& p : poly.rings.front()) {
            bg::append(bp.outer(), BgPoint(p.x, p.y));
        }
        bp.inners().resize(poly.rings.size() - 1);
        for (std::size_t r = 1; r < poly.rings.size(); ++r) {
            for (const Point& p : poly.rings[r]) {
                bg::append(bp.inners()[r - 1], BgPoint(p.x, p.y));
            }
        }
        bg::correct(bp);
        out.push_back(std::move(bp));
    }
    return out;
}

MultiPolygon from_bg(const BgMultiPolygon& bmp) {
    MultiPolygon out;
    out.polygons.reserve(bmp.size());
    for (const BgPolygon& bp : bmp) {
        if (std::abs(bg::area(bp)) < kSliverAreaM2) {
            continue;
        }
        Polygon poly;
        Ring exterior;
        exterior.reserve(bp.outer().size());
        for (const BgPoint& p : bp.outer()) {
            exterior.push_back({bg::get<0>(p), bg::get<1>(p)});
        }
        poly.rings.push_back(std::move(exterior));
        for (const auto& inner : bp.inners()) {
            if (std::abs(bg::area(bg::model::ring<BgPoint, false, true>(inner.begin(), inner.end()))) <
                kSliverAreaM2) {
                continue;
            }
            Ring hole;
            hole.reserve(inner.size());
            for (const BgPoint& p : inner) {
                hole.push_back({bg::get<0>(p), bg::get<1>(p)});
            }
            poly.rings.push_back(std::move(hole));
        }
        out.polygons.push_back(std::move(poly));
    }
    normalize_orientation(out);
    return out;
}

MultiPolygon snapped(const MultiPolygon& mp) {
    MultiPolygon out = mp;
    const double inv = 1.0 / kSnapToleranceM;
    for (Polygon& poly : out.polygons) {
        for (Ring& ring : poly.rings) {
            for (Point& p : ring) {
                p.x = std::round(p.x * inv) * kSnapToleranceM;
                p.y = std::round(p.y * inv) * kSnapToleranceM;
            }
        }
    }
    return out;
}

enum class Op { kIntersection, kDifference, kUnion };

BgMultiPolygon apply(const BgMultiPolygon& a, const BgMultiPolygon& b, Op op) {
    BgMultiPolygon out;
    switch (op) {
        case Op::kIntersection:
            bg::intersection(a, b, out);
            break;
        case Op::kDifference:
            bg::difference(a, b, out);
            break;
        case Op::kUnion:
            bg::union_(a, b, out);
            break;
    }
    return out;
}

std::atomic<std::size_t> g_retry_count{0};

// The overlay engine can fail silently: operands that only touch along
// near-coincident boundaries may come back classified as nested instead of
// disjoint, with no exception thrown. Every result is therefore audited
// against the fan-decomposition overlap area, which is computed by entirely
// separate code and degrades continuously near degeneracy. Anything beyond
// this tolerance is a misclassification, not roundoff: benign disagreement
// between the two methods stays below 1e-5 m^2 even on adversarial inputs.
constexpr double kAuditAbsTolM2 = 1e-3;

// Above this fan-pair count the exact audit is too expensive; fall back to
// coarse area bounds that still catch swapped or dropped operands.
constexpr std::size_t kMaxAuditPairs = std::size_t{1} << 21;

bool audit_ok(const MultiPolygon& a, const MultiPolygon& b, Op op, const MultiPolygon& r) {
    const double area_a = area(a);
    const double area_b = area(b);
    const double area_r = r.empty() ? 0.0 : area(r);
    const double tol = kAuditAbsTolM2 + 1e-9 * (area_a + area_b);

    if (fan_triangle_count(a) * fan_triangle_count(b) <= kMaxAuditPairs) {
        const double shared = overlap_area(a, b);
        double expected = 0.0;
        switch (op) {
            case Op::kIntersection:
                expected = shared;
                break;
            case Op::kDifference:
                expected = area_a - shared;
                break;
            case Op::kUnion:
                expected = area_a + area_b - shared;
                break;
        }
        return std::abs(area_r - expected) <= tol;
    }

    switch (op) {
        case Op::kIntersection:
            return area_r <= std::min(area_a, area_b) + tol;
        case Op::kDifference:
            return area_a - area_b - tol <= area_r && area_r <= area_a + tol;
        case Op::kUnion:
            return std::max(area_a, area_b) - tol <= area_r &&
                   area_r <= area_a + area_b + tol;
    }
    return false;
}

MultiPolygon overlay(const MultiPolygon& a, const MultiPolygon& b, Op op, const char* name) {
    try {
        MultiPolygon first = from_bg(apply(to_bg(a), to_bg(b), op));
        if (audit_ok(a, b, op, first)) {
            return first;
        }
    } catch (const std::exception&) {
        // Retry below with snapped coordinates.
    }
    g_retry_count.fetch_add(1, std::memory_order_relaxed);

    const MultiPolygon sa = snapped(a);
    const MultiPolygon sb = snapped(b);
    try {
        MultiPolygon second = from_bg(apply(to_bg(sa), to_bg(sb), op));
        if (audit_ok(sa, sb, op, second)) {
            return second;
        }
        std::ostringstream oss;
        oss << name << " result failed the area audit even after snapping; a=" << to_wkt(a)
            << "; b=" << to_wkt(b);
        throw GeometryError(oss.str());
    } catch (const GeometryError&) {
        throw;
    } catch (const std::exception& e) {
        std::ostringstream oss;
        oss << name << " failed after snapping retry: " << e.what() << "; a=" << to_wkt(a)
            << "; b=" << to_wkt(b);
        throw GeometryError(oss.str());
    }
}

} // namespace

std::size_t overlay_retry_count() {
    return g_retry_count.load(std::memory_order_relaxed);
}

void reset_overlay_retry_count() {
    g_retry_count.store(0, std::memory_order_relaxed);
}

MultiPolygon to_multi(const Polygon& poly) {
    MultiPolygon mp;
    if (!poly.empty()) {
        mp.polygons.push_back(poly);
    }
    return mp;
}

MultiPolygon intersection(const MultiPolygon& a, const MultiPolygon& b) {
    if (a.empty() || b.empty()) {
        return {};
    }
    if (!bbox(a).intersects(bbox(b))) {
        return {};
    }
    return overlay(a, b, Op::kIntersection, "intersection");
}

MultiPolygon difference(const MultiPolygon& a, const MultiPolygon& b) {
    if (a.empty()) {
        return {};
    }
    if (b.empty()) {
        return a;
    }
    if (!bbox(a).intersects(bbox(b))) {
        return a;
    }
    return overlay(a, b, Op::kDifference, "difference");
}

MultiPolygon intersection(const Polygon& a, const Polygon& b) {
    return intersection(to_multi(a), to_multi(b));
}

MultiPolygon difference(const Polygon& a, const Polygon& b) {
    return difference(to_multi(a), to_multi(b));
}

MultiPolygon union_all(std::span<const MultiPolygon> parts) {
    // Balanced pairwise merging keeps intermediate operands small.
    std::vector<MultiPolygon> level(parts.begin(), parts.end());
    while (level.size() > 1) {
        std::vector<MultiPolygon> next;
        next.reserve((level.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
            if (level[i].empty()) {
                next.push_back(std::move(level[i + 1]));
            } else if (level[i + 1].empty()) {
                next.push_back(std::move(level[i]));
            } else {
                next.push_back(overlay(level[i], level[i + 1], Op::kUnion, "union"));
            }
        }
        if (level.size() % 2 == 1) {
            next.push_back(std::move(level.back()));
        }
        level.swap(next);
    }
    return level.empty() ? MultiPolygon{} : std::move(level.front());
}

bool is_valid(const MultiPolygon& mp) {
    return bg::is_valid(to_bg(mp));
}

} // namespace yieldmap
