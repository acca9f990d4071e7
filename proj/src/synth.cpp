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

#include "yieldmap/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

#include "yieldmap/errors.hpp"
#include "yieldmap/io.hpp"
#include "yieldmap/linalg.hpp"

namespace yieldmap {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Destructive-sampling quadrature cell edge. An order of magnitude below the
// analysis grids, so quadrature error is negligible next to any tolerance
// the pipeline is tested against.
constexpr double kQuadCell = 0.25;
constexpr double kQuadCellArea = kQuadCell * kQuadCell;

// Node cap for the truth lattice Gram; beyond it the draw would dominate
// generation time and memory for no gain in test fidelity.
constexpr std::size_t kMaxLatticeNodes = 4000;

// Uniform and normal draws built on the raw mt19937_64 stream. The standard
// normal distribution is implementation defined, so normals come from an
// explicit Box-Muller transform and reproduce bit for bit across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform on [0, 1).
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double normal() {
        const double u1 = (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

private:
    std::mt19937_64 eng_;
};

void require_finite_bbox(const BBox& b) {
    if (b.empty() || !std::isfinite(b.min_x) || !std::isfinite(b.min_y) ||
        !std::isfinite(b.max_x) || !std::isfinite(b.max_y)) {
        throw ConfigError("synth: field bbox is empty or not finite");
    }
}

void validate_field(const FieldSpec& field) {
    require_finite_bbox(field.bbox);
    for (const Polygon& v : field.voids) {
        if (v.empty() || v.exterior().size() < 4) {
            throw ConfigError("synth: void polygon is empty or degenerate");
        }
        const BBox vb = bbox(v);
        if (vb.min_x < field.bbox.min_x - 1e-9 || vb.max_x > field.bbox.max_x + 1e-9 ||
            vb.min_y < field.bbox.min_y - 1e-9 || vb.max_y > field.bbox.max_y + 1e-9) {
            throw ConfigError("synth: void extends outside the field bbox");
        }
    }
    const TruthParams& t = field.truth;
    if (!std::isfinite(t.mean_log_yield) || !std::isfinite(t.trend_x) ||
        !std::isfinite(t.trend_y)) {
        throw ConfigError("synth: truth mean and trend must be finite");
    }
    if (!(t.lattice_resolution > 0.0) || !std::isfinite(t.lattice_resolution)) {
        throw ConfigError("synth: truth lattice resolution must be positive");
    }
    if (t.use_random_field) validate(t.field_params);
}

void validate_path(const PathSpec& p) {
    const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(p.spacing_factor)) throw ConfigError("synth: spacing factor must be positive");
    if (!positive(p.swath_half_width)) throw ConfigError("synth: swath half-width must be positive");
    if (!positive(p.step_mean)) throw ConfigError("synth: step mean must be positive");
    if (!(p.step_jitter >= 0.0 && p.step_jitter < 1.0)) {
        throw ConfigError("synth: step jitter must lie in [0, 1)");
    }
    if (!positive(p.pivot_overlap)) throw ConfigError("synth: pivot overlap must be positive");
    if (!(p.noise_sigma >= 0.0) || !std::isfinite(p.noise_sigma)) {
        throw ConfigError("synth: noise sigma must be non-negative");
    }
}

// Draws the truth surface: mean plus linear trend at every lattice node,
// plus one joint draw of the stationary field when requested. The lattice
// draw consumes the seed stream first, so the surface for a given seed does
// not depend on path parameters.
TruthField build_truth(const FieldSpec& field, Rng& rng) {
    TruthField t;
    t.field = field.bbox;
    t.voids = field.voids;

    const double width = field.bbox.max_x - field.bbox.min_x;
    const double height = field.bbox.max_y - field.bbox.min_y;
    const double res = field.truth.lattice_resolution;
    t.nx = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(width / res)) + 1);
    t.ny = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(height / res)) + 1);
    t.dx = width / static_cast<double>(t.nx - 1);
    t.dy = height / static_cast<double>(t.ny - 1);

    const std::size_t n = t.nx * t.ny;
    if (field.truth.use_random_field && n > kMaxLatticeNodes) {
        throw ConfigError("synth: truth lattice exceeds " + std::to_string(kMaxLatticeNodes) +
                          " nodes; coarsen lattice_resolution");
    }

    const double cx = 0.5 * (field.bbox.min_x + field.bbox.max_x);
    const double cy = 0.5 * (field.bbox.min_y + field.bbox.max_y);
    t.log_yield.resize(n);
    std::vector<double> xs(n), ys(n);
    for (std::size_t iy = 0; iy < t.ny; ++iy) {
        for (std::size_t ix = 0; ix < t.nx; ++ix) {
            const std::size_t i = iy * t.nx + ix;
            xs[i] = field.bbox.min_x + static_cast<double>(ix) * t.dx;
            ys[i] = field.bbox.min_y + static_cast<double>(iy) * t.dy;
            t.log_yield[i] = field.truth.mean_log_yield + field.truth.trend_x * (xs[i] - cx) +
                             field.truth.trend_y * (ys[i] - cy);
        }
    }

    if (field.truth.use_random_field) {
        const CovarianceParams& cp = field.truth.field_params;
        std::vector<double> gram(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                const double d = std::hypot(xs[i] - xs[j], ys[i] - ys[j]);
                gram[i * n + j] = matern_cov(d, cp);
            }
            gram[i * n + i] += 1e-10 * cp.sill;
        }
        const linalg::Cholesky chol(std::move(gram), n);
        std::vector<double> g(n);
        for (double& v : g) v = rng.normal();
        const std::vector<double>& l = chol.factor();
        for (std::size_t i = n; i-- > 0;) {
            double acc = 0.0;
            for (std::size_t j = 0; j <= i; ++j) acc += l[i * n + j] * g[j];
            t.log_yield[i] += acc;
        }
    }
    return t;
}

// Quadrature state over a fixed 0.25 m lattice anchored on multiples of the
// cell size and padded past the field so headland excursions stay on it.
// Each cell carries the crop yield at its center and a remaining flag; a
// sweep collects a cell at most once, which makes record masses sum exactly
// to the integral of crop yield over the swept union.
class Sweeper {
public:
    Sweeper(const TruthField& truth, double pad) {
        x0_ = std::floor((truth.field.min_x - pad) / kQuadCell) * kQuadCell;
        y0_ = std::floor((truth.field.min_y - pad) / kQuadCell) * kQuadCell;
        nx_ = static_cast<std::size_t>(
            std::ceil((truth.field.max_x + pad - x0_) / kQuadCell));
        ny_ = static_cast<std::size_t>(
            std::ceil((truth.field.max_y + pad - y0_) / kQuadCell));
        value_.resize(nx_ * ny_);
        remaining_.assign(nx_ * ny_, 1);
        for (std::size_t j = 0; j < ny_; ++j) {
            for (std::size_t i = 0; i < nx_; ++i) {
                value_[j * nx_ + i] = truth.crop_yield_at(center(i, j));
            }
        }
    }

    // Collects every remaining cell whose center lies in the rectangle swept
    // from a to b with half-width w; returns the newly collected mass in kg.
    double sweep(Point a, Point b, double w) {
        const Point d = b - a;
        const double len = norm(d);
        if (!(len > 0.0)) return 0.0;
        const Point nvec{d.y / len * w, -d.x / len * w};
        const Point ring[4] = {a + nvec, b + nvec, b - nvec, a - nvec};

        BBox box;
        for (const Point& p : ring) box.expand(p);
        const auto clamp_idx = [](double v, std::size_t hi) {
            if (v < 0.0) return std::size_t{0};
            const std::size_t u = static_cast<std::size_t>(v);
            return std::min(u, hi);
        };
        const std::size_t i0 = clamp_idx(std::floor((box.min_x - x0_) / kQuadCell) - 1.0, nx_ - 1);
        const std::size_t i1 = clamp_idx(std::ceil((box.max_x - x0_) / kQuadCell) + 1.0, nx_ - 1);
        const std::size_t j0 = clamp_idx(std::floor((box.min_y - y0_) / kQuadCell) - 1.0, ny_ - 1);
        const std::size_t j1 = clamp_idx(std::ceil((box.max_y - y0_) / kQuadCell) + 1.0, ny_ - 1);

        double collected = 0.0;
        for (std::size_t j = j0; j <= j1; ++j) {
            for (std::size_t i = i0; i <= i1; ++i) {
                const Point p = center(i, j);
                bool inside = true;
                for (int k = 0; k < 4 && inside; ++k) {
                    const Point e = ring[(k + 1) % 4] - ring[k];
                    const Point r = p - ring[k];
                    inside = (e.x * r.y - e.y * r.x) >= 0.0;
                }
                if (!inside) continue;
                ++gross_cells_;
                const std::size_t idx = j * nx_ + i;
                if (remaining_[idx]) {
                    remaining_[idx] = 0;
                    ++union_cells_;
                    collected += value_[idx];
                }
            }
        }
        return collected * kQuadCellArea;
    }

    double gross_area() const { return static_cast<double>(gross_cells_) * kQuadCellArea; }
    double union_area() const { return static_cast<double>(union_cells_) * kQuadCellArea; }

    // Integral of crop yield over every collected cell, re-accumulated from
    // the final mask independently of the per-record sums.
    double harvested_integral() const {
        double acc = 0.0;
        for (std::size_t idx = 0; idx < value_.size(); ++idx) {
            if (!remaining_[idx]) acc += value_[idx];
        }
        return acc * kQuadCellArea;
    }

private:
    Point center(std::size_t i, std::size_t j) const {
        return {x0_ + (static_cast<double>(i) + 0.5) * kQuadCell,
                y0_ + (static_cast<double>(j) + 0.5) * kQuadCell};
    }

    double x0_ = 0.0, y0_ = 0.0;
    std::size_t nx_ = 0, ny_ = 0;
    std::vector<double> value_;
    std::vector<std::uint8_t> remaining_;
    std::uint64_t gross_cells_ = 0;
    std::uint64_t union_cells_ = 0;
};

// One harvestable stretch of a row and, between stretches, the y level the
// machine hugs to get around the blocking void.
struct RowPlan {
    std::vector<std::pair<double, double>> spans; // ordered left to right
    std::vector<double> detour_y;                 // size spans.size() - 1
};

// Cuts the row [xa, xb] at height y by every void whose bbox meets the swath
// band [y - w, y + w]. A void blocks [bbox.min_x - w, bbox.max_x + w];
// overlapping blocks merge. The detour level clears the void on its nearer
// side; stretches too short to place two cycles are folded into the blocks.
RowPlan plan_row(double y, double xa, double xb, double w, double min_span,
                 const std::vector<Polygon>& voids) {
    struct Block {
        double lo, hi;
        double below, above;
        bool prefer_below;
    };
    std::vector<Block> blocks;
    for (const Polygon& v : voids) {
        const BBox vb = bbox(v);
        if (!(vb.min_y < y + w && vb.max_y > y - w)) continue;
        blocks.push_back({vb.min_x - w, vb.max_x + w, vb.min_y - w, vb.max_y + w,
                          (y - vb.min_y) < (vb.max_y - y)});
    }
    std::sort(blocks.begin(), blocks.end(),
              [](const Block& a, const Block& b) { return a.lo < b.lo; });
    std::vector<Block> merged;
    for (const Block& b : blocks) {
        if (!merged.empty() && b.lo <= merged.back().hi) {
            Block& m = merged.back();
            m.hi = std::max(m.hi, b.hi);
            m.below = std::min(m.below, b.below);
            m.above = std::max(m.above, b.above);
        } else {
            merged.push_back(b);
        }
    }

    RowPlan plan;
    double cursor = xa;
    std::size_t bi = 0;
    const auto emit_span = [&](double lo, double hi) {
        if (hi - lo < min_span) return false;
        plan.spans.emplace_back(lo, hi);
        return true;
    };
    std::vector<const Block*> pending; // blocks since the last kept span
    for (; bi < merged.size(); ++bi) {
        const Block& b = merged[bi];
        if (b.hi <= xa || b.lo >= xb) continue;
        const double lo = std::max(xa, std::min(b.lo, xb));
        if (emit_span(cursor, lo) && plan.spans.size() > 1) {
            double below = pending.front()->below;
            double above = pending.front()->above;
            for (const Block* p : pending) {
                below = std::min(below, p->below);
                above = std::max(above, p->above);
            }
            plan.detour_y.push_back(pending.front()->prefer_below ? below : above);
            pending.clear();
        }
        if (plan.spans.size() >= 1) pending.push_back(&b);
        cursor = std::max(cursor, std::min(b.hi, xb));
    }
    if (emit_span(cursor, xb) && plan.spans.size() > 1) {
        double below = pending.front()->below;
        double above = pending.front()->above;
        for (const Block* p : pending) {
            below = std::min(below, p->below);
            above = std::max(above, p->above);
        }
        plan.detour_y.push_back(pending.front()->prefer_below ? below : above);
    }
    return plan;
}

// Emits records along the path, pulling masses from the sweeper and applying
// the optional measurement noise. The machine position is always the last
// emitted record's position.
class Walker {
public:
    Walker(SynthResult& out, Sweeper& sweeper, Rng& rng, const PathSpec& path)
        : out_(out), sw_(sweeper), rng_(rng), path_(path) {}

    void anchor(Point p, long long pass) {
        out_.records.push_back({next_t_++, p.x, p.y, path_.swath_half_width, 0.0});
        out_.record_pass.push_back(pass);
        pos_ = p;
    }

    void emit(Point to, long long pass) {
        double mass = sw_.sweep(pos_, to, path_.swath_half_width);
        if (mass > 0.0 && path_.noise_sigma > 0.0) {
            const double s = path_.noise_sigma;
            mass *= std::exp(s * rng_.normal() - 0.5 * s * s);
        }
        out_.records.push_back({next_t_++, to.x, to.y, path_.swath_half_width, mass});
        out_.record_pass.push_back(pass);
        pos_ = to;
    }

    // Straight run to the target, one record per cycle distance; the final
    // cycle is stretched up to half a step so it lands exactly on the target.
    void walk_to(Point to, long long pass) {
        while (true) {
            const Point d = to - pos_;
            const double dist = norm(d);
            if (dist <= 1e-12) return;
            const double s = next_step();
            if (dist <= 1.5 * s) {
                emit(to, pass);
                return;
            }
            emit(pos_ + (s / dist) * d, pass);
        }
    }

    // Semicircle of the given radius from angle th0 to th1 about the center,
    // mirrored in x by sx, swept by chord records roughly one cycle apart.
    void walk_arc(Point c, double radius, double th0, double th1, double sx) {
        const double arc_len = radius * std::abs(th1 - th0);
        const int k = std::max(2, static_cast<int>(std::lround(arc_len / path_.step_mean)));
        for (int i = 1; i <= k; ++i) {
            const double th = th0 + (th1 - th0) * static_cast<double>(i) / k;
            emit({c.x + sx * radius * std::cos(th), c.y + radius * std::sin(th)}, -1);
        }
    }

    Point position() const { return pos_; }

private:
    double next_step() {
        if (path_.step_jitter <= 0.0) return path_.step_mean;
        return path_.step_mean * (1.0 + path_.step_jitter * (2.0 * rng_.uniform01() - 1.0));
    }

    SynthResult& out_;
    Sweeper& sw_;
    Rng& rng_;
    const PathSpec& path_;
    Point pos_{};
    long long next_t_ = 0;
};

} // namespace

double TruthField::log_yield_at(Point p) const {
    const double fx = std::clamp((p.x - field.min_x) / dx, 0.0, static_cast<double>(nx - 1));
    const double fy = std::clamp((p.y - field.min_y) / dy, 0.0, static_cast<double>(ny - 1));
    const std::size_t ix = std::min(static_cast<std::size_t>(fx), nx - 2);
    const std::size_t iy = std::min(static_cast<std::size_t>(fy), ny - 2);
    const double ux = fx - static_cast<double>(ix);
    const double uy = fy - static_cast<double>(iy);
    const double v00 = log_yield[iy * nx + ix];
    const double v10 = log_yield[iy * nx + ix + 1];
    const double v01 = log_yield[(iy + 1) * nx + ix];
    const double v11 = log_yield[(iy + 1) * nx + ix + 1];
    return (1.0 - uy) * ((1.0 - ux) * v00 + ux * v10) + uy * ((1.0 - ux) * v01 + ux * v11);
}

double TruthField::yield_at(Point p) const { return std::exp(log_yield_at(p)); }

bool TruthField::in_void(Point p) const {
    for (const Polygon& v : voids) {
        if (contains(v, p)) return true;
    }
    return false;
}

double TruthField::crop_yield_at(Point p) const {
    if (!field.contains(p) || in_void(p)) return 0.0;
    return yield_at(p);
}

SynthResult generate(const FieldSpec& field, const PathSpec& path) {
    validate_field(field);
    validate_path(path);

    const double w = path.swath_half_width;
    const double spacing = path.spacing_factor * 2.0 * w;
    const double height = field.bbox.max_y - field.bbox.min_y;
    const double xa = field.bbox.min_x;
    const double xb = field.bbox.max_x;
    if (height < 2.0 * w || xb - xa < path.step_mean) {
        throw ConfigError("synth: path cannot cover the field with this spec");
    }
    const std::size_t passes =
        static_cast<std::size_t>(std::floor((height - 2.0 * w) / spacing)) + 1;

    Rng rng(field.seed);
    SynthResult out;
    out.truth = build_truth(field, rng);
    out.passes = passes;

    const double pad =
        2.0 * w + spacing * std::max(1.0, path.pivot_overlap) + path.step_mean;
    Sweeper sweeper(out.truth, pad);
    Walker walker(out, sweeper, rng, path);

    const double min_span = 2.0 * path.step_mean;
    const double radius = 0.5 * spacing;
    const double pivot_shift = (path.pivot_overlap - 1.0) * radius;

    for (std::size_t k = 0; k < passes; ++k) {
        const double y = field.bbox.min_y + w + static_cast<double>(k) * spacing;
        const bool eastbound = (k % 2 == 0);
        RowPlan plan = plan_row(y, xa, xb, w, min_span, field.voids);
        if (plan.spans.empty()) continue; // row fully blocked; the turn skips to the next
        if (!eastbound) {
            std::reverse(plan.spans.begin(), plan.spans.end());
            for (auto& s : plan.spans) std::swap(s.first, s.second);
            std::reverse(plan.detour_y.begin(), plan.detour_y.end());
        }

        const Point entry{plan.spans.front().first, y};
        if (out.records.empty()) {
            walker.anchor(entry, static_cast<long long>(k));
        } else if (path.turn_style == TurnStyle::kSemicircle) {
            // The turn sits at the end of the PREVIOUS row, so it bulges left
            // when this row runs east and right when it runs west. The pivot
            // shift slides the turn center along the previous heading.
            const double sx = eastbound ? -1.0 : 1.0;
            const Point prev = walker.position();
            walker.walk_arc({prev.x + sx * pivot_shift, y - radius}, radius, -0.5 * kPi,
                            0.5 * kPi, sx);
            walker.walk_to(entry, -1);
        } else {
            walker.emit(entry, -1);
        }

        for (std::size_t si = 0; si < plan.spans.size(); ++si) {
            walker.walk_to({plan.spans[si].second, y}, static_cast<long long>(k));
            if (si + 1 < plan.spans.size()) {
                const double dy = plan.detour_y[si];
                walker.walk_to({plan.spans[si].second, dy}, static_cast<long long>(k));
                walker.walk_to({plan.spans[si + 1].first, dy}, static_cast<long long>(k));
                walker.walk_to({plan.spans[si + 1].first, y}, static_cast<long long>(k));
            }
        }
    }

    if (out.records.size() < 2) {
        throw ConfigError("synth: path produced fewer than two records");
    }

    for (const MonitorRecord& r : out.records) out.total_mass += r.m;
    out.harvested_mass = sweeper.harvested_integral();
    out.harvested_area = sweeper.union_area();
    out.gross_swept_area = sweeper.gross_area();
    out.duplicate_coverage_fraction =
        out.gross_swept_area > 0.0 ? 1.0 - out.harvested_area / out.gross_swept_area : 0.0;
    return out;
}

EvalMetrics evaluate(const std::vector<SmoothedPixel>& smoothed, const TruthField& truth,
                     double pixel_resolution) {
    if (!(pixel_resolution > 0.0) || !std::isfinite(pixel_resolution)) {
        throw ConfigError("evaluate: pixel resolution must be positive");
    }
    if (truth.nx < 2 || truth.ny < 2 || truth.log_yield.size() != truth.nx * truth.ny) {
        throw ConfigError("evaluate: truth field is not initialized");
    }

    EvalMetrics m;
    std::vector<double> s, t;
    for (const SmoothedPixel& px : smoothed) {
        const Point c = px.centroid;
        if (!truth.field.contains(c) || truth.in_void(c)) continue;
        if (std::isnan(px.yield_kg_m2)) {
            throw ConfigError("evaluate: pixel without a yield value; apply the back-transform "
                              "and yield conversion first");
        }
        s.push_back(px.yield_kg_m2);
        t.push_back(truth.yield_at(c));
        m.smoothed_mass += px.mu_mass;
        const double sub = pixel_resolution / 5.0;
        for (int a = 0; a < 5; ++a) {
            for (int b = 0; b < 5; ++b) {
                const Point q{c.x + (static_cast<double>(a) + 0.5) * sub - 0.5 * pixel_resolution,
                              c.y + (static_cast<double>(b) + 0.5) * sub - 0.5 * pixel_resolution};
                m.truth_mass += truth.crop_yield_at(q) * sub * sub;
            }
        }
    }
    if (s.empty()) {
        throw DataError("evaluate: prediction pixels do not overlap the truth field");
    }

    const std::size_t n = s.size();
    m.pixels_used = n;
    double se = 0.0, ms = 0.0, mt = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = s[i] - t[i];
        se += d * d;
        ms += s[i];
        mt += t[i];
    }
    m.rmse = std::sqrt(se / static_cast<double>(n));
    ms /= static_cast<double>(n);
    mt /= static_cast<double>(n);
    double vs = 0.0, vt = 0.0, cov = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        vs += (s[i] - ms) * (s[i] - ms);
        vt += (t[i] - mt) * (t[i] - mt);
        cov += (s[i] - ms) * (t[i] - mt);
    }
    const double sd_s = std::sqrt(vs / static_cast<double>(n));
    const double sd_t = std::sqrt(vt / static_cast<double>(n));
    if (sd_s <= 1e-12 * std::max(1.0, std::abs(ms)) ||
        sd_t <= 1e-12 * std::max(1.0, std::abs(mt))) {
        m.degenerate_correlation = true;
        m.correlation = std::numeric_limits<double>::quiet_NaN();
    } else {
        m.correlation = (cov / static_cast<double>(n)) / (sd_s * sd_t);
    }
    m.mass_ratio = m.truth_mass > 0.0 ? m.smoothed_mass / m.truth_mass
                                      : std::numeric_limits<double>::quiet_NaN();
    return m;
}

std::string records_to_csv(const std::vector<MonitorRecord>& records) {
    std::string out = "t,x,y,w,m\n";
    for (const MonitorRecord& r : records) {
        out += std::to_string(r.t);
        out += ',';
        out += format_double(r.x);
        out += ',';
        out += format_double(r.y);
        out += ',';
        out += format_double(r.w);
        out += ',';
        out += format_double(r.m);
        out += '\n';
    }
    return out;
}

std::string truth_to_csv(const TruthField& truth) {
    std::string out = "x,y,yield\n";
    for (std::size_t iy = 0; iy < truth.ny; ++iy) {
        for (std::size_t ix = 0; ix < truth.nx; ++ix) {
            const Point p{truth.field.min_x + static_cast<double>(ix) * truth.dx,
                          truth.field.min_y + static_cast<double>(iy) * truth.dy};
            out += format_double(p.x);
            out += ',';
            out += format_double(p.y);
            out += ',';
            out += format_double(truth.crop_yield_at(p));
            out += '\n';
        }
    }
    return out;
}

} // namespace yieldmap
