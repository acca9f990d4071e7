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

#include "yieldmap/smooth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "yieldmap/kernels/kernels.hpp"
#include "yieldmap/linalg.hpp"

namespace yieldmap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative diagonal jitter, part of the numerical contract: the correlation
// matrix gets +1e-10 on its diagonal, equivalently the covariance gets
// +1e-10 * sill.
constexpr double kJitter = 1e-10;

// Search box for the nugget-to-sill ratio. The upper bound is where a pure
// white-noise field parks; it is a boundary, not a failure.
constexpr double kDeltaMin = 1e-8;
constexpr double kDeltaMax = 1e6;

// Sill reported for a constant field, where the variance estimate collapses
// to zero and the likelihood is unbounded.
constexpr double kSillFloor = 1e-12;

// The exact dense path holds an n x n Gram in memory; past this size the
// factorization alone would dwarf every pipeline budget.
constexpr std::size_t kMaxDenseN = 8000;

struct Dists {
    std::size_t n = 0;
    std::vector<double> d;  // n x n symmetric distances, zero diagonal
};

Dists pairwise_distances(const std::vector<double>& xs, const std::vector<double>& ys) {
    Dists out;
    out.n = xs.size();
    out.d.resize(out.n * out.n);
    for (std::size_t i = 0; i < out.n; ++i) {
        double* row = out.d.data() + i * out.n;
        kernels::sq_dist_array(xs[i], ys[i], xs.data(), ys.data(), row, out.n);
        for (std::size_t j = 0; j < out.n; ++j) row[j] = std::sqrt(row[j]);
    }
    return out;
}

// Profile -2 log likelihood of the constant-mean model at fixed smoothness:
// with R = corr + delta I, the mean and the process variance have closed
// forms, leaving a search over (log range, log delta) only. This reaches the
// same maximum as a raw search over (variance, range, nugget) in one fewer
// dimension, which matters at O(n^3) per evaluation.
struct ProfilePoint {
    double neg2ll = kInf;
    double sigma2 = 0.0;
    double beta = 0.0;
    bool ok = false;
};

class ProfileObjective {
public:
    ProfileObjective(const Dists& dists, const std::vector<double>& z, double nu)
        : dists_(dists), z_(z), nu_(nu), r_(dists.n * dists.n), work_(2 * dists.n) {}

    ProfilePoint eval(double log_rho, double log_delta) {
        ++evals_;
        const std::size_t n = dists_.n;
        const double rho = std::exp(log_rho);
        const double delta = std::exp(log_delta);
        matern_corr_bulk(dists_.d.data(), r_.data(), n * n, rho, nu_);
        for (std::size_t i = 0; i < n; ++i) r_[i * n + i] = 1.0 + delta + kJitter;

        ProfilePoint out;
        try {
            linalg::Cholesky ch(std::move(r_), n);
            double* u1 = work_.data();
            double* uz = work_.data() + n;
            std::fill(u1, u1 + n, 1.0);
            std::copy(z_.begin(), z_.end(), uz);
            ch.solve_lower_rows(work_.data(), 2);
            double svv = 0.0, s1z = 0.0, szz = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                svv += u1[i] * u1[i];
                s1z += u1[i] * uz[i];
                szz += uz[i] * uz[i];
            }
            const double beta = s1z / svv;
            const double ess = std::max(0.0, szz - s1z * s1z / svv);
            const double sigma2 = ess / static_cast<double>(n);
            if (sigma2 > 0.0) {
                const double nd = static_cast<double>(n);
                out.neg2ll = nd * std::log(2.0 * std::numbers::pi) + nd * std::log(sigma2) +
                             ch.logdet() + nd;
                out.sigma2 = sigma2;
                out.beta = beta;
                out.ok = true;
            }
        } catch (const NumericError&) {
            // Factorization failure at this point of the search space; the
            // caller treats it as a very bad objective value and moves on.
        }
        r_.resize(n * n);
        return out;
    }

    std::size_t evals() const { return evals_; }

private:
    const Dists& dists_;
    const std::vector<double>& z_;
    double nu_;
    std::vector<double> r_;
    std::vector<double> work_;
    std::size_t evals_ = 0;
};

using Vec2 = std::array<double, 2>;

struct NmOut {
    Vec2 x{};
    double f = kInf;
    bool converged = false;
};

// Deterministic Nelder-Mead on two variables with the standard reflection,
// expansion, contraction and shrink coefficients. f0 is the already-known
// value at x0 so starts are not evaluated twice. The objective is expected
// to clamp its argument into the search box, which turns the region outside
// into a flat wall the simplex can slide along; convergence is therefore
// declared on function-value agreement alone, treating likelihood plateaus
// as solution sets rather than stalls.
template <typename F>
NmOut nelder_mead_2(F&& f, Vec2 x0, double f0, double step, std::size_t max_evals, double f_tol) {
    std::array<Vec2, 3> xs{x0, Vec2{x0[0] + step, x0[1]}, Vec2{x0[0], x0[1] + step}};
    std::array<double, 3> fs{f0, f(xs[1]), f(xs[2])};
    std::size_t evals = 2;

    auto order = [&] {
        // Insertion order on three vertices, ties kept stable.
        for (int a = 0; a < 2; ++a) {
            for (int b = a + 1; b < 3; ++b) {
                if (fs[b] < fs[a]) {
                    std::swap(fs[a], fs[b]);
                    std::swap(xs[a], xs[b]);
                }
            }
        }
    };
    order();

    NmOut out;
    while (evals < max_evals) {
        const double fspread = fs[2] - fs[0];
        if (fspread <= f_tol) {
            out.converged = true;
            break;
        }

        const Vec2 c{0.5 * (xs[0][0] + xs[1][0]), 0.5 * (xs[0][1] + xs[1][1])};
        const Vec2 xr{c[0] + (c[0] - xs[2][0]), c[1] + (c[1] - xs[2][1])};
        const double fr = f(xr);
        ++evals;
        if (fr < fs[0]) {
            const Vec2 xe{c[0] + 2.0 * (c[0] - xs[2][0]), c[1] + 2.0 * (c[1] - xs[2][1])};
            const double fe = f(xe);
            ++evals;
            if (fe < fr) {
                xs[2] = xe;
                fs[2] = fe;
            } else {
                xs[2] = xr;
                fs[2] = fr;
            }
        } else if (fr < fs[1]) {
            xs[2] = xr;
            fs[2] = fr;
        } else {
            const Vec2& toward = (fr < fs[2]) ? xr : xs[2];
            const Vec2 xc{c[0] + 0.5 * (toward[0] - c[0]), c[1] + 0.5 * (toward[1] - c[1])};
            const double fc = f(xc);
            ++evals;
            if (fc < std::min(fr, fs[2])) {
                xs[2] = xc;
                fs[2] = fc;
            } else {
                for (int k = 1; k < 3; ++k) {
                    xs[k] = {xs[0][0] + 0.5 * (xs[k][0] - xs[0][0]),
                             xs[0][1] + 0.5 * (xs[k][1] - xs[0][1])};
                    fs[k] = f(xs[k]);
                    ++evals;
                }
            }
        }
        order();
    }
    out.x = xs[0];
    out.f = fs[0];
    return out;
}

// Shared data preparation for krige and krige_weights: Gram factorization
// plus the whitened constant and observation vectors.
struct KrigePrep {
    FitData data;
    linalg::Cholesky chol;
    std::vector<double> u1, uz;
    double svv = 0.0, beta = 0.0;
};

KrigePrep prepare_krige(const std::vector<GridPixel>& fit_pixels, const CovarianceParams& params) {
    validate(params);
    FitData data = collect_fit_data(fit_pixels);
    const std::size_t n = data.zs.size();
    if (n == 0) throw DataError("krige: no retained pixels with positive mass");
    if (n > kMaxDenseN) {
        throw NumericError("krige: " + std::to_string(n) +
                           " observations exceed the dense-path limit of " +
                           std::to_string(kMaxDenseN));
    }

    Dists dists = pairwise_distances(data.xs, data.ys);
    std::vector<double> k(n * n);
    matern_corr_bulk(dists.d.data(), k.data(), n * n, params.range, params.smoothness);
    for (double& v : k) v *= params.sill;
    for (std::size_t i = 0; i < n; ++i) {
        k[i * n + i] = params.sill * (1.0 + kJitter) + params.nugget;
    }

    KrigePrep prep{std::move(data), linalg::Cholesky(std::move(k), n), {}, {}, 0.0, 0.0};
    prep.u1.assign(n, 1.0);
    prep.uz = prep.data.zs;
    prep.chol.solve_lower(prep.u1);
    prep.chol.solve_lower(prep.uz);
    double svv = 0.0, s1z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        svv += prep.u1[i] * prep.u1[i];
        s1z += prep.u1[i] * prep.uz[i];
    }
    prep.svv = svv;
    prep.beta = s1z / svv;
    return prep;
}

} // namespace

FitData collect_fit_data(const std::vector<GridPixel>& pixels) {
    FitData out;
    for (const GridPixel& px : pixels) {
        if (!px.retained) continue;
        if (px.mass < 0.0) throw DataError("smooth: negative pixel mass");
        if (px.mass == 0.0) {
            ++out.zero_mass_excluded;
            continue;
        }
        out.xs.push_back(px.centroid.x);
        out.ys.push_back(px.centroid.y);
        out.zs.push_back(std::log(px.mass));
    }
    return out;
}

FitResult fit_mle(const std::vector<GridPixel>& pixels, const FitOptions& options) {
    if (options.nu_candidates.empty()) {
        throw ConfigError("fit_mle: smoothness candidate set is empty");
    }
    for (double nu : options.nu_candidates) {
        if (!(nu > 0.0) || !std::isfinite(nu)) {
            throw ConfigError("fit_mle: smoothness candidates must be positive and finite");
        }
    }
    if (options.max_evals_per_start < 10) {
        throw ConfigError("fit_mle: optimizer budget below the minimum of 10 evaluations");
    }

    FitData data = collect_fit_data(pixels);
    const std::size_t n = data.zs.size();

    FitResult result;
    result.diagnostics.pixels_used = n;
    result.diagnostics.zero_mass_excluded = data.zero_mass_excluded;

    if (n < options.min_pixels) {
        throw DataError("fit_mle: need at least " + std::to_string(options.min_pixels) +
                        " retained pixels with positive mass, have " + std::to_string(n));
    }

    double mean = 0.0;
    for (double z : data.zs) mean += z;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double z : data.zs) var += (z - mean) * (z - mean);
    var /= static_cast<double>(n);

    double min_x = data.xs[0], max_x = data.xs[0], min_y = data.ys[0], max_y = data.ys[0];
    for (std::size_t i = 1; i < n; ++i) {
        min_x = std::min(min_x, data.xs[i]);
        max_x = std::max(max_x, data.xs[i]);
        min_y = std::min(min_y, data.ys[i]);
        max_y = std::max(max_y, data.ys[i]);
    }
    const double diam = std::hypot(max_x - min_x, max_y - min_y);
    if (diam == 0.0) throw DataError("fit_mle: all pixels share one centroid");

    if (var <= 1e-14 * (1.0 + mean * mean)) {
        // Constant field: the variance estimate collapses and the likelihood
        // is unbounded, so the parameters are pinned and flagged instead of
        // failing the run.
        result.params = {kSillFloor, 0.5 * diam, options.nu_candidates.front(), 0.0};
        result.loglik = std::numeric_limits<double>::quiet_NaN();
        result.diagnostics.converged = true;
        result.diagnostics.boundary = true;
        result.diagnostics.mean_log = mean;
        result.diagnostics.note = "constant log-mass field; sill pinned at its floor";
        return result;
    }

    const Dists dists = pairwise_distances(data.xs, data.ys);

    // Lags below the smallest observed spacing carry no information about
    // the range, and letting the range collapse below them opens a flat
    // likelihood ridge where uncorrelated fields land at an arbitrary point
    // of a (range -> 0, nugget) equivalence class. Flooring the search at
    // the minimum spacing removes the ridge; white noise then resolves as
    // nugget, which is the interpretable end of the class. Fits that stop on
    // this floor are flagged in the diagnostics note.
    double min_spacing = kInf;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = dists.d[i * n + j];
            if (d > 0.0) min_spacing = std::min(min_spacing, d);
        }
    }
    const double lr_lo = std::log(std::max({1e-6, 1e-3 * diam, min_spacing}));
    const double lr_hi = std::log(1e3 * diam);
    const double ld_lo = std::log(kDeltaMin);
    const double ld_hi = std::log(kDeltaMax);

    struct Best {
        double f = kInf;
        Vec2 x{};
        double nu = 0.0;
        bool converged = false;
    } best;
    std::size_t total_evals = 0;

    for (std::size_t ci = 0; ci < options.nu_candidates.size(); ++ci) {
        const double nu = options.nu_candidates[ci];
        ProfileObjective obj(dists, data.zs, nu);
        auto wrapped = [&](Vec2 x) -> double {
            // Outside the search box the Gram is numerically meaningless, so
            // the point is clamped onto it before evaluation. The region
            // beyond a wall is then flat, which lets a simplex whose optimum
            // sits on the wall settle instead of bouncing off a penalty cliff.
            const double lr = std::clamp(x[0], lr_lo, lr_hi);
            const double ld = std::clamp(x[1], ld_lo, ld_hi);
            const ProfilePoint p = obj.eval(lr, ld);
            return p.ok ? p.neg2ll : 1e14;
        };

        // Variogram-heuristic start: range half the field diameter, nugget a
        // tenth of the sill. The first candidate adds a short-range start;
        // later candidates warm-start from the best point found so far.
        std::vector<Vec2> starts;
        if (ci == 0) {
            starts.push_back({std::log(0.5 * diam), std::log(0.1)});
            starts.push_back({std::log(0.125 * diam), 0.0});
        } else {
            starts.push_back(best.x);
        }

        for (const Vec2& x0 : starts) {
            const double f0 = wrapped(x0);
            result.diagnostics.init_logliks.push_back(-0.5 * f0);
            NmOut nm = nelder_mead_2(wrapped, x0, f0, 0.7, options.max_evals_per_start,
                                     options.f_tol);
            // Vertices may drift beyond a wall while their values come from
            // the clamped point; report the point that was actually scored.
            nm.x[0] = std::clamp(nm.x[0], lr_lo, lr_hi);
            nm.x[1] = std::clamp(nm.x[1], ld_lo, ld_hi);
            if (nm.f < best.f) best = {nm.f, nm.x, nu, nm.converged};
        }
        total_evals += obj.evals();
    }

    if (!(best.f < kInf)) {
        result.diagnostics.likelihood_evals = total_evals;
        throw FitError("fit_mle: every covariance evaluation failed to factorize", result);
    }

    // One extra evaluation at the winner recovers the profiled variance and
    // mean without having to thread them through the optimizer.
    ProfileObjective final_obj(dists, data.zs, best.nu);
    const ProfilePoint opt = final_obj.eval(best.x[0], best.x[1]);
    total_evals += 1;
    result.diagnostics.likelihood_evals = total_evals;
    if (!opt.ok) {
        throw FitError("fit_mle: optimum failed to factorize on re-evaluation", result);
    }

    const double rho = std::exp(best.x[0]);
    const double delta = std::exp(best.x[1]);
    result.params = {opt.sigma2, rho, best.nu, delta * opt.sigma2};
    result.loglik = -0.5 * opt.neg2ll;
    result.diagnostics.mean_log = opt.beta;
    result.diagnostics.converged = best.converged;
    if (best.x[1] >= ld_hi - 0.02) {
        result.diagnostics.note = "nugget ratio stopped at its upper search bound";
    } else if (best.x[1] <= ld_lo + 0.02) {
        result.diagnostics.note = "nugget ratio stopped at its lower search bound";
    }
    if (best.x[0] >= lr_hi - 0.02 || best.x[0] <= lr_lo + 0.02) {
        if (!result.diagnostics.note.empty()) result.diagnostics.note += "; ";
        result.diagnostics.note += "range stopped at a search bound";
    }

    if (!best.converged) {
        throw FitError("fit_mle: optimizer exhausted its budget without converging", result);
    }
    validate(result.params);
    return result;
}

std::vector<SmoothedPixel> krige(const std::vector<GridPixel>& fit_pixels,
                                 const CovarianceParams& params, const Grid& prediction_grid,
                                 std::size_t block_size) {
    if (!(prediction_grid.resolution > 0.0) || prediction_grid.nx == 0 ||
        prediction_grid.ny == 0) {
        throw ConfigError("krige: prediction grid is not initialized");
    }

    KrigePrep prep = prepare_krige(fit_pixels, params);
    const std::size_t n = prep.data.zs.size();
    const double total_var = params.sill + params.nugget;

    const std::size_t m = prediction_grid.size();
    std::vector<SmoothedPixel> out(m);
    const std::size_t block = (block_size == 0) ? m : block_size;

    std::vector<double> kst;  // one covariance row per prediction in the block
    std::vector<double> d(n);
    for (std::size_t lo = 0; lo < m; lo += block) {
        const std::size_t hi = std::min(m, lo + block);
        const std::size_t b = hi - lo;
        kst.resize(b * n);
        for (std::size_t j = 0; j < b; ++j) {
            const std::size_t id = lo + j;
            const std::size_t ix = id % prediction_grid.nx;
            const std::size_t iy = id / prediction_grid.nx;
            const Point c = prediction_grid.pixel_centroid(ix, iy);
            out[id].n = id;
            out[id].centroid = c;
            kernels::sq_dist_array(c.x, c.y, prep.data.xs.data(), prep.data.ys.data(), d.data(),
                                   n);
            for (std::size_t i = 0; i < n; ++i) d[i] = std::sqrt(d[i]);
            double* row = kst.data() + j * n;
            matern_corr_bulk(d.data(), row, n, params.range, params.smoothness);
            for (std::size_t i = 0; i < n; ++i) row[i] *= params.sill;
        }
        prep.chol.solve_lower_rows(kst.data(), b);
        for (std::size_t j = 0; j < b; ++j) {
            const double* a = kst.data() + j * n;
            double az = 0.0, a1 = 0.0, aa = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                az += a[i] * prep.uz[i];
                a1 += a[i] * prep.u1[i];
                aa += a[i] * a[i];
            }
            const double mjs = 1.0 - a1;
            out[lo + j].mu_log = az + mjs * prep.beta;
            out[lo + j].var_log = std::max(0.0, total_var - aa + mjs * mjs / prep.svv);
        }
    }
    return out;
}

std::vector<double> krige_weights(const std::vector<GridPixel>& fit_pixels,
                                  const CovarianceParams& params, const Point& p) {
    KrigePrep prep = prepare_krige(fit_pixels, params);
    const std::size_t n = prep.data.zs.size();

    std::vector<double> kv(n);
    kernels::sq_dist_array(p.x, p.y, prep.data.xs.data(), prep.data.ys.data(), kv.data(), n);
    for (std::size_t i = 0; i < n; ++i) kv[i] = std::sqrt(kv[i]);
    std::vector<double> kstar(n);
    matern_corr_bulk(kv.data(), kstar.data(), n, params.range, params.smoothness);
    for (std::size_t i = 0; i < n; ++i) kstar[i] *= params.sill;

    prep.chol.solve(kstar);  // K^{-1} k*
    std::vector<double> w1(n, 1.0);
    prep.chol.solve(w1);  // K^{-1} 1
    double s = 0.0;
    for (double v : kstar) s += v;
    const double lagrange = (1.0 - s) / prep.svv;
    std::vector<double> weights(n);
    for (std::size_t i = 0; i < n; ++i) weights[i] = kstar[i] + lagrange * w1[i];
    return weights;
}

std::pair<double, double> backtransform(double mu_log, double var_log) {
    if (!(var_log >= 0.0) || std::isnan(mu_log)) {
        throw ConfigError("backtransform: needs finite mu_log and nonnegative var_log");
    }
    const double mu_mass = std::exp(mu_log + 0.5 * var_log);
    const double var_mass = std::exp(2.0 * mu_log + var_log) * std::expm1(var_log);
    return {mu_mass, var_mass};
}

void backtransform(std::vector<SmoothedPixel>& pixels) {
    for (SmoothedPixel& px : pixels) {
        const auto [mu, var] = backtransform(px.mu_log, px.var_log);
        px.mu_mass = mu;
        px.var_mass = var;
    }
}

void apply_yield(std::vector<SmoothedPixel>& pixels, double prediction_resolution) {
    if (!(prediction_resolution > 0.0) || !std::isfinite(prediction_resolution)) {
        throw ConfigError("apply_yield: prediction resolution must be positive and finite");
    }
    const double area = prediction_resolution * prediction_resolution;
    for (SmoothedPixel& px : pixels) {
        if (std::isnan(px.mu_mass)) {
            throw ConfigError("apply_yield: mass moments missing; run backtransform first");
        }
        px.yield_kg_m2 = px.mu_mass / area;
        px.yield_mg_ha = 10.0 * px.yield_kg_m2;
        px.yield_var = px.var_mass / (area * area);
    }
}

} // namespace yieldmap
