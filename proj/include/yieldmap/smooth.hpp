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

#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "yieldmap/apportion.hpp"
#include "yieldmap/covariance.hpp"
#include "yieldmap/errors.hpp"
#include "yieldmap/geometry.hpp"

namespace yieldmap {

// One prediction-grid cell of the smoothed surface. krige fills the log
// moments, backtransform the mass moments, apply_yield the yield columns.
// Stages that have not run yet leave quiet NaN so accidental use is loud.
struct SmoothedPixel {
    std::size_t n = 0;
    Point centroid;
    double mu_log = std::numeric_limits<double>::quiet_NaN();
    double var_log = std::numeric_limits<double>::quiet_NaN();
    double mu_mass = std::numeric_limits<double>::quiet_NaN();
    double var_mass = std::numeric_limits<double>::quiet_NaN();
    double yield_kg_m2 = std::numeric_limits<double>::quiet_NaN();
    double yield_mg_ha = std::numeric_limits<double>::quiet_NaN();
    // Variance propagated onto the yield scale, var_mass / r^4. A derived
    // convenience column, not part of the mass-moment contract.
    double yield_var = std::numeric_limits<double>::quiet_NaN();
};

// The observation set the smoother operates on: retained pixels with
// positive mass, log-transformed. Retained pixels with exactly zero mass are
// excluded and counted, never inflated by an epsilon, because log(0) is
// undefined and fake offsets would bias the fit.
struct FitData {
    std::vector<double> xs, ys;
    std::vector<double> zs;
    std::size_t zero_mass_excluded = 0;
};

FitData collect_fit_data(const std::vector<GridPixel>& pixels);

struct FitOptions {
    std::vector<double> nu_candidates{kSmoothnessCandidates.begin(), kSmoothnessCandidates.end()};
    std::size_t min_pixels = 30;
    // Optimizer budget per start and the stopping threshold on the spread of
    // -2 log likelihood across the simplex.
    std::size_t max_evals_per_start = 100;
    double f_tol = 1e-3;
};

struct FitDiagnostics {
    std::size_t pixels_used = 0;
    std::size_t zero_mass_excluded = 0;
    std::size_t likelihood_evals = 0;
    bool converged = false;
    // Degenerate input (constant field) pins the parameters at a variance
    // floor instead of failing; this flag marks such results.
    bool boundary = false;
    // Profiled constant-mean estimate at the optimum, on the log scale.
    double mean_log = 0.0;
    std::string note;
    // Log likelihood at each optimizer start that was evaluated; the fitted
    // likelihood must dominate every entry.
    std::vector<double> init_logliks;
};

struct FitResult {
    CovarianceParams params;
    double loglik = std::numeric_limits<double>::quiet_NaN();
    FitDiagnostics diagnostics;
};

// Raised when no optimizer start reached its stopping tolerance; carries the
// best point seen so callers can inspect or deliberately accept it.
class FitError : public NumericError {
public:
    FitError(const std::string& msg, FitResult best)
        : NumericError(msg), best_(std::move(best)) {}
    const FitResult& best() const { return best_; }

private:
    FitResult best_;
};

// Maximum-likelihood fit of the Matern model to log mass of the retained,
// positive-mass pixels under a constant unknown mean. The variance and mean
// are profiled out in closed form; a deterministic simplex search runs over
// (log range, log nugget-to-sill ratio) for each smoothness candidate and
// the best candidate by likelihood wins. Deterministic given data and
// options. Throws DataError below min_pixels, ConfigError on bad options,
// FitError when no start converges.
FitResult fit_mle(const std::vector<GridPixel>& pixels, const FitOptions& options = {});

// Ordinary-kriging prediction of log mass at every centroid of the
// prediction grid, using the same observation set as fit_mle. The predictive
// distribution is for a fresh observation at the target location, so the
// variance approaches sill + nugget far from data and collapses to zero at a
// data centroid when the nugget is zero. block_size partitions the
// prediction sweep; 0 means one block. Blocking changes wall-clock behavior
// only, outputs agree within roundoff.
std::vector<SmoothedPixel> krige(const std::vector<GridPixel>& fit_pixels,
                                 const CovarianceParams& params, const Grid& prediction_grid,
                                 std::size_t block_size = 64);

// Ordinary-kriging weights for one prediction point, pairing with the
// observations in collect_fit_data order. Diagnostic hook backing the
// weights-sum-to-one property; prediction mean equals weights dot z.
std::vector<double> krige_weights(const std::vector<GridPixel>& fit_pixels,
                                  const CovarianceParams& params, const Point& p);

// Exact lognormal moments from log-scale moments:
//   mu_mass  = exp(mu_log + var_log / 2)
//   var_mass = exp(2 mu_log + var_log) (exp(var_log) - 1)
// Throws ConfigError when var_log is negative or either input is NaN.
std::pair<double, double> backtransform(double mu_log, double var_log);
void backtransform(std::vector<SmoothedPixel>& pixels);

// yield = mu_mass / r^2 in kg/m^2; Mg/ha is ten times that; yield_var is
// var_mass / r^4. r is the prediction-grid resolution in meters.
void apply_yield(std::vector<SmoothedPixel>& pixels, double prediction_resolution);

} // namespace yieldmap
