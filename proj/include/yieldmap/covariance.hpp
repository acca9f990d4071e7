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

#include <array>
#include <cstddef>

namespace yieldmap {

// Parameters of the stationary isotropic Matern covariance on the log-mass
// scale. sill is the variance of the spatially correlated component, nugget
// the variance of the uncorrelated measurement component, range the distance
// scale in meters, smoothness the Matern order.
struct CovarianceParams {
    double sill = 1.0;
    double range = 1.0;
    double smoothness = 0.5;
    double nugget = 0.0;
};

// Smoothness orders with closed-form correlations. Model selection in the
// fitter is restricted to this set; evaluation is not.
inline constexpr std::array<double, 3> kSmoothnessCandidates{0.5, 1.5, 2.5};

bool is_candidate_smoothness(double nu);

// Throws ConfigError unless sill > 0, range > 0, nugget >= 0 and smoothness
// is positive and finite.
void validate(const CovarianceParams& p);

// Matern correlation at distance d >= 0 for unit variance, without nugget:
// corr(0) = 1 and corr(d) -> 0 as d grows. Half-integer orders use the
// closed forms in exp; every other positive order goes through the modified
// Bessel function of the second kind. Throws ConfigError on d < 0 or
// invalid range or smoothness.
double matern_corr(double d, double range, double nu);

// Full covariance including the nugget: C(0) = sill + nugget, and
// C(d) = sill * corr(d) for d > 0. The nugget acts only at exactly zero
// distance, which is what makes the latent and observed processes differ.
double matern_cov(double d, const CovarianceParams& p);

// out[i] = corr(d[i]) for d[i] >= 0. The closed-form orders run through the
// vectorized kernels and agree with matern_corr to a few ulps, not bitwise;
// other orders fall back to per-element evaluation and match it exactly.
void matern_corr_bulk(const double* d, double* out, std::size_t n, double range, double nu);

} // namespace yieldmap
