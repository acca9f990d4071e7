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

#include "yieldmap/covariance.hpp"

#include <cmath>
#include <string>

#include "yieldmap/errors.hpp"
#include "yieldmap/kernels/kernels.hpp"

namespace yieldmap {

namespace {

bool half_integer_form(double nu) {
    return nu == 0.5 || nu == 1.5 || nu == 2.5;
}

void check_corr_args(double d, double range, double nu) {
    if (!(range > 0.0) || !std::isfinite(range)) {
        throw ConfigError("covariance: range must be positive and finite");
    }
    if (!(nu > 0.0) || !std::isfinite(nu)) {
        throw ConfigError("covariance: smoothness must be positive and finite");
    }
    if (!(d >= 0.0)) {
        throw ConfigError("covariance: distance must be nonnegative");
    }
}

// corr(u) = 2^(1-nu) / Gamma(nu) * u^nu * K_nu(u) for scaled distance u > 0.
// When K_nu overflows, u is so small relative to nu that the product equals
// 1 to machine precision, so that limit is returned directly. The product is
// clamped to [0, 1]; the true function lies inside and rounding can poke out.
double general_corr(double u, double nu) {
    if (u < 1e-100) return 1.0;
    const double k = std::cyl_bessel_k(nu, u);
    if (!std::isfinite(k)) return 1.0;
    const double scale = std::exp2(1.0 - nu) / std::tgamma(nu);
    const double c = scale * std::pow(u, nu) * k;
    if (c < 0.0) return 0.0;
    if (c > 1.0) return 1.0;
    return c;
}

} // namespace

bool is_candidate_smoothness(double nu) {
    for (double c : kSmoothnessCandidates) {
        if (nu == c) return true;
    }
    return false;
}

void validate(const CovarianceParams& p) {
    if (!(p.sill > 0.0) || !std::isfinite(p.sill)) {
        throw ConfigError("covariance: sill must be positive and finite");
    }
    if (!(p.range > 0.0) || !std::isfinite(p.range)) {
        throw ConfigError("covariance: range must be positive and finite");
    }
    if (!(p.nugget >= 0.0) || !std::isfinite(p.nugget)) {
        throw ConfigError("covariance: nugget must be nonnegative and finite");
    }
    if (!(p.smoothness > 0.0) || !std::isfinite(p.smoothness)) {
        throw ConfigError("covariance: smoothness must be positive and finite");
    }
}

double matern_corr(double d, double range, double nu) {
    check_corr_args(d, range, nu);
    if (d == 0.0) return 1.0;
    const double u = d / range;
    if (nu == 0.5) return std::exp(-u);
    if (nu == 1.5) return (1.0 + u) * std::exp(-u);
    if (nu == 2.5) return (1.0 + u + u * u / 3.0) * std::exp(-u);
    return general_corr(u, nu);
}

double matern_cov(double d, const CovarianceParams& p) {
    validate(p);
    if (!(d >= 0.0)) throw ConfigError("covariance: distance must be nonnegative");
    if (d == 0.0) return p.sill + p.nugget;
    return p.sill * matern_corr(d, p.range, p.smoothness);
}

void matern_corr_bulk(const double* d, double* out, std::size_t n, double range, double nu) {
    check_corr_args(0.0, range, nu);
    if (n == 0) return;
    if (half_integer_form(nu)) {
        kernels::matern_corr_array(nu, 1.0 / range, d, out, n);
        return;
    }
    for (std::size_t i = 0; i < n; ++i) out[i] = matern_corr(d[i], range, nu);
}

} // namespace yieldmap
