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

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include <doctest.h>

#include <Eigen/Dense>

#include "yieldmap/covariance.hpp"
#include "yieldmap/errors.hpp"

using namespace yieldmap;

namespace {

// The defining formula, written out independently of the implementation so
// the closed forms are checked against the Bessel route and not themselves.
double bessel_form(double u, double nu) {
    return std::exp2(1.0 - nu) / std::tgamma(nu) * std::pow(u, nu) * std::cyl_bessel_k(nu, u);
}

} // namespace

TEST_SUITE("covariance") {

TEST_CASE("parameter validation") {
    CHECK_NOTHROW(validate({1.0, 30.0, 0.5, 0.1}));
    CHECK_NOTHROW(validate({2.5, 1e-3, 2.5, 0.0}));
    CHECK_THROWS_WITH_AS(validate({0.0, 1.0, 0.5, 0.0}), doctest::Contains("sill"), ConfigError);
    CHECK_THROWS_AS(validate({-1.0, 1.0, 0.5, 0.0}), ConfigError);
    CHECK_THROWS_WITH_AS(validate({1.0, 0.0, 0.5, 0.0}), doctest::Contains("range"), ConfigError);
    CHECK_THROWS_WITH_AS(validate({1.0, 1.0, 0.5, -0.1}), doctest::Contains("nugget"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(validate({1.0, 1.0, 0.0, 0.0}), doctest::Contains("smoothness"),
                         ConfigError);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(validate({1.0, inf, 0.5, 0.0}), ConfigError);
    CHECK_THROWS_AS(validate({1.0, 1.0, std::nan(""), 0.0}), ConfigError);

    CHECK(is_candidate_smoothness(0.5));
    CHECK(is_candidate_smoothness(1.5));
    CHECK(is_candidate_smoothness(2.5));
    CHECK_FALSE(is_candidate_smoothness(1.0));
    CHECK_FALSE(is_candidate_smoothness(0.4999));
}

TEST_CASE("exponential order equals its closed form across the working span") {
    for (double rho : {0.7, 5.0, 30.0}) {
        for (double sill : {0.3, 1.0, 4.0}) {
            CovarianceParams p{sill, rho, 0.5, 0.0};
            for (int i = 0; i <= 2000; ++i) {
                const double d = 10.0 * rho * i / 2000.0;
                const double want = sill * std::exp(-d / rho);
                CHECK(std::abs(matern_cov(d, p) - want) <= 1e-12);
            }
        }
    }
}

TEST_CASE("half-integer closed forms match the Bessel definition") {
    // K_{n+1/2} reduces to elementary functions; both routes must land on
    // the same values up to the Bessel evaluation's own accuracy.
    for (double nu : kSmoothnessCandidates) {
        for (int i = 1; i <= 400; ++i) {
            const double u = 12.0 * i / 400.0;
            const double closed = matern_corr(u, 1.0, nu);
            const double general = bessel_form(u, nu);
            CHECK(closed == doctest::Approx(general).epsilon(5e-13));
        }
    }
}

TEST_CASE("general order matches high-precision references") {
    // Frozen with mpmath at 40 digits: 2^(1-nu)/Gamma(nu) u^nu K_nu(u).
    struct Ref {
        double nu, d, rho, corr;
    };
    const Ref refs[] = {
        {0.75, 1.0, 1.0, 0.50053476184578457112},
        {0.75, 2.5, 1.0, 0.13239262060446821843},
        {1.0, 1.0, 1.0, 0.60190723019723457474},
        {2.0, 3.0, 2.0, 0.65661295866373217794},
        {3.7, 0.4, 1.3, 0.99129421893890175011},
        {0.3, 5.0, 2.0, 0.045258786063023979591},
    };
    for (const auto& r : refs) {
        CHECK(matern_corr(r.d, r.rho, r.nu) == doctest::Approx(r.corr).epsilon(1e-13));
    }
}

TEST_CASE("nugget acts only at exactly zero distance") {
    CovarianceParams p{2.0, 10.0, 1.5, 0.5};
    CHECK(matern_cov(0.0, p) == 2.5);
    // Just off zero the covariance drops to the sill; the gap is the nugget.
    const double near = matern_cov(1e-9, p);
    CHECK(near == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(matern_cov(0.0, p) - near > 0.49);
}

TEST_CASE("correlation is one at zero and decays monotonically") {
    for (double nu : {0.5, 1.5, 2.5, 0.8, 3.0}) {
        CHECK(matern_corr(0.0, 4.0, nu) == 1.0);
        double prev = 1.0;
        for (int i = 1; i <= 300; ++i) {
            const double d = i * 0.5;
            const double c = matern_corr(d, 4.0, nu);
            CHECK(c <= prev);
            if (d < 60.0) CHECK(c < prev);
            CHECK(c >= 0.0);
            prev = c;
        }
    }
}

TEST_CASE("tiny distances stay finite on the general route") {
    for (double nu : {0.2, 0.75, 3.7, 8.0}) {
        for (double d : {1e-6, 1e-30, 1e-120, 1e-300, 5e-324}) {
            const double c = matern_corr(d, 1.0, nu);
            CHECK(std::isfinite(c));
            CHECK(c > 0.9);
            CHECK(c <= 1.0);
        }
    }
    // Far tail underflows to zero without producing NaN.
    CHECK(matern_corr(1e6, 1.0, 0.75) >= 0.0);
    CHECK(std::isfinite(matern_corr(1e6, 1.0, 0.75)));
}

TEST_CASE("argument validation on evaluation") {
    CHECK_THROWS_AS(matern_corr(-1.0, 1.0, 0.5), ConfigError);
    CHECK_THROWS_AS(matern_corr(1.0, 0.0, 0.5), ConfigError);
    CHECK_THROWS_AS(matern_corr(1.0, 1.0, -0.5), ConfigError);
    CHECK_THROWS_AS(matern_corr(std::nan(""), 1.0, 0.5), ConfigError);
    CHECK_THROWS_AS(matern_cov(1.0, {1.0, 1.0, 0.5, -1.0}), ConfigError);
}

TEST_CASE("bulk evaluation agrees with the scalar route") {
    std::mt19937_64 rng(314159);
    std::uniform_real_distribution<double> uni(0.0, 200.0);
    std::vector<double> d(513);
    for (double& v : d) v = uni(rng);
    d[0] = 0.0;
    std::vector<double> out(d.size());

    for (double nu : {0.5, 1.5, 2.5}) {
        matern_corr_bulk(d.data(), out.data(), d.size(), 25.0, nu);
        for (std::size_t i = 0; i < d.size(); ++i) {
            const double want = matern_corr(d[i], 25.0, nu);
            // The kernels use their own exp; agreement is a few ulps.
            CHECK(out[i] == doctest::Approx(want).epsilon(1e-14));
            CHECK(std::abs(out[i] - want) <= 1e-15);
        }
    }

    // Orders without a closed form share code with the scalar route.
    matern_corr_bulk(d.data(), out.data(), d.size(), 25.0, 0.75);
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(out[i] == matern_corr(d[i], 25.0, 0.75));
    }
}

TEST_CASE("gram matrices are positive semidefinite") {
    std::mt19937_64 rng(20260815);
    std::uniform_real_distribution<double> uni(0.0, 100.0);
    const std::size_t n = 200;
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = uni(rng);
        ys[i] = uni(rng);
    }

    for (double nu : {0.5, 1.5, 2.5}) {
        for (double rho : {5.0, 40.0}) {
            const double sill = 2.0;
            CovarianceParams p{sill, rho, nu, 0.0};
            Eigen::MatrixXd k(n, n);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    const double dx = xs[i] - xs[j];
                    const double dy = ys[i] - ys[j];
                    k(i, j) = matern_cov(std::hypot(dx, dy), p);
                }
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
            REQUIRE(es.info() == Eigen::Success);
            CHECK(es.eigenvalues().minCoeff() >= -1e-8 * sill);
        }
    }
}

} // TEST_SUITE

