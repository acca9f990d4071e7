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
#include <cstdint>
#include <limits>

// Internal backend entry points plus the shared exp algorithm. Each backend
// translation unit defines its trio; on targets where the instruction set is
// not compiled in, the TU compiles to forwarding stubs and reports itself
// unavailable.

namespace yieldmap::kernels::detail {

void exp_array_scalar(const double* x, double* out, std::size_t n);
void matern_corr_array_scalar(double nu, double inv_rho, const double* d, double* out,
                              std::size_t n);
void sq_dist_array_scalar(double px, double py, const double* xs, const double* ys, double* out,
                          std::size_t n);

bool avx2_compiled();
void exp_array_avx2(const double* x, double* out, std::size_t n);
void matern_corr_array_avx2(double nu, double inv_rho, const double* d, double* out,
                            std::size_t n);
void sq_dist_array_avx2(double px, double py, const double* xs, const double* ys, double* out,
                        std::size_t n);

bool neon_compiled();
void exp_array_neon(const double* x, double* out, std::size_t n);
void matern_corr_array_neon(double nu, double inv_rho, const double* d, double* out,
                            std::size_t n);
void sq_dist_array_neon(double px, double py, const double* xs, const double* ys, double* out,
                        std::size_t n);

// Argument-reduction constants shared by every exp implementation.
// ln2 is split so that n * kLn2Hi is exact for |n| < 2^16 (Cody-Waite).
inline constexpr double kLog2E = 1.44269504088896338700e+00;
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kExpOverflow = 709.782712893383973096;
inline constexpr double kExpUnderflow = -745.133219101941108420;

// Degree-13 Taylor coefficients of exp. With |r| <= ln2/2 after reduction
// the truncation error is below 1e-17 relative, under one ulp.
inline constexpr double kExpPoly[14] = {
    1.0,
    1.0,
    1.0 / 2.0,
    1.0 / 6.0,
    1.0 / 24.0,
    1.0 / 120.0,
    1.0 / 720.0,
    1.0 / 5040.0,
    1.0 / 40320.0,
    1.0 / 362880.0,
    1.0 / 3628800.0,
    1.0 / 39916800.0,
    1.0 / 479001600.0,
    1.0 / 6227020800.0,
};

// Scalar mirror of the vector exp: identical operations in identical order
// (std::fma matches the hardware FMA the vector lanes use), so a vector
// backend can process array tails with this and stay bit-consistent.
inline double exp_one(double x) {
    if (std::isnan(x)) {
        return x;
    }
    if (x > kExpOverflow) {
        return std::numeric_limits<double>::infinity();
    }
    if (x < kExpUnderflow) {
        return 0.0;
    }
    const double n = std::nearbyint(x * kLog2E);
    double r = std::fma(-n, kLn2Hi, x);
    r = std::fma(-n, kLn2Lo, r);

    double p = kExpPoly[13];
    for (int k = 12; k >= 0; --k) {
        p = std::fma(p, r, kExpPoly[k]);
    }

    // 2^n in two steps so exponents beyond the normal range still scale
    // through gradual underflow or overflow to infinity.
    const auto ni = static_cast<std::int64_t>(n);
    const std::int64_t n1 = ni / 2;
    const std::int64_t n2 = ni - n1;
    const auto pow2 = [](std::int64_t e) {
        std::uint64_t bits = static_cast<std::uint64_t>(e + 1023) << 52;
        double v;
        __builtin_memcpy(&v, &bits, sizeof v);
        return v;
    };
    return p * pow2(n1) * pow2(n2);
}

inline double matern_factor(double nu, double u) {
    if (nu == 0.5) {
        return 1.0;
    }
    if (nu == 1.5) {
        return 1.0 + u;
    }
    return 1.0 + u + u * u * (1.0 / 3.0);
}

} // namespace yieldmap::kernels::detail
