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

#include "kernels/backends.hpp"

// This translation unit is compiled with -mavx2 -mfma on x86-64 and must not
// leak AVX2 code into any other unit; runtime dispatch guards every call.

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace yieldmap::kernels::detail {

namespace {

// 2^e per lane, e in [-1022+..., 2046-1023]; exponent field arithmetic only.
inline __m256d pow2_lanes(__m256i e) {
    const __m256i bias = _mm256_set1_epi64x(1023);
    return _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_add_epi64(e, bias), 52));
}

// Vector companion of exp_one in backends.hpp: same reduction, same
// polynomial, same two-step scaling, so lanes and scalar tail agree bitwise.
inline __m256d exp_lanes(__m256d x) {
    const __m256d log2e = _mm256_set1_pd(kLog2E);
    const __m256d ln2_hi = _mm256_set1_pd(kLn2Hi);
    const __m256d ln2_lo = _mm256_set1_pd(kLn2Lo);

    const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
    r = _mm256_fnmadd_pd(n, ln2_lo, r);

    __m256d p = _mm256_set1_pd(kExpPoly[13]);
    for (int k = 12; k >= 0; --k) {
        p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kExpPoly[k]));
    }

    // Halve the exponent in 32-bit lanes (AVX2 has no 64-bit arithmetic
    // shift), truncating toward zero exactly like exp_one's integer divide.
    const __m128i n32 = _mm256_cvtpd_epi32(n);
    const __m128i sign = _mm_srli_epi32(n32, 31);
    const __m128i n1_32 = _mm_srai_epi32(_mm_add_epi32(n32, sign), 1);
    const __m128i n2_32 = _mm_sub_epi32(n32, n1_32);
    const __m256i n1 = _mm256_cvtepi32_epi64(n1_32);
    const __m256i n2 = _mm256_cvtepi32_epi64(n2_32);

    __m256d result = _mm256_mul_pd(_mm256_mul_pd(p, pow2_lanes(n1)), pow2_lanes(n2));

    // Edge lanes: overflow, underflow, NaN passthrough.
    const __m256d inf = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    const __m256d zero = _mm256_setzero_pd();
    result = _mm256_blendv_pd(result, inf, _mm256_cmp_pd(x, _mm256_set1_pd(kExpOverflow), _CMP_GT_OQ));
    result = _mm256_blendv_pd(result, zero, _mm256_cmp_pd(x, _mm256_set1_pd(kExpUnderflow), _CMP_LT_OQ));
    result = _mm256_blendv_pd(result, x, _mm256_cmp_pd(x, x, _CMP_UNORD_Q));
    return result;
}

} // namespace

bool avx2_compiled() { return true; }

void exp_array_avx2(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, exp_lanes(_mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) {
        out[i] = exp_one(x[i]);
    }
}

void matern_corr_array_avx2(double nu, double inv_rho, const double* d, double* out,
                            std::size_t n) {
    const __m256d vinv = _mm256_set1_pd(inv_rho);
    std::size_t i = 0;
    if (nu == 0.5) {
        for (; i + 4 <= n; i += 4) {
            const __m256d u = _mm256_mul_pd(_mm256_loadu_pd(d + i), vinv);
            _mm256_storeu_pd(out + i, exp_lanes(_mm256_sub_pd(_mm256_setzero_pd(), u)));
        }
    } else if (nu == 1.5) {
        const __m256d one = _mm256_set1_pd(1.0);
        for (; i + 4 <= n; i += 4) {
            const __m256d u = _mm256_mul_pd(_mm256_loadu_pd(d + i), vinv);
            const __m256d e = exp_lanes(_mm256_sub_pd(_mm256_setzero_pd(), u));
            _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_add_pd(one, u), e));
        }
    } else {
        const __m256d one = _mm256_set1_pd(1.0);
        const __m256d third = _mm256_set1_pd(1.0 / 3.0);
        for (; i + 4 <= n; i += 4) {
            const __m256d u = _mm256_mul_pd(_mm256_loadu_pd(d + i), vinv);
            const __m256d e = exp_lanes(_mm256_sub_pd(_mm256_setzero_pd(), u));
            const __m256d uu3 = _mm256_mul_pd(_mm256_mul_pd(u, u), third);
            const __m256d factor = _mm256_add_pd(_mm256_add_pd(one, u), uu3);
            _mm256_storeu_pd(out + i, _mm256_mul_pd(factor, e));
        }
    }
    for (; i < n; ++i) {
        const double u = d[i] * inv_rho;
        out[i] = matern_factor(nu, u) * exp_one(-u);
    }
}

void sq_dist_array_avx2(double px, double py, const double* xs, const double* ys, double* out,
                        std::size_t n) {
    // Plain mul/mul/add, no FMA: keeps every backend bit-identical here.
    const __m256d vpx = _mm256_set1_pd(px);
    const __m256d vpy = _mm256_set1_pd(py);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vpx);
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), vpy);
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
    }
    for (; i < n; ++i) {
        const double dx = xs[i] - px;
        const double dy = ys[i] - py;
        out[i] = dx * dx + dy * dy;
    }
}

} // namespace yieldmap::kernels::detail

#else // !(__AVX2__ && __FMA__)

namespace yieldmap::kernels::detail {

bool avx2_compiled() { return false; }

void exp_array_avx2(const double* x, double* out, std::size_t n) {
    exp_array_scalar(x, out, n);
}

void matern_corr_array_avx2(double nu, double inv_rho, const double* d, double* out,
                            std::size_t n) {
    matern_corr_array_scalar(nu, inv_rho, d, out, n);
}

void sq_dist_array_avx2(double px, double py, const double* xs, const double* ys, double* out,
                        std::size_t n) {
    sq_dist_array_scalar(px, py, xs, ys, out, n);
}

} // namespace yieldmap::kernels::detail

#endif
