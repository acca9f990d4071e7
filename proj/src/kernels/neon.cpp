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

// AArch64 double-precision lane pair. Mirrors the AVX2 unit operation for
// operation; see exp_lanes there for the algorithm notes.

#if defined(__aarch64__)

#include <arm_neon.h>

namespace yieldmap::kernels::detail {

namespace {

inline float64x2_t pow2_lanes(int64x2_t e) {
    const int64x2_t bias = vdupq_n_s64(1023);
    return vreinterpretq_f64_s64(vshlq_n_s64(vaddq_s64(e, bias), 52));
}

inline float64x2_t exp_lanes(float64x2_t x) {
    const float64x2_t n = vrndnq_f64(vmulq_f64(x, vdupq_n_f64(kLog2E)));
    float64x2_t r = vfmsq_f64(x, n, vdupq_n_f64(kLn2Hi));
    r = vfmsq_f64(r, n, vdupq_n_f64(kLn2Lo));

    float64x2_t p = vdupq_n_f64(kExpPoly[13]);
    for (int k = 12; k >= 0; --k) {
        p = vfmaq_f64(vdupq_n_f64(kExpPoly[k]), p, r);
    }

    const int64x2_t ni = vcvtnq_s64_f64(n);
    // Truncating halves, matching exp_one's integer divide.
    const int64x2_t sign = vreinterpretq_s64_u64(vshrq_n_u64(vreinterpretq_u64_s64(ni), 63));
    const int64x2_t n1 = vshrq_n_s64(vaddq_s64(ni, sign), 1);
    const int64x2_t n2 = vsubq_s64(ni, n1);

    float64x2_t result = vmulq_f64(vmulq_f64(p, pow2_lanes(n1)), pow2_lanes(n2));

    const uint64x2_t over = vcgtq_f64(x, vdupq_n_f64(kExpOverflow));
    const uint64x2_t under = vcltq_f64(x, vdupq_n_f64(kExpUnderflow));
    // No 64-bit vmvnq; complement the x == x mask through the u32 view.
    const uint64x2_t nan =
        vreinterpretq_u64_u32(vmvnq_u32(vreinterpretq_u32_u64(vceqq_f64(x, x))));
    result = vbslq_f64(over, vdupq_n_f64(std::numeric_limits<double>::infinity()), result);
    result = vbslq_f64(under, vdupq_n_f64(0.0), result);
    result = vbslq_f64(nan, x, result);
    return result;
}

} // namespace

bool neon_compiled() { return true; }

void exp_array_neon(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(out + i, exp_lanes(vld1q_f64(x + i)));
    }
    for (; i < n; ++i) {
        out[i] = exp_one(x[i]);
    }
}

void matern_corr_array_neon(double nu, double inv_rho, const double* d, double* out,
                            std::size_t n) {
    const float64x2_t vinv = vdupq_n_f64(inv_rho);
    std::size_t i = 0;
    if (nu == 0.5) {
        for (; i + 2 <= n; i += 2) {
            const float64x2_t u = vmulq_f64(vld1q_f64(d + i), vinv);
            vst1q_f64(out + i, exp_lanes(vnegq_f64(u)));
        }
    } else if (nu == 1.5) {
        const float64x2_t one = vdupq_n_f64(1.0);
        for (; i + 2 <= n; i += 2) {
            const float64x2_t u = vmulq_f64(vld1q_f64(d + i), vinv);
            const float64x2_t e = exp_lanes(vnegq_f64(u));
            vst1q_f64(out + i, vmulq_f64(vaddq_f64(one, u), e));
        }
    } else {
        const float64x2_t one = vdupq_n_f64(1.0);
        const float64x2_t third = vdupq_n_f64(1.0 / 3.0);
        for (; i + 2 <= n; i += 2) {
            const float64x2_t u = vmulq_f64(vld1q_f64(d + i), vinv);
            const float64x2_t e = exp_lanes(vnegq_f64(u));
            const float64x2_t uu3 = vmulq_f64(vmulq_f64(u, u), third);
            const float64x2_t factor = vaddq_f64(vaddq_f64(one, u), uu3);
            vst1q_f64(out + i, vmulq_f64(factor, e));
        }
    }
    for (; i < n; ++i) {
        const double u = d[i] * inv_rho;
        out[i] = matern_factor(nu, u) * exp_one(-u);
    }
}

void sq_dist_array_neon(double px, double py, const double* xs, const double* ys, double* out,
                        std::size_t n) {
    const float64x2_t vpx = vdupq_n_f64(px);
    const float64x2_t vpy = vdupq_n_f64(py);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t dx = vsubq_f64(vld1q_f64(xs + i), vpx);
        const float64x2_t dy = vsubq_f64(vld1q_f64(ys + i), vpy);
        vst1q_f64(out + i, vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy)));
    }
    for (; i < n; ++i) {
        const double dx = xs[i] - px;
        const double dy = ys[i] - py;
        out[i] = dx * dx + dy * dy;
    }
}

} // namespace yieldmap::kernels::detail

#else // !__aarch64__

namespace yieldmap::kernels::detail {

bool neon_compiled() { return false; }

void exp_array_neon(const double* x, double* out, std::size_t n) {
    exp_array_scalar(x, out, n);
}

void matern_corr_array_neon(double nu, double inv_rho, const double* d, double* out,
                            std::size_t n) {
    matern_corr_array_scalar(nu, inv_rho, d, out, n);
}

void sq_dist_array_neon(double px, double py, const double* xs, const double* ys, double* out,
                        std::size_t n) {
    sq_dist_array_scalar(px, py, xs, ys, out, n);
}

} // namespace yieldmap::kernels::detail

#endif
