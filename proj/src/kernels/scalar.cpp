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

#include "kernels/backends.hpp"

// Reference backend. Uses libm exp so the vector backends are always being
// compared against the best generally available answer.

namespace yieldmap::kernels::detail {

void exp_array_scalar(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::exp(x[i]);
    }
}

void matern_corr_array_scalar(double nu, double inv_rho, const double* d, double* out,
                              std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double u = d[i] * inv_rho;
        out[i] = matern_factor(nu, u) * std::exp(-u);
    }
}

void sq_dist_array_scalar(double px, double py, const double* xs, const double* ys, double* out,
                          std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - px;
        const double dy = ys[i] - py;
        out[i] = dx * dx + dy * dy;
    }
}

} // namespace yieldmap::kernels::detail
