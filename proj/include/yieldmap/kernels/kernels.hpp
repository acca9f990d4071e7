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
#include <string_view>
#include <vector>

namespace yieldmap::kernels {

// Vectorized inner loops for the covariance-heavy paths. The scalar backend
// is the reference; the AVX2 and NEON backends must agree with it to a few
// ulps (exp) or exactly (squared distances). Backend selection is global and
// intended to be set once at startup, before worker threads exist.
enum class Backend {
    kScalar,
    kAvx2,
    kNeon,
};

std::string_view backend_name(Backend b);

// Backends usable on this machine; always contains kScalar.
std::vector<Backend> supported_backends();

// The fastest supported backend, used until set_backend overrides it.
Backend default_backend();

Backend active_backend();

// Throws ConfigError when the backend is not in supported_backends().
void set_backend(Backend b);

// Resolves "scalar", "avx2", "neon" or "auto"; throws ConfigError otherwise.
Backend parse_backend(std::string_view name);

// out[i] = exp(x[i]). Handles the full double range: overflow to +inf,
// underflow to 0, NaN propagated.
void exp_array(const double* x, double* out, std::size_t n);

// out[i] = correlation(d[i] * inv_rho) for the half-integer smoothness
// closed forms, with u = d * inv_rho:
//   nu = 0.5: exp(-u)
//   nu = 1.5: (1 + u) exp(-u)
//   nu = 2.5: (1 + u + u^2/3) exp(-u)
// Throws NumericError for any other nu; callers route general smoothness
// through the Bessel evaluation instead.
void matern_corr_array(double nu, double inv_rho, const double* d, double* out, std::size_t n);

// out[i] = (xs[i] - px)^2 + (ys[i] - py)^2, identical bits on every backend.
void sq_dist_array(double px, double py, const double* xs, const double* ys, double* out,
                   std::size_t n);

} // namespace yieldmap::kernels
