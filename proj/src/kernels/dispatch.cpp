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

#include "yieldmap/kernels/kernels.hpp"

#include <atomic>
#include <string>

#include "kernels/backends.hpp"
#include "yieldmap/errors.hpp"

namespace yieldmap::kernels {

namespace {

bool avx2_usable() {
#if (defined(__x86_64__) || defined(_M_X64)) && defined(__GNUC__)
    return detail::avx2_compiled() && __builtin_cpu_supports("avx2") &&
           __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

bool neon_usable() {
    // Advanced SIMD is baseline on AArch64; compile-time presence is enough.
    return detail::neon_compiled();
}

std::atomic<Backend>& backend_slot() {
    static std::atomic<Backend> slot{default_backend()};
    return slot;
}

void validate_nu(double nu) {
    if (nu != 0.5 && nu != 1.5 && nu != 2.5) {
        throw NumericError("no closed-form correlation for smoothness " + std::to_string(nu) +
                           "; expected 0.5, 1.5 or 2.5");
    }
}

} // namespace

std::string_view backend_name(Backend b) {
    switch (b) {
        case Backend::kScalar: return "scalar";
        case Backend::kAvx2: return "avx2";
        case Backend::kNeon: return "neon";
    }
    return "unknown";
}

std::vector<Backend> supported_backends() {
    std::vector<Backend> out = {Backend::kScalar};
    if (avx2_usable()) {
        out.push_back(Backend::kAvx2);
    }
    if (neon_usable()) {
        out.push_back(Backend::kNeon);
    }
    return out;
}

Backend default_backend() {
    if (neon_usable()) {
        return Backend::kNeon;
    }
    if (avx2_usable()) {
        return Backend::kAvx2;
    }
    return Backend::kScalar;
}

Backend active_backend() { return backend_slot().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
    for (Backend s : supported_backends()) {
        if (s == b) {
            backend_slot().store(b, std::memory_order_relaxed);
            return;
        }
    }
    throw ConfigError("kernel backend '" + std::string(backend_name(b)) +
                      "' is not available on this machine");
}

Backend parse_backend(std::string_view name) {
    if (name == "auto") {
        return default_backend();
    }
    if (name == "scalar") {
        return Backend::kScalar;
    }
    if (name == "avx2") {
        return Backend::kAvx2;
    }
    if (name == "neon") {
        return Backend::kNeon;
    }
    throw ConfigError("unknown kernel backend '" + std::string(name) +
                      "'; expected auto, scalar, avx2 or neon");
}

void exp_array(const double* x, double* out, std::size_t n) {
    switch (active_backend()) {
        case Backend::kAvx2: detail::exp_array_avx2(x, out, n); return;
        case Backend::kNeon: detail::exp_array_neon(x, out, n); return;
        case Backend::kScalar: break;
    }
    detail::exp_array_scalar(x, out, n);
}

void matern_corr_array(double nu, double inv_rho, const double* d, double* out, std::size_t n) {
    validate_nu(nu);
    switch (active_backend()) {
        case Backend::kAvx2: detail::matern_corr_array_avx2(nu, inv_rho, d, out, n); return;
        case Backend::kNeon: detail::matern_corr_array_neon(nu, inv_rho, d, out, n); return;
        case Backend::kScalar: break;
    }
    detail::matern_corr_array_scalar(nu, inv_rho, d, out, n);
}

void sq_dist_array(double px, double py, const double* xs, const double* ys, double* out,
                   std::size_t n) {
    switch (active_backend()) {
        case Backend::kAvx2: detail::sq_dist_array_avx2(px, py, xs, ys, out, n); return;
        case Backend::kNeon: detail::sq_dist_array_neon(px, py, xs, ys, out, n); return;
        case Backend::kScalar: break;
    }
    detail::sq_dist_array_scalar(px, py, xs, ys, out, n);
}

} // namespace yieldmap::kernels
