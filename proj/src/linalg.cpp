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

#include "yieldmap/linalg.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "yieldmap/errors.hpp"

#if defined(YIELDMAP_HAVE_LAPACKE)
#include <lapacke.h>
#endif

namespace yieldmap::linalg {

namespace {

#if defined(YIELDMAP_HAVE_LAPACKE)

// The factor buffer is row major; its column-major view is the transpose.
// LAPACK then sees L as the upper-triangular U = L^T, so trans 'T' solves
// L X = B and trans 'N' solves L^T X = B. b_cols holds nrhs systems of
// length n each, contiguous per system, which is simultaneously an n x nrhs
// column-major block and an nrhs x n row-major block. Working through the
// column-major interface this way avoids LAPACKE's internal transposition
// buffers on every call.
void trtrs(const double* l, std::size_t n, char trans, double* b_cols, std::size_t nrhs) {
    const lapack_int info =
        LAPACKE_dtrtrs(LAPACK_COL_MAJOR, 'U', trans, 'N', static_cast<lapack_int>(n),
                       static_cast<lapack_int>(nrhs), l, static_cast<lapack_int>(n), b_cols,
                       static_cast<lapack_int>(n));
    if (info != 0) throw NumericError("cholesky: triangular solve failed (dtrtrs)");
}

#else

// Unblocked left-looking factorization. Kept deliberately simple; it only
// runs when LAPACK is unavailable at configure time.
void factor_portable(double* a, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
        if (!(d > 0.0)) {
            throw NumericError("cholesky: matrix is not positive definite (leading minor " +
                               std::to_string(j + 1) + ")");
        }
        const double ljj = std::sqrt(d);
        a[j * n + j] = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = s / ljj;
        }
    }
}

// Forward substitution, one system per contiguous length-n row of r.
void forward_rows_portable(const double* l, std::size_t n, double* r, std::size_t m) {
    for (std::size_t k = 0; k < m; ++k) {
        double* x = r + k * n;
        for (std::size_t i = 0; i < n; ++i) {
            double s = x[i];
            for (std::size_t j = 0; j < i; ++j) s -= l[i * n + j] * x[j];
            x[i] = s / l[i * n + i];
        }
    }
}

// Back substitution with L^T, same row layout.
void backward_rows_portable(const double* l, std::size_t n, double* r, std::size_t m) {
    for (std::size_t k = 0; k < m; ++k) {
        double* x = r + k * n;
        for (std::size_t ii = n; ii-- > 0;) {
            double s = x[ii];
            for (std::size_t j = ii + 1; j < n; ++j) s -= l[j * n + ii] * x[j];
            x[ii] = s / l[ii * n + ii];
        }
    }
}

#endif // YIELDMAP_HAVE_LAPACKE

} // namespace

Cholesky::Cholesky(std::vector<double> a, std::size_t n) : l_(std::move(a)), n_(n) {
    if (n_ == 0 || l_.size() != n_ * n_) {
        throw NumericError("cholesky: matrix storage does not match its declared size");
    }
#if defined(YIELDMAP_HAVE_LAPACKE)
    // Symmetry makes the row-major lower triangle identical to the
    // column-major upper triangle, so factoring 'U' column major writes L^T
    // there, which reads back as L in row major. No transposition involved.
    const lapack_int info = LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'U', static_cast<lapack_int>(n_),
                                           l_.data(), static_cast<lapack_int>(n_));
    if (info < 0) {
        throw NumericError("cholesky: invalid argument " + std::to_string(-info) + " to dpotrf");
    }
    if (info > 0) {
        throw NumericError("cholesky: matrix is not positive definite (leading minor " +
                           std::to_string(info) + ")");
    }
#else
    factor_portable(l_.data(), n_);
#endif
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j) l_[i * n_ + j] = 0.0;
    }
}

void Cholesky::check_rhs(std::size_t nrhs) const {
    if (nrhs == 0) throw NumericError("cholesky: solve called with zero right-hand sides");
}

void Cholesky::solve_lower_rows(double* r, std::size_t m) const {
    check_rhs(m);
#if defined(YIELDMAP_HAVE_LAPACKE)
    trtrs(l_.data(), n_, 'T', r, m);
#else
    forward_rows_portable(l_.data(), n_, r, m);
#endif
}

void Cholesky::solve_upper_rows(double* r, std::size_t m) const {
    check_rhs(m);
#if defined(YIELDMAP_HAVE_LAPACKE)
    trtrs(l_.data(), n_, 'N', r, m);
#else
    backward_rows_portable(l_.data(), n_, r, m);
#endif
}

namespace {

// Adapts a row-major n x nrhs block (systems in columns) to the contiguous
// per-system layout the row solvers use.
std::vector<double> gather_columns(const double* b, std::size_t n, std::size_t nrhs) {
    std::vector<double> s(n * nrhs);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < nrhs; ++j) s[j * n + i] = b[i * nrhs + j];
    }
    return s;
}

void scatter_columns(const std::vector<double>& s, double* b, std::size_t n, std::size_t nrhs) {
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < nrhs; ++j) b[i * nrhs + j] = s[j * n + i];
    }
}

} // namespace

void Cholesky::solve_lower(double* b, std::size_t nrhs) const {
    check_rhs(nrhs);
    if (nrhs == 1) {
        solve_lower_rows(b, 1);
        return;
    }
    auto s = gather_columns(b, n_, nrhs);
    solve_lower_rows(s.data(), nrhs);
    scatter_columns(s, b, n_, nrhs);
}

void Cholesky::solve_upper(double* b, std::size_t nrhs) const {
    check_rhs(nrhs);
    if (nrhs == 1) {
        solve_upper_rows(b, 1);
        return;
    }
    auto s = gather_columns(b, n_, nrhs);
    solve_upper_rows(s.data(), nrhs);
    scatter_columns(s, b, n_, nrhs);
}

void Cholesky::solve(double* b, std::size_t nrhs) const {
    solve_lower(b, nrhs);
    solve_upper(b, nrhs);
}

void Cholesky::solve_lower(std::vector<double>& b) const {
    if (b.size() != n_) throw NumericError("cholesky: right-hand side length mismatch");
    solve_lower(b.data(), 1);
}

void Cholesky::solve_upper(std::vector<double>& b) const {
    if (b.size() != n_) throw NumericError("cholesky: right-hand side length mismatch");
    solve_upper(b.data(), 1);
}

void Cholesky::solve(std::vector<double>& b) const {
    if (b.size() != n_) throw NumericError("cholesky: right-hand side length mismatch");
    solve(b.data(), 1);
}

double Cholesky::logdet() const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += std::log(l_[i * n_ + i]);
    return 2.0 * s;
}

bool using_lapack() {
#if defined(YIELDMAP_HAVE_LAPACKE)
    return true;
#else
    return false;
#endif
}

} // namespace yieldmap::linalg
