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
#include <vector>

namespace yieldmap::linalg {

// Cholesky factorization of a symmetric positive definite matrix, the single
// entry point for every dense solve in the smoother. Storage is row major;
// only the lower triangle of the input is read and the factor satisfies
// A = L L^T with a positive diagonal.
//
// The build prefers LAPACK through LAPACKE and falls back to a portable
// unblocked factorization when LAPACK is absent. The two routes agree to
// roundoff; the fallback is roughly an order of magnitude slower at n = 1500,
// which still keeps the smoother inside its time budget.
class Cholesky {
public:
    // Factors a, an n x n row-major matrix whose lower triangle holds the
    // symmetric input. Throws NumericError when a leading minor is not
    // positive definite or when the storage size does not match n.
    Cholesky(std::vector<double> a, std::size_t n);

    std::size_t size() const { return n_; }

    // In-place solve of L X = B with B row major, n rows by nrhs columns.
    void solve_lower(double* b, std::size_t nrhs) const;

    // In-place solve of L^T X = B with B row major, n rows by nrhs columns.
    void solve_upper(double* b, std::size_t nrhs) const;

    // In-place solve of A X = B, forward then back substitution.
    void solve(double* b, std::size_t nrhs) const;

    void solve_lower(std::vector<double>& b) const;
    void solve_upper(std::vector<double>& b) const;
    void solve(std::vector<double>& b) const;

    // Solves L x = r_k in place for m right-hand sides stored as the rows of
    // r, each of length n. This is the layout kriging blocks produce and it
    // maps onto one triangular solve without any transposition.
    void solve_lower_rows(double* r, std::size_t m) const;

    // Same layout, solving L^T x = r_k per row.
    void solve_upper_rows(double* r, std::size_t m) const;

    // log det A = 2 * sum_i log L_ii. Finite for every factor this class
    // constructs, since the diagonal is strictly positive.
    double logdet() const;

    // Row-major factor with the strict upper triangle zeroed.
    const std::vector<double>& factor() const { return l_; }

private:
    void check_rhs(std::size_t nrhs) const;

    std::vector<double> l_;
    std::size_t n_ = 0;
};

// True when factorizations run through LAPACK, false on the portable
// fallback. Recorded in run reports so results can be traced to a backend.
bool using_lapack();

} // namespace yieldmap::linalg
