#ifndef REKGS_SVD_HPP
#define REKGS_SVD_HPP

#include <cstddef>

#include "rekgs/dense_matrix.hpp"

namespace rekgs {

/// Singular value summary of a matrix. sigma_min_nonzero is the smallest
/// singular value above the numerical rank tolerance
/// tol = max(rows, cols) * sigma_max * 1e-12.
struct SpectralData {
    Vector singular_values;  // non-increasing
    std::size_t rank = 0;
    double sigma_max = 0.0;
    double sigma_min_nonzero = 0.0;
};

/// Builds SpectralData from an unsorted list of singular values.
SpectralData spectral_from_singular_values(Vector sigma, std::size_t rows,
                                           std::size_t cols);

/// Thin SVD A = U diag(sigma) V^T with p = min(rows, cols) columns.
/// Columns of U belonging to zero singular values are left as zero vectors.
struct SvdResult {
    DenseMatrix u;  // rows x p
    Vector sigma;   // p, non-increasing
    DenseMatrix v;  // cols x p
    SpectralData spectral;
};

/// One-sided Jacobi SVD for small dense matrices.
/// Throws std::invalid_argument if min(rows, cols) exceeds size_cap.
SvdResult svd_small(const DenseMatrix& a, std::size_t size_cap = 2000);

/// x = A^dag b computed from an existing decomposition.
Vector pinv_apply(const SvdResult& svd, std::span<const double> b);

/// Independent pseudoinverse oracle: x = A^dag b via svd_small.
/// Used for ground truth in tests and problem metadata only; never on the
/// iterative solve path.
Vector pinv_solve_oracle(const DenseMatrix& a, std::span<const double> b);

/// Modified Gram-Schmidt with one re-orthogonalization pass.
/// Returns Q with orthonormal columns spanning the columns of m.
/// Throws std::invalid_argument when a pivot norm falls below
/// 1e-10 times the column's initial norm (numerically dependent columns).
DenseMatrix orthonormalize_columns(const DenseMatrix& m);

}  // namespace rekgs

#endif  // REKGS_SVD_HPP
