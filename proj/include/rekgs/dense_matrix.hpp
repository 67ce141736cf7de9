#ifndef REKGS_DENSE_MATRIX_HPP
#define REKGS_DENSE_MATRIX_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace rekgs {

using Vector = std::vector<double>;

/// Row-major dense real matrix with cached row/column squared norms.
/// Immutable after construction; all norm caches are computed once.
class DenseMatrix {
public:
    DenseMatrix(std::size_t rows, std::size_t cols, Vector entries);

    static DenseMatrix zeros(std::size_t rows, std::size_t cols);
    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double operator()(std::size_t i, std::size_t j) const {
        return entries_[i * cols_ + j];
    }

    std::span<const double> row(std::size_t i) const {
        return {entries_.data() + i * cols_, cols_};
    }

    const Vector& entries() const noexcept { return entries_; }
    const Vector& row_norms_sq() const noexcept { return row_norms_sq_; }
    const Vector& col_norms_sq() const noexcept { return col_norms_sq_; }
    double row_norm_sq(std::size_t i) const { return row_norms_sq_[i]; }
    double col_norm_sq(std::size_t j) const { return col_norms_sq_[j]; }
    double frob_sq() const noexcept { return frob_sq_; }

    DenseMatrix transposed() const;

private:
    std::size_t rows_;
    std::size_t cols_;
    Vector entries_;
    Vector row_norms_sq_;
    Vector col_norms_sq_;
    double frob_sq_;
};

/// y = A x. Throws std::invalid_argument on dimension mismatch.
Vector matvec(const DenseMatrix& a, std::span<const double> x);

/// x = A^T y. Throws std::invalid_argument on dimension mismatch.
Vector matvec_transpose(const DenseMatrix& a, std::span<const double> y);

/// Inner product of row i of A with x (x has cols entries).
double row_dot(const DenseMatrix& a, std::size_t i, std::span<const double> x);

/// Inner product of column j of A with u (u has rows entries).
double col_dot(const DenseMatrix& a, std::size_t j, std::span<const double> u);

/// x += c * (row i of A).
void add_scaled_row(const DenseMatrix& a, std::size_t i, double c, Vector& x);

/// u += c * (column j of A).
void add_scaled_col(const DenseMatrix& a, std::size_t j, double c, Vector& u);

double dot(std::span<const double> a, std::span<const double> b);
double norm_sq(std::span<const double> v);
double norm(std::span<const double> v);

/// Squared Euclidean distance ||a - b||^2.
double dist_sq(std::span<const double> a, std::span<const double> b);

}  // namespace rekgs

#endif  // REKGS_DENSE_MATRIX_HPP
