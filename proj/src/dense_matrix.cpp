#include "rekgs/dense_matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace rekgs {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, Vector entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows_ == 0 || cols_ == 0) {
        throw std::invalid_argument("DenseMatrix: dimensions must be positive");
    }
    if (entries_.size() != rows_ * cols_) {
        throw std::invalid_argument("DenseMatrix: entry count does not match dimensions");
    }
    row_norms_sq_.assign(rows_, 0.0);
    col_norms_sq_.assign(cols_, 0.0);
    frob_sq_ = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        const double* r = entries_.data() + i * cols_;
        double rs = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) {
            const double v = r[j];
            rs += v * v;
            col_norms_sq_[j] += v * v;
        }
        row_norms_sq_[i] = rs;
        frob_sq_ += rs;
    }
}

DenseMatrix DenseMatrix::zeros(std::size_t rows, std::size_t cols) {
    return DenseMatrix(rows, cols, Vector(rows * cols, 0.0));
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    Vector e(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
    return DenseMatrix(n, n, std::move(e));
}

DenseMatrix DenseMatrix::transposed() const {
    Vector e(rows_ * cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            e[j * rows_ + i] = entries_[i * cols_ + j];
        }
    }
    return DenseMatrix(cols_, rows_, std::move(e));
}

Vector matvec(const DenseMatrix& a, std::span<const double> x) {
    if (x.size() != a.cols()) {
        throw std::invalid_argument("matvec: vector length does not match cols");
    }
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        y[i] = row_dot(a, i, x);
    }
    return y;
}

Vector matvec_transpose(const DenseMatrix& a, std::span<const double> y) {
    if (y.size() != a.rows()) {
        throw std::invalid_argument("matvec_transpose: vector length does not match rows");
    }
    Vector x(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double yi = y[i];
        if (yi == 0.0) continue;
        const auto r = a.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j) x[j] += yi * r[j];
    }
    return x;
}

double row_dot(const DenseMatrix& a, std::size_t i, std::span<const double> x) {
    const auto r = a.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += r[j] * x[j];
    return s;
}

double col_dot(const DenseMatrix& a, std::size_t j, std::span<const double> u) {
    const double* e = a.entries().data() + j;
    const std::size_t stride = a.cols();
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += e[i * stride] * u[i];
    return s;
}

void add_scaled_row(const DenseMatrix& a, std::size_t i, double c, Vector& x) {
    const auto r = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) x[j] += c * r[j];
}

void add_scaled_col(const DenseMatrix& a, std::size_t j, double c, Vector& u) {
    const double* e = a.entries().data() + j;
    const std::size_t stride = a.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) u[i] += c * e[i * stride];
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm_sq(std::span<const double> v) { return dot(v, v); }

double norm(std::span<const double> v) { return std::sqrt(norm_sq(v)); }

double dist_sq(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace rekgs
