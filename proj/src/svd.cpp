#include "rekgs/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rekgs {

namespace {

// Column-major working copy used by the Jacobi sweeps and Gram-Schmidt.
struct ColumnBuffer {
    std::size_t rows;
    std::size_t cols;
    Vector data;  // column j at data[j * rows .. j * rows + rows)

    explicit ColumnBuffer(const DenseMatrix& a)
        : rows(a.rows()), cols(a.cols()), data(rows * cols) {
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < cols; ++j) {
                data[j * rows + i] = a(i, j);
            }
        }
    }

    ColumnBuffer(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double* col(std::size_t j) { return data.data() + j * rows; }
    const double* col(std::size_t j) const { return data.data() + j * rows; }

    DenseMatrix to_row_major() const {
        Vector e(rows * cols);
        for (std::size_t j = 0; j < cols; ++j) {
            const double* c = col(j);
            for (std::size_t i = 0; i < rows; ++i) e[i * cols + j] = c[i];
        }
        return DenseMatrix(rows, cols, std::move(e));
    }
};

double col_dot(const ColumnBuffer& b, std::size_t p, std::size_t q) {
    const double* x = b.col(p);
    const double* y = b.col(q);
    double s = 0.0;
    for (std::size_t i = 0; i < b.rows; ++i) s += x[i] * y[i];
    return s;
}

void rotate_cols(ColumnBuffer& b, std::size_t p, std::size_t q, double c, double s) {
    double* x = b.col(p);
    double* y = b.col(q);
    for (std::size_t i = 0; i < b.rows; ++i) {
        const double xi = x[i];
        const double yi = y[i];
        x[i] = c * xi - s * yi;
        y[i] = s * xi + c * yi;
    }
}

// One-sided Jacobi on the columns of w; accumulates the rotations into v.
void jacobi_sweeps(ColumnBuffer& w, ColumnBuffer& v) {
    constexpr int kMaxSweeps = 60;
    constexpr double kOffTol = 1e-15;
    const std::size_t n = w.cols;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool converged = true;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double alpha = col_dot(w, p, p);
                const double beta = col_dot(w, q, q);
                const double gamma = col_dot(w, p, q);
                if (alpha == 0.0 || beta == 0.0) continue;
                if (std::abs(gamma) <= kOffTol * std::sqrt(alpha * beta)) continue;
                converged = false;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                rotate_cols(w, p, q, c, s);
                rotate_cols(v, p, q, c, s);
            }
        }
        if (converged) break;
    }
}

SvdResult svd_tall(const DenseMatrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    ColumnBuffer w(a);
    ColumnBuffer v(n, n);
    for (std::size_t j = 0; j < n; ++j) v.col(j)[j] = 1.0;
    jacobi_sweeps(w, v);

    Vector sigma(n);
    for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(col_dot(w, j, j));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    ColumnBuffer u_sorted(m, n);
    ColumnBuffer v_sorted(n, n);
    Vector sigma_sorted(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        sigma_sorted[j] = sigma[src];
        const double* wc = w.col(src);
        double* uc = u_sorted.col(j);
        if (sigma[src] > 0.0) {
            for (std::size_t i = 0; i < m; ++i) uc[i] = wc[i] / sigma[src];
        }
        const double* vc = v.col(src);
        double* vd = v_sorted.col(j);
        for (std::size_t i = 0; i < n; ++i) vd[i] = vc[i];
    }

    return SvdResult{u_sorted.to_row_major(), sigma_sorted,
                     v_sorted.to_row_major(),
                     spectral_from_singular_values(sigma_sorted, m, n)};
}

}  // namespace

SpectralData spectral_from_singular_values(Vector sigma, std::size_t rows,
                                           std::size_t cols) {
    std::sort(sigma.begin(), sigma.end(), std::greater<>());
    SpectralData s;
    s.sigma_max = sigma.empty() ? 0.0 : sigma.front();
    const double tol =
        static_cast<double>(std::max(rows, cols)) * s.sigma_max * 1e-12;
    s.rank = 0;
    while (s.rank < sigma.size() && sigma[s.rank] > tol) ++s.rank;
    s.sigma_min_nonzero = s.rank > 0 ? sigma[s.rank - 1] : 0.0;
    s.singular_values = std::move(sigma);
    return s;
}

SvdResult svd_small(const DenseMatrix& a, std::size_t size_cap) {
    if (std::min(a.rows(), a.cols()) > size_cap) {
        throw std::invalid_argument("svd_small: matrix exceeds the size cap");
    }
    if (a.rows() >= a.cols()) {
        return svd_tall(a);
    }
    SvdResult t = svd_tall(a.transposed());
    return SvdResult{std::move(t.v), std::move(t.sigma), std::move(t.u),
                     std::move(t.spectral)};
}

Vector pinv_apply(const SvdResult& svd, std::span<const double> b) {
    if (b.size() != svd.u.rows()) {
        throw std::invalid_argument("pinv_apply: vector length does not match rows");
    }
    // x = V diag(1/sigma over the numerical rank) U^T b
    Vector utb(svd.spectral.rank, 0.0);
    for (std::size_t j = 0; j < svd.spectral.rank; ++j) {
        utb[j] = col_dot(svd.u, j, b) / svd.sigma[j];
    }
    Vector x(svd.v.rows(), 0.0);
    for (std::size_t i = 0; i < svd.v.rows(); ++i) {
        const auto r = svd.v.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < svd.spectral.rank; ++j) s += r[j] * utb[j];
        x[i] = s;
    }
    return x;
}

Vector pinv_solve_oracle(const DenseMatrix& a, std::span<const double> b) {
    return pinv_apply(svd_small(a), b);
}

DenseMatrix orthonormalize_columns(const DenseMatrix& m) {
    ColumnBuffer q(m);
    const std::size_t rows = q.rows;
    for (std::size_t j = 0; j < q.cols; ++j) {
        double* v = q.col(j);
        double init = 0.0;
        for (std::size_t i = 0; i < rows; ++i) init += v[i] * v[i];
        init = std::sqrt(init);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t p = 0; p < j; ++p) {
                const double* qp = q.col(p);
                double proj = 0.0;
                for (std::size_t i = 0; i < rows; ++i) proj += qp[i] * v[i];
                for (std::size_t i = 0; i < rows; ++i) v[i] -= proj * qp[i];
            }
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < rows; ++i) nrm += v[i] * v[i];
        nrm = std::sqrt(nrm);
        if (!(nrm > 1e-10 * init) || init == 0.0) {
            throw std::invalid_argument(
                "orthonormalize_columns: numerically dependent columns");
        }
        for (std::size_t i = 0; i < rows; ++i) v[i] /= nrm;
    }
    return q.to_row_major();
}

}  // namespace rekgs
