#include "rekgs/problems.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "num_format.hpp"

namespace rekgs {

namespace {

DenseMatrix random_normal_matrix(std::size_t rows, std::size_t cols, RngStream& rng) {
    Vector e(rows * cols);
    for (double& v : e) v = rng.standard_normal();
    return DenseMatrix(rows, cols, std::move(e));
}

// A = U diag(d) V^T for U (m x r), V (n x r).
DenseMatrix assemble_udv(const DenseMatrix& u, const Vector& d, const DenseMatrix& v) {
    const std::size_t m = u.rows();
    const std::size_t n = v.rows();
    const std::size_t r = d.size();
    Vector e(m * n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const auto ui = u.row(i);
        for (std::size_t k = 0; k < r; ++k) {
            const double c = ui[k] * d[k];
            if (c == 0.0) continue;
            const auto vk = v.entries().data() + k;  // column k of V, strided
            for (std::size_t j = 0; j < n; ++j) {
                e[i * n + j] += c * vk[j * r];
            }
        }
    }
    return DenseMatrix(m, n, std::move(e));
}

Vector pinv_from_factors(const Factors& f, std::span<const double> b) {
    // x = V diag(1/d) U^T b
    const std::size_t r = f.d.size();
    Vector utb(r);
    for (std::size_t k = 0; k < r; ++k) {
        utb[k] = col_dot(f.u, k, b) / f.d[k];
    }
    Vector x(f.v.rows(), 0.0);
    for (std::size_t i = 0; i < f.v.rows(); ++i) {
        const auto vi = f.v.row(i);
        double s = 0.0;
        for (std::size_t k = 0; k < r; ++k) s += vi[k] * utb[k];
        x[i] = s;
    }
    return x;
}

Problem finish_problem(DenseMatrix a, Factors factors, Vector b, Vector resid_star) {
    Problem p{std::move(a), std::move(b), std::move(factors), {}, std::move(resid_star),
              true,        {}};
    p.x_star = pinv_from_factors(p.factors, p.b);
    p.consistent = norm(p.resid_star) < 1e-9 * norm(p.b);
    p.spectral = spectral_from_singular_values(p.factors.d, p.rows(), p.cols());
    return p;
}

}  // namespace

Vector Problem::projected_b() const {
    Vector pb(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) pb[i] = b[i] - resid_star[i];
    return pb;
}

std::pair<DenseMatrix, Factors> generate_matrix(std::size_t m, std::size_t n,
                                                std::size_t r, double sigma_max,
                                                double sigma_min, RngStream& rng) {
    if (r < 2) {
        throw std::invalid_argument("generate_matrix: rank must be at least 2");
    }
    if (r > std::min(m, n)) {
        throw std::invalid_argument("generate_matrix: rank exceeds min(m, n)");
    }
    if (!(sigma_min > 0.0) || !(sigma_min <= sigma_max)) {
        throw std::invalid_argument("generate_matrix: need 0 < sigma_min <= sigma_max");
    }
    DenseMatrix u = orthonormalize_columns(random_normal_matrix(m, r, rng));
    DenseMatrix v = orthonormalize_columns(random_normal_matrix(n, r, rng));
    Vector d(r);
    for (std::size_t k = 0; k + 2 < r; ++k) d[k] = rng.uniform(sigma_min, sigma_max);
    d[r - 2] = sigma_min;
    d[r - 1] = sigma_max;
    DenseMatrix a = assemble_udv(u, d, v);
    return {std::move(a), Factors{std::move(u), std::move(d), std::move(v),
                                  FactorSource::Generator}};
}

Problem make_consistent(DenseMatrix a, Factors factors, RngStream& rng) {
    Vector xhat(a.cols());
    for (double& v : xhat) v = rng.standard_normal();
    Vector b = matvec(a, xhat);
    Vector zero(a.rows(), 0.0);
    return finish_problem(std::move(a), std::move(factors), std::move(b), std::move(zero));
}

Problem make_inconsistent(DenseMatrix a, Factors factors, RngStream& rng,
                          std::optional<double> resid_scale) {
    const std::size_t m = a.rows();
    if (factors.d.size() >= m) {
        throw std::invalid_argument("make_inconsistent: full row rank leaves no nul(A^T)");
    }
    Vector xhat(a.cols());
    for (double& v : xhat) v = rng.standard_normal();
    Vector ax = matvec(a, xhat);
    const double scale = resid_scale.value_or(norm(ax));

    Vector resid(m, 0.0);
    if (scale != 0.0) {
        constexpr int kMaxRetries = 64;
        int attempt = 0;
        for (;; ++attempt) {
            if (attempt == kMaxRetries) {
                throw std::runtime_error("make_inconsistent: could not find a nul(A^T) direction");
            }
            Vector w(m);
            for (double& v : w) v = rng.standard_normal();
            // w - U (U^T w): projection onto nul(A^T)
            Vector utw(factors.d.size());
            for (std::size_t k = 0; k < utw.size(); ++k) utw[k] = col_dot(factors.u, k, w);
            for (std::size_t k = 0; k < utw.size(); ++k)
                add_scaled_col(factors.u, k, -utw[k], w);
            const double wn = norm(w);
            if (wn > 1e-8 * std::sqrt(static_cast<double>(m))) {
                for (std::size_t i = 0; i < m; ++i) resid[i] = scale * w[i] / wn;
                break;
            }
        }
    }

    Vector b(m);
    for (std::size_t i = 0; i < m; ++i) b[i] = ax[i] + resid[i];
    return finish_problem(std::move(a), std::move(factors), std::move(b), std::move(resid));
}

Problem problem_from_system(DenseMatrix a, Vector b) {
    if (b.size() != a.rows()) {
        throw std::invalid_argument("problem_from_system: right-hand side length mismatch");
    }
    if (!(a.frob_sq() > 0.0)) {
        throw std::invalid_argument("problem_from_system: all-zero matrix rejected");
    }
    SvdResult svd = svd_small(a);
    const std::size_t r = svd.spectral.rank;
    // Truncate the factors to the numerical rank.
    Vector ue(a.rows() * r);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < r; ++k) ue[i * r + k] = svd.u(i, k);
    Vector ve(a.cols() * r);
    for (std::size_t i = 0; i < a.cols(); ++i)
        for (std::size_t k = 0; k < r; ++k) ve[i * r + k] = svd.v(i, k);
    Vector d(svd.sigma.begin(), svd.sigma.begin() + static_cast<std::ptrdiff_t>(r));
    Factors f{DenseMatrix(a.rows(), r, std::move(ue)), std::move(d),
              DenseMatrix(a.cols(), r, std::move(ve)), FactorSource::ComputedSvd};

    Vector x_star = pinv_apply(svd, b);
    Vector ax = matvec(a, x_star);
    Vector resid(a.rows());
    for (std::size_t i = 0; i < resid.size(); ++i) resid[i] = b[i] - ax[i];
    Problem p{std::move(a), std::move(b), std::move(f), std::move(x_star),
              std::move(resid), true, std::move(svd.spectral)};
    p.consistent = norm(p.resid_star) < 1e-9 * norm(p.b);
    return p;
}

Vector project_rowspace(const Problem& p, std::span<const double> v) {
    const Factors& f = p.factors;
    Vector vtv(f.d.size());
    for (std::size_t k = 0; k < vtv.size(); ++k) vtv[k] = col_dot(f.v, k, v);
    Vector out(p.cols(), 0.0);
    for (std::size_t k = 0; k < vtv.size(); ++k) add_scaled_col(f.v, k, vtv[k], out);
    return out;
}

Vector project_colspace(const Problem& p, std::span<const double> u) {
    const Factors& f = p.factors;
    Vector utu(f.d.size());
    for (std::size_t k = 0; k < utu.size(); ++k) utu[k] = col_dot(f.u, k, u);
    Vector out(p.rows(), 0.0);
    for (std::size_t k = 0; k < utu.size(); ++k) add_scaled_col(f.u, k, utu[k], out);
    return out;
}

namespace {

void write_vector(std::ostream& os, const Vector& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ' ';
        os << detail::format_double(v[i]);
    }
    os << '\n';
}

void write_matrix(std::ostream& os, const DenseMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto r = m.row(i);
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) os << ' ';
            os << detail::format_double(r[j]);
        }
        os << '\n';
    }
}

Vector read_values(std::istream& is, std::size_t count, const char* what) {
    Vector v(count);
    std::string tok;
    for (std::size_t i = 0; i < count; ++i) {
        if (!(is >> tok)) {
            throw std::runtime_error(std::string("load_problem: truncated ") + what);
        }
        v[i] = detail::parse_double(tok);
    }
    return v;
}

void expect_tag(std::istream& is, const std::string& tag) {
    std::string tok;
    if (!(is >> tok) || tok != tag) {
        throw std::runtime_error("load_problem: expected section '" + tag + "'");
    }
}

}  // namespace

void save_problem(const Problem& p, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) {
        throw std::runtime_error("save_problem: cannot open " + path.string());
    }
    os << "rekgs-problem 1\n";
    os << "m " << p.rows() << "\nn " << p.cols() << "\nr " << p.rank() << '\n';
    os << "consistent " << (p.consistent ? 1 : 0) << '\n';
    os << "source "
       << (p.factors.source == FactorSource::Generator ? "generator" : "svd") << '\n';
    os << "A\n";
    write_matrix(os, p.a);
    os << "b\n";
    write_vector(os, p.b);
    os << "U\n";
    write_matrix(os, p.factors.u);
    os << "D\n";
    write_vector(os, p.factors.d);
    os << "V\n";
    write_matrix(os, p.factors.v);
    os << "x_star\n";
    write_vector(os, p.x_star);
    os << "resid_star\n";
    write_vector(os, p.resid_star);
    if (!os) {
        throw std::runtime_error("save_problem: write failed for " + path.string());
    }
}

Problem load_problem(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) {
        throw std::runtime_error("load_problem: cannot open " + path.string());
    }
    std::string tok;
    is >> tok;
    std::size_t version = 0;
    if (tok != "rekgs-problem" || !(is >> version) || version != 1) {
        throw std::runtime_error("load_problem: not a rekgs problem file: " + path.string());
    }
    std::size_t m = 0, n = 0, r = 0;
    int consistent_flag = 0;
    std::string source;
    expect_tag(is, "m");
    is >> m;
    expect_tag(is, "n");
    is >> n;
    expect_tag(is, "r");
    is >> r;
    expect_tag(is, "consistent");
    is >> consistent_flag;
    expect_tag(is, "source");
    is >> source;
    if (!is || m == 0 || n == 0 || r == 0) {
        throw std::runtime_error("load_problem: malformed header in " + path.string());
    }
    expect_tag(is, "A");
    DenseMatrix a(m, n, read_values(is, m * n, "A"));
    expect_tag(is, "b");
    Vector b = read_values(is, m, "b");
    expect_tag(is, "U");
    DenseMatrix u(m, r, read_values(is, m * r, "U"));
    expect_tag(is, "D");
    Vector d = read_values(is, r, "D");
    expect_tag(is, "V");
    DenseMatrix v(n, r, read_values(is, n * r, "V"));
    expect_tag(is, "x_star");
    Vector x_star = read_values(is, n, "x_star");
    expect_tag(is, "resid_star");
    Vector resid_star = read_values(is, m, "resid_star");

    Factors f{std::move(u), std::move(d), std::move(v),
              source == "generator" ? FactorSource::Generator : FactorSource::ComputedSvd};
    Problem p{std::move(a), std::move(b), std::move(f), std::move(x_star),
              std::move(resid_star), consistent_flag != 0, {}};
    p.spectral = spectral_from_singular_values(p.factors.d, p.rows(), p.cols());
    return p;
}

}  // namespace rekgs
