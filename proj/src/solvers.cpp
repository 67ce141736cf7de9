#include "rekgs/solvers.hpp"

#include <cmath>
#include <stdexcept>

namespace rekgs {

std::string_view algorithm_name(Algorithm algo) {
    switch (algo) {
        case Algorithm::RK: return "rk";
        case Algorithm::RGS: return "rgs";
        case Algorithm::REK_ZF: return "rek_zf";
        case Algorithm::REK_S: return "rek_s";
        case Algorithm::REGS_MNR: return "regs_mnr";
        case Algorithm::REGS_E: return "regs_e";
    }
    return "unknown";
}

Algorithm algorithm_from_name(std::string_view name) {
    if (name == "rk") return Algorithm::RK;
    if (name == "rgs") return Algorithm::RGS;
    if (name == "rek_zf") return Algorithm::REK_ZF;
    if (name == "rek_s") return Algorithm::REK_S;
    if (name == "regs_mnr") return Algorithm::REGS_MNR;
    if (name == "regs_e") return Algorithm::REGS_E;
    throw std::invalid_argument("unknown algorithm name: " + std::string(name));
}

bool is_extended(Algorithm algo) {
    return algo != Algorithm::RK && algo != Algorithm::RGS;
}

namespace {

void check_row(const DenseMatrix& a, std::size_t row) {
    if (row >= a.rows()) throw std::invalid_argument("row index out of range");
    if (!(a.row_norm_sq(row) > 0.0)) throw std::invalid_argument("zero row selected");
}

void check_col(const DenseMatrix& a, std::size_t col) {
    if (col >= a.cols()) throw std::invalid_argument("column index out of range");
    if (!(a.col_norm_sq(col) > 0.0)) throw std::invalid_argument("zero column selected");
}

}  // namespace

void rk_step(const DenseMatrix& a, std::span<const double> b, Vector& x,
             std::size_t row) {
    check_row(a, row);
    const double coef = (row_dot(a, row, x) - b[row]) / a.row_norm_sq(row);
    add_scaled_row(a, row, -coef, x);
}

void rk_null_step(const DenseMatrix& a, Vector& z, std::size_t col) {
    check_col(a, col);
    const double coef = col_dot(a, col, z) / a.col_norm_sq(col);
    add_scaled_col(a, col, -coef, z);
}

void rgs_step(const DenseMatrix& a, std::span<const double> /*b*/, Vector& x,
              Vector& residual, std::size_t col) {
    // b enters through the maintained residual A x - b.
    check_col(a, col);
    const double delta = -col_dot(a, col, residual) / a.col_norm_sq(col);
    x[col] += delta;
    add_scaled_col(a, col, delta, residual);
}

void rek_zf_iterate(const DenseMatrix& a, std::span<const double> b, Vector& x,
                    Vector& z, std::size_t col, std::size_t row) {
    check_row(a, row);
    const double zi_prev = z[row];
    rk_null_step(a, z, col);
    const double coef = (row_dot(a, row, x) - b[row] + zi_prev) / a.row_norm_sq(row);
    add_scaled_row(a, row, -coef, x);
}

void rek_s_iterate(const DenseMatrix& a, std::span<const double> b, Vector& x,
                   Vector& z, std::size_t col, std::size_t row) {
    check_row(a, row);
    rk_null_step(a, z, col);
    const double coef = (row_dot(a, row, x) - b[row] + z[row]) / a.row_norm_sq(row);
    add_scaled_row(a, row, -coef, x);
}

void regs_mnr_iterate(const DenseMatrix& a, std::span<const double> b, Vector& x,
                      Vector& z, Vector& residual, std::size_t col,
                      std::size_t row) {
    check_row(a, row);
    const double x_col_prev = x[col];
    rgs_step(a, b, x, residual, col);
    // z^k = P_i (z^{k-1} + x^k - x^{k-1}); the parenthesized vector differs
    // from z^{k-1} only in coordinate `col`.
    z[col] += x[col] - x_col_prev;
    const double coef = row_dot(a, row, z) / a.row_norm_sq(row);
    add_scaled_row(a, row, -coef, z);
}

void regs_e_iterate(const DenseMatrix& a, std::span<const double> b, Vector& x,
                    Vector& z, Vector& residual, std::size_t col,
                    std::size_t row) {
    check_row(a, row);
    rgs_step(a, b, x, residual, col);
    double diff = 0.0;  // a~_i^T (z - x)
    const auto r = a.row(row);
    for (std::size_t j = 0; j < a.cols(); ++j) diff += r[j] * (z[j] - x[j]);
    add_scaled_row(a, row, -diff / a.row_norm_sq(row), z);
}

Vector solution_estimate(const SolverState& state) {
    switch (state.algorithm) {
        case Algorithm::REGS_MNR: {
            Vector est(state.x.size());
            for (std::size_t i = 0; i < est.size(); ++i) est[i] = state.x[i] - state.z[i];
            return est;
        }
        case Algorithm::REGS_E:
            return state.z;
        default:
            return state.x;
    }
}

namespace {

constexpr double kInitTol = 1e-10;

void require_in_subspace(const Vector& v, const Vector& projected, const char* what) {
    const double vn = norm(v);
    double diff = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double d = v[i] - projected[i];
        diff += d * d;
    }
    if (std::sqrt(diff) > kInitTol * vn) {
        throw std::invalid_argument(std::string(what) + " violates the initialization subspace");
    }
}

struct InitialVectors {
    Vector x;
    Vector z;
};

InitialVectors resolve_initial(Algorithm algo, const Problem& p, const RunOptions& opts) {
    const std::size_t m = p.rows();
    const std::size_t n = p.cols();
    InitialVectors iv;
    iv.x = opts.x0.value_or(Vector(n, 0.0));
    if (iv.x.size() != n) throw std::invalid_argument("x0 has wrong length");
    switch (algo) {
        case Algorithm::RK:
        case Algorithm::RGS:
            if (opts.z0) throw std::invalid_argument("z0 is not used by RK/RGS");
            break;
        case Algorithm::REK_ZF:
        case Algorithm::REK_S: {
            iv.z = opts.z0.value_or(p.b);
            if (iv.z.size() != m) throw std::invalid_argument("z0 has wrong length");
            if (opts.x0) require_in_subspace(iv.x, project_rowspace(p, iv.x), "x0 (ran(A^T))");
            if (opts.z0) {
                Vector shifted(m);
                for (std::size_t i = 0; i < m; ++i) shifted[i] = iv.z[i] - p.b[i];
                require_in_subspace(shifted, project_colspace(p, shifted), "z0 (b + ran(A))");
            }
            break;
        }
        case Algorithm::REGS_MNR: {
            iv.z = opts.z0.value_or(Vector(n, 0.0));
            if (iv.z.size() != n) throw std::invalid_argument("z0 has wrong length");
            if (opts.z0) {
                Vector shifted(n);
                for (std::size_t i = 0; i < n; ++i) shifted[i] = iv.z[i] - iv.x[i];
                require_in_subspace(shifted, project_rowspace(p, shifted), "z0 (x0 + ran(A^T))");
            }
            break;
        }
        case Algorithm::REGS_E: {
            iv.z = opts.z0.value_or(Vector(n, 0.0));
            if (iv.z.size() != n) throw std::invalid_argument("z0 has wrong length");
            if (opts.z0) require_in_subspace(iv.z, project_rowspace(p, iv.z), "z0 (ran(A^T))");
            break;
        }
    }
    return iv;
}

}  // namespace

SolverState run_solver(Algorithm algo, const Problem& problem,
                       const RunOptions& opts, RngStream& rng,
                       const TraceHook& hook) {
    const DenseMatrix& a = problem.a;
    const Vector& b = problem.b;
    const std::size_t record_every = opts.record_every == 0 ? 1 : opts.record_every;

    InitialVectors iv = resolve_initial(algo, problem, opts);
    SolverState state{algo, std::move(iv.x), std::move(iv.z), 0};

    const bool needs_rows = algo != Algorithm::RGS;
    const bool needs_cols = algo != Algorithm::RK;
    std::optional<WeightedSampler> row_sampler;
    std::optional<WeightedSampler> col_sampler;
    if (needs_rows) row_sampler.emplace(WeightedSampler::from_rows(a));
    if (needs_cols) col_sampler.emplace(WeightedSampler::from_cols(a));

    const bool tracks_residual = algo == Algorithm::RGS ||
                                 algo == Algorithm::REGS_MNR ||
                                 algo == Algorithm::REGS_E;
    Vector residual;
    if (tracks_residual) {
        residual = matvec(a, state.x);
        for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= b[i];
    }
    // Incremental residual drift is bounded by periodic recomputation.
    const std::size_t refresh_period = 10 * std::max(a.rows(), a.cols());

    const Vector projected_b = problem.projected_b();

    auto record = [&](std::size_t k) -> double {
        TraceRecord rec;
        rec.iteration = k;
        const Vector est = solution_estimate(state);
        rec.estimate_err_sq = dist_sq(est, problem.x_star);
        if (hook) {
            if (algo == Algorithm::REK_ZF || algo == Algorithm::REK_S) {
                rec.aux_err_sq = dist_sq(state.z, problem.resid_star);
            } else if (tracks_residual) {
                Vector ax = matvec(a, state.x);
                rec.aux_err_sq = dist_sq(ax, projected_b);
            }
            hook(rec);
        }
        return rec.estimate_err_sq;
    };

    const bool tracing = static_cast<bool>(hook) || opts.stop_below.has_value();
    if (tracing && record(0) < opts.stop_below.value_or(-1.0)) return state;
    for (std::size_t k = 1; k <= opts.iterations; ++k) {
        const std::size_t col = needs_cols ? col_sampler->draw(rng) : 0;
        const std::size_t row = needs_rows ? row_sampler->draw(rng) : 0;
        switch (algo) {
            case Algorithm::RK:
                rk_step(a, b, state.x, row);
                break;
            case Algorithm::RGS:
                rgs_step(a, b, state.x, residual, col);
                break;
            case Algorithm::REK_ZF:
                rek_zf_iterate(a, b, state.x, state.z, col, row);
                break;
            case Algorithm::REK_S:
                rek_s_iterate(a, b, state.x, state.z, col, row);
                break;
            case Algorithm::REGS_MNR:
                regs_mnr_iterate(a, b, state.x, state.z, residual, col, row);
                break;
            case Algorithm::REGS_E:
                regs_e_iterate(a, b, state.x, state.z, residual, col, row);
                break;
        }
        state.iteration = k;
        if (tracks_residual && k % refresh_period == 0) {
            residual = matvec(a, state.x);
            for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= b[i];
        }
        if (tracing && (k % record_every == 0 || k == opts.iterations)) {
            if (record(k) < opts.stop_below.value_or(-1.0)) break;
        }
    }
    return state;
}

SolverState rk_run(const Problem& p, const RunOptions& o, RngStream& r,
                   const TraceHook& h) {
    return run_solver(Algorithm::RK, p, o, r, h);
}
SolverState rgs_run(const Problem& p, const RunOptions& o, RngStream& r,
                    const TraceHook& h) {
    return run_solver(Algorithm::RGS, p, o, r, h);
}
SolverState rek_zf_run(const Problem& p, const RunOptions& o, RngStream& r,
                       const TraceHook& h) {
    return run_solver(Algorithm::REK_ZF, p, o, r, h);
}
SolverState rek_s_run(const Problem& p, const RunOptions& o, RngStream& r,
                      const TraceHook& h) {
    return run_solver(Algorithm::REK_S, p, o, r, h);
}
SolverState regs_mnr_run(const Problem& p, const RunOptions& o, RngStream& r,
                         const TraceHook& h) {
    return run_solver(Algorithm::REGS_MNR, p, o, r, h);
}
SolverState regs_e_run(const Problem& p, const RunOptions& o, RngStream& r,
                       const TraceHook& h) {
    return run_solver(Algorithm::REGS_E, p, o, r, h);
}

}  // namespace rekgs
