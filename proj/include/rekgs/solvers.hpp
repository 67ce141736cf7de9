#ifndef REKGS_SOLVERS_HPP
#define REKGS_SOLVERS_HPP

#include <functional>
#include <optional>
#include <string_view>

#include "rekgs/dense_matrix.hpp"
#include "rekgs/problems.hpp"
#include "rekgs/sampling.hpp"

namespace rekgs {

enum class Algorithm { RK, RGS, REK_ZF, REK_S, REGS_MNR, REGS_E };

std::string_view algorithm_name(Algorithm algo);
Algorithm algorithm_from_name(std::string_view name);

/// True for the coupled two-sequence schemes (REK and REGS variants).
bool is_extended(Algorithm algo);

/// Iterate pair of a solver run. z is empty for RK and RGS.
struct SolverState {
    Algorithm algorithm = Algorithm::RK;
    Vector x;
    Vector z;
    std::size_t iteration = 0;
};

/// Per-iteration record passed to the trace hook. estimate_err_sq is the
/// squared distance between the algorithm's designated estimate (x for
/// RK/RGS/REK, x - z for REGS-MNR, z for REGS-E) and x_star. aux_err_sq is
/// ||z^k - resid_star||^2 for REK variants and ||A x^k - AA^dag b||^2 for
/// RGS and the REGS variants.
struct TraceRecord {
    std::size_t iteration = 0;
    double estimate_err_sq = 0.0;
    std::optional<double> aux_err_sq;
};

using TraceHook = std::function<void(const TraceRecord&)>;

struct RunOptions {
    std::size_t iterations = 0;
    /// Hook stride: the hook fires at iteration 0, every record_every-th
    /// iteration, and at the final iteration.
    std::size_t record_every = 1;
    /// Optional non-default initial vectors, validated against the
    /// algorithm's subspace preconditions (1e-10 relative projection
    /// residual). Defaults: x0 = 0 everywhere; z0 = b for REK variants and
    /// z0 = 0 for REGS variants.
    std::optional<Vector> x0;
    std::optional<Vector> z0;
    /// Stop once the traced estimate error at a recorded iteration falls
    /// below this value. The core default is a fixed budget; this knob
    /// exists for the CLI.
    std::optional<double> stop_below;
};

// Single-step kernels. All update their vector arguments in place and throw
// std::invalid_argument on a zero row/column or an index out of range.

/// x -= ((a~_i^T x - b_i) / ||a~_i||^2) a~_i. After the step row i is
/// satisfied: a~_i^T x = b_i.
void rk_step(const DenseMatrix& a, std::span<const double> b, Vector& x,
             std::size_t row);

/// z -= ((a_j^T z) / ||a_j||^2) a_j: one RK step for A^T z = 0. After the
/// step a_j^T z = 0.
void rk_null_step(const DenseMatrix& a, Vector& z, std::size_t col);

/// Coordinate descent on ||Ax - b||^2 along e_j. residual must equal
/// A x - b on entry and is updated alongside x.
void rgs_step(const DenseMatrix& a, std::span<const double> b, Vector& x,
              Vector& residual, std::size_t col);

// Per-iteration kernels of the extended algorithms with explicit indices,
// exposed so tests can force index sequences and observe intermediate state.

/// REK-ZF: z-step with column j, then x-step with row i driven by the
/// pre-update value z_i^{k-1}.
void rek_zf_iterate(const DenseMatrix& a, std::span<const double> b, Vector& x,
                    Vector& z, std::size_t col, std::size_t row);

/// REK-S: z-step with column j, then x-step with row i driven by the
/// post-update value z_i^k.
void rek_s_iterate(const DenseMatrix& a, std::span<const double> b, Vector& x,
                   Vector& z, std::size_t col, std::size_t row);

/// REGS-MNR: RGS step with column j, then z^k = P_i (z^{k-1} + x^k - x^{k-1})
/// with P_i = I - a~_i a~_i^T / ||a~_i||^2. The estimate is x - z.
void regs_mnr_iterate(const DenseMatrix& a, std::span<const double> b, Vector& x,
                      Vector& z, Vector& residual, std::size_t col,
                      std::size_t row);

/// REGS-E: RGS step with column j, then one RK step for A z = A x^k:
/// z -= (a~_i^T (z - x) / ||a~_i||^2) a~_i. The estimate is z.
void regs_e_iterate(const DenseMatrix& a, std::span<const double> b, Vector& x,
                    Vector& z, Vector& residual, std::size_t col,
                    std::size_t row);

/// Runs `algo` on the problem for a fixed iteration budget, drawing rows and
/// columns from the norm-weighted samplers (column draw before row draw each
/// iteration). The hook, when set, fires per RunOptions::record_every.
SolverState run_solver(Algorithm algo, const Problem& problem,
                       const RunOptions& opts, RngStream& rng,
                       const TraceHook& hook = {});

SolverState rk_run(const Problem& p, const RunOptions& o, RngStream& r,
                   const TraceHook& h = {});
SolverState rgs_run(const Problem& p, const RunOptions& o, RngStream& r,
                    const TraceHook& h = {});
SolverState rek_zf_run(const Problem& p, const RunOptions& o, RngStream& r,
                       const TraceHook& h = {});
SolverState rek_s_run(const Problem& p, const RunOptions& o, RngStream& r,
                      const TraceHook& h = {});
SolverState regs_mnr_run(const Problem& p, const RunOptions& o, RngStream& r,
                         const TraceHook& h = {});
SolverState regs_e_run(const Problem& p, const RunOptions& o, RngStream& r,
                       const TraceHook& h = {});

/// The solver's designated estimate of A^dag b for the given state.
Vector solution_estimate(const SolverState& state);

}  // namespace rekgs

#endif  // REKGS_SOLVERS_HPP
