#ifndef REKGS_PROBLEMS_HPP
#define REKGS_PROBLEMS_HPP

#include <filesystem>
#include <optional>

#include "rekgs/dense_matrix.hpp"
#include "rekgs/sampling.hpp"
#include "rekgs/svd.hpp"

namespace rekgs {

/// Where the factor metadata of a Problem came from.
enum class FactorSource { Generator, ComputedSvd };

/// Rank-r factorization A = U diag(d) V^T with orthonormal U (m x r) and
/// V (n x r). For generated problems these are the exact construction
/// factors; for user-supplied systems they come from svd_small.
struct Factors {
    DenseMatrix u;
    Vector d;
    DenseMatrix v;
    FactorSource source = FactorSource::Generator;
};

/// A linear system with ground-truth metadata: the pseudoinverse solution
/// x_star = A^dag b and the inconsistency component resid_star = (I - AA^dag) b.
struct Problem {
    DenseMatrix a;
    Vector b;
    Factors factors;
    Vector x_star;
    Vector resid_star;
    bool consistent = true;
    SpectralData spectral;

    std::size_t rows() const { return a.rows(); }
    std::size_t cols() const { return a.cols(); }
    std::size_t rank() const { return factors.d.size(); }

    /// b - resid_star = AA^dag b, the projection of b onto ran(A).
    Vector projected_b() const;
};

/// A = U D V^T with standard-normal U, V orthonormalized columnwise and
/// D an r x r diagonal whose first r-2 entries are uniform in
/// [sigma_min, sigma_max] and whose last two entries are exactly sigma_min
/// and sigma_max, in that order.
/// Requires 2 <= r <= min(m, n) and 0 < sigma_min <= sigma_max.
std::pair<DenseMatrix, Factors> generate_matrix(std::size_t m, std::size_t n,
                                                std::size_t r, double sigma_max,
                                                double sigma_min, RngStream& rng);

/// b = A xhat for standard-normal xhat; resid_star = 0.
Problem make_consistent(DenseMatrix a, Factors factors, RngStream& rng);

/// b = A xhat + r with r a unit vector of nul(A^T) scaled by resid_scale
/// (default ||A xhat||). Requires rank < m. resid_scale = 0 degenerates to
/// the consistent case and is flagged as such.
Problem make_inconsistent(DenseMatrix a, Factors factors, RngStream& rng,
                          std::optional<double> resid_scale = std::nullopt);

/// Wraps a raw system; factor metadata and ground truth are computed with
/// svd_small + pinv_solve_oracle. Rejects the all-zero matrix.
Problem problem_from_system(DenseMatrix a, Vector b);

/// V V^T v: projection onto ran(A^T).
Vector project_rowspace(const Problem& p, std::span<const double> v);

/// U U^T u: projection onto ran(A).
Vector project_colspace(const Problem& p, std::span<const double> u);

/// Text fixture format with shortest round-trip decimals; reloading gives
/// bit-identical doubles.
void save_problem(const Problem& p, const std::filesystem::path& path);
Problem load_problem(const std::filesystem::path& path);

}  // namespace rekgs

#endif  // REKGS_PROBLEMS_HPP
