#ifndef REKGS_BOUNDS_HPP
#define REKGS_BOUNDS_HPP

#include <cstddef>
#include <span>

#include "rekgs/problems.hpp"
#include "rekgs/svd.hpp"

namespace rekgs {

/// rho = 1 - sigma_min_nonzero^2 / ||A||_F^2, the contraction factor of all
/// expected-error decay rates. Lies in [0, 1) for any nonzero matrix; 0
/// exactly when the matrix has a single distinct nonzero singular value
/// repeated once (rank 1). Throws std::invalid_argument for rank 0.
double rho(const SpectralData& spec, double frob_sq);

/// Existing REK bound: rho^floor(k/2) (1 + 2 sigma1^2/sigmar^2) ||A^dag b||^2.
double bound_rek_zf(std::size_t k, double rho, double sigma1, double sigmar,
                    double norm_pinvb_sq);

/// Refined REK-S bound:
///   rho^k ||x0 - A^dag b||^2 + k rho^k / ||A||_F^2 ||z0 - (I-AA^dag) b||^2,
/// with 1/||A||_F^2 written as (1-rho)/sigmar^2. Attained (equality in
/// expectation) when all nonzero singular values coincide.
double bound_rek_s(std::size_t k, double rho, double sigmar, double err0_sq,
                   double z_err0_sq);

/// Existing REGS bound: rho^k ||A^dag b||^2 + (2 rho^floor(k/2) / sigmar^2)
/// ||AA^dag b||^2.
double bound_regs_mnr(std::size_t k, double rho, double sigmar,
                      double norm_pinvb_sq, double norm_proj_b_sq);

/// Refined REGS-E bound:
///   rho^k ||z0 - A^dag b||^2 + k rho^k / ||A||_F^2 ||A x0 - AA^dag b||^2.
/// Attained when all nonzero singular values coincide.
double bound_regs_e(std::size_t k, double rho, double sigmar, double z_err0_sq,
                    double resid0_sq);

enum class BoundKind { REK_ZF_OLD, REK_S_NEW, REGS_MNR_OLD, REGS_E_NEW };

std::string_view bound_kind_name(BoundKind kind);

/// Scalar ingredients shared by the four bound formulas, with the metadata
/// source they were computed from.
struct BoundInputs {
    double rho = 0.0;
    double sigma1 = 0.0;
    double sigmar = 0.0;
    double frob_sq = 0.0;
    double norm_pinvb_sq = 0.0;   // ||A^dag b||^2
    double norm_proj_b_sq = 0.0;  // ||AA^dag b||^2
    double err0_sq = 0.0;         // ||x0 - A^dag b||^2
    double z_err0_sq = 0.0;       // ||z0 - (I-AA^dag) b||^2 (REK) or ||z0 - A^dag b||^2 (REGS-E)
    double resid0_sq = 0.0;       // ||A x0 - AA^dag b||^2
    FactorSource source = FactorSource::Generator;
};

struct BoundCurve {
    BoundKind kind = BoundKind::REK_S_NEW;
    std::vector<double> values;  // one per entry of the k-grid
    BoundInputs inputs;
};

/// Ingredients for the REK bounds with initial vectors x0 (default 0) and
/// z0 (default b).
BoundInputs rek_bound_inputs(const Problem& p,
                             std::span<const double> x0 = {},
                             std::span<const double> z0 = {});

/// Ingredients for the REGS bounds with initial vectors x0 (default 0) and
/// z0 (default 0).
BoundInputs regs_bound_inputs(const Problem& p,
                              std::span<const double> x0 = {},
                              std::span<const double> z0 = {});

BoundCurve make_bound_curve(BoundKind kind, const BoundInputs& in,
                            std::span<const std::size_t> ks);

}  // namespace rekgs

#endif  // REKGS_BOUNDS_HPP
