#include "rekgs/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "rekgs/dense_matrix.hpp"

namespace rekgs {

double rho(const SpectralData& spec, double frob_sq) {
    if (spec.rank == 0) {
        throw std::invalid_argument("rho: undefined for a rank-0 matrix");
    }
    if (!(frob_sq > 0.0)) {
        throw std::invalid_argument("rho: squared Frobenius norm must be positive");
    }
    const double s = spec.sigma_min_nonzero;
    return 1.0 - s * s / frob_sq;
}

double bound_rek_zf(std::size_t k, double rho, double sigma1, double sigmar,
                    double norm_pinvb_sq) {
    const double ratio = sigma1 * sigma1 / (sigmar * sigmar);
    return std::pow(rho, static_cast<double>(k / 2)) * (1.0 + 2.0 * ratio) *
           norm_pinvb_sq;
}

double bound_rek_s(std::size_t k, double rho, double sigmar, double err0_sq,
                   double z_err0_sq) {
    const double rk = std::pow(rho, static_cast<double>(k));
    const double inv_frob_sq = (1.0 - rho) / (sigmar * sigmar);
    return rk * err0_sq + static_cast<double>(k) * rk * inv_frob_sq * z_err0_sq;
}

double bound_regs_mnr(std::size_t k, double rho, double sigmar,
                      double norm_pinvb_sq, double norm_proj_b_sq) {
    const double rk = std::pow(rho, static_cast<double>(k));
    const double rhalf = std::pow(rho, static_cast<double>(k / 2));
    return rk * norm_pinvb_sq + 2.0 * rhalf / (sigmar * sigmar) * norm_proj_b_sq;
}

double bound_regs_e(std::size_t k, double rho, double sigmar, double z_err0_sq,
                    double resid0_sq) {
    const double rk = std::pow(rho, static_cast<double>(k));
    const double inv_frob_sq = (1.0 - rho) / (sigmar * sigmar);
    return rk * z_err0_sq + static_cast<double>(k) * rk * inv_frob_sq * resid0_sq;
}

std::string_view bound_kind_name(BoundKind kind) {
    switch (kind) {
        case BoundKind::REK_ZF_OLD: return "rek_zf_old";
        case BoundKind::REK_S_NEW: return "rek_s_new";
        case BoundKind::REGS_MNR_OLD: return "regs_mnr_old";
        case BoundKind::REGS_E_NEW: return "regs_e_new";
    }
    return "unknown";
}

namespace {

BoundInputs common_inputs(const Problem& p) {
    BoundInputs in;
    in.frob_sq = p.a.frob_sq();
    in.rho = rho(p.spectral, in.frob_sq);
    in.sigma1 = p.spectral.sigma_max;
    in.sigmar = p.spectral.sigma_min_nonzero;
    in.norm_pinvb_sq = norm_sq(p.x_star);
    in.norm_proj_b_sq = norm_sq(p.projected_b());
    in.source = p.factors.source;
    return in;
}

}  // namespace

BoundInputs rek_bound_inputs(const Problem& p, std::span<const double> x0,
                             std::span<const double> z0) {
    BoundInputs in = common_inputs(p);
    in.err0_sq = x0.empty() ? in.norm_pinvb_sq : dist_sq(x0, p.x_star);
    if (z0.empty()) {
        // z0 = b: ||b - (I-AA^dag) b||^2 = ||AA^dag b||^2
        in.z_err0_sq = in.norm_proj_b_sq;
    } else {
        in.z_err0_sq = dist_sq(z0, p.resid_star);
    }
    // ||A x0 - AA^dag b||^2 is not used by the REK bounds; keep it for the echo.
    in.resid0_sq = in.norm_proj_b_sq;
    return in;
}

BoundInputs regs_bound_inputs(const Problem& p, std::span<const double> x0,
                              std::span<const double> z0) {
    BoundInputs in = common_inputs(p);
    in.err0_sq = x0.empty() ? in.norm_pinvb_sq : dist_sq(x0, p.x_star);
    in.z_err0_sq = z0.empty() ? in.norm_pinvb_sq : dist_sq(z0, p.x_star);
    if (x0.empty()) {
        in.resid0_sq = in.norm_proj_b_sq;
    } else {
        in.resid0_sq = dist_sq(matvec(p.a, x0), p.projected_b());
    }
    return in;
}

BoundCurve make_bound_curve(BoundKind kind, const BoundInputs& in,
                            std::span<const std::size_t> ks) {
    BoundCurve curve{kind, {}, in};
    curve.values.reserve(ks.size());
    for (const std::size_t k : ks) {
        double v = 0.0;
        switch (kind) {
            case BoundKind::REK_ZF_OLD:
                v = bound_rek_zf(k, in.rho, in.sigma1, in.sigmar, in.norm_pinvb_sq);
                break;
            case BoundKind::REK_S_NEW:
                v = bound_rek_s(k, in.rho, in.sigmar, in.err0_sq, in.z_err0_sq);
                break;
            case BoundKind::REGS_MNR_OLD:
                v = bound_regs_mnr(k, in.rho, in.sigmar, in.norm_pinvb_sq,
                                   in.norm_proj_b_sq);
                break;
            case BoundKind::REGS_E_NEW:
                v = bound_regs_e(k, in.rho, in.sigmar, in.z_err0_sq, in.resid0_sq);
                break;
        }
        curve.values.push_back(v);
    }
    return curve;
}

}  // namespace rekgs
