// Acceptance suite: runs the seven release criteria end to end and prints
// one PASS/FAIL line each. Exit status is the number of failed criteria.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "rekgs/bounds.hpp"
#include "rekgs/experiment.hpp"
#include "rekgs/problems.hpp"
#include "rekgs/solvers.hpp"

using namespace rekgs;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

Problem generated_problem(std::size_t m, std::size_t n, std::size_t r, double s1,
                          double sr, bool consistent, std::uint64_t seed) {
    RngStream rng(seed, 0);
    auto [a, factors] = generate_matrix(m, n, r, s1, sr, rng);
    if (consistent) return make_consistent(std::move(a), std::move(factors), rng);
    return make_inconsistent(std::move(a), std::move(factors), rng);
}

// Criterion 1: with sigma1 = sigmar the refined bounds are attained, so the
// Monte Carlo mean over 2000 trials must match them within 5% relative at
// k in {10, 50, 100}.
Outcome tightness() {
    ExperimentConfig cfg;
    cfg.m = 40;
    cfg.n = 20;
    cfg.rank = 10;
    cfg.sigma_max = 1.0;
    cfg.sigma_min = 1.0;
    cfg.consistent = true;
    cfg.algorithms = {Algorithm::REK_S, Algorithm::REGS_E};
    cfg.iters = 100;
    cfg.trials = 2000;
    cfg.seed = 20240601;
    cfg.record_every = 10;
    const ExperimentResult res = run_experiment(cfg);

    Outcome out;
    double worst = 0.0;
    for (const auto& c : res.curves) {
        for (const std::size_t k : {std::size_t{10}, std::size_t{50}, std::size_t{100}}) {
            std::size_t ki = 0;
            while (res.ks[ki] != k) ++ki;
            const double bound = c.bound_new->values[ki];
            const double rel = std::abs(c.mean_err[ki] - bound) / bound;
            worst = std::max(worst, rel);
            if (rel > 0.05) out.pass = false;
        }
    }
    std::ostringstream os;
    os << "max relative deviation " << worst << " (tolerance 0.05)";
    out.detail = os.str();
    return out;
}

// Criterion 2: the Y/N convergence pattern matches the published table for
// five seeds at 60 x 30 scale.
Outcome table1_pattern() {
    Outcome out;
    std::size_t matched = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Table1 t = classify_table1(seed);
        if (t.matches_expected()) {
            ++matched;
        } else {
            out.pass = false;
        }
    }
    std::ostringstream os;
    os << matched << "/5 seeds match the published pattern";
    out.detail = os.str();
    return out;
}

// Criterion 3: the per-step proof identities hold with zero violations over
// at least 10^4 recorded iterations per identity. Runs are kept short enough
// that the iterate errors stay above the float rounding floor, where a
// relative comparison of the squared norms is still meaningful.
Outcome per_step_identities() {
    Outcome out;
    std::size_t checked_rek = 0;
    std::size_t checked_regs = 0;
    std::size_t violations = 0;
    double worst = 0.0;
    auto gap = [](double lhs, double rhs) {
        return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    };

    const struct {
        bool consistent;
        std::size_t r;
    } cases[4] = {{true, 10}, {true, 6}, {false, 10}, {false, 6}};
    constexpr int kItersPerRun = 150;
    constexpr int kSeedsPerCase = 17;

    for (int ci = 0; ci < 4; ++ci) {
        for (int rep = 0; rep < kSeedsPerCase; ++rep) {
            Problem p = generated_problem(20, 10, cases[ci].r, 2.0, 1.0,
                                          cases[ci].consistent,
                                          300 + 10 * ci + rep);
            const Vector pb = p.projected_b();
            const WeightedSampler rows = WeightedSampler::from_rows(p.a);
            const WeightedSampler cols = WeightedSampler::from_cols(p.a);

            {  // REK-S Pythagoras
                RngStream rng(400 + 10 * ci + rep, 0);
                Vector x(p.cols(), 0.0);
                Vector z = p.b;
                for (int k = 1; k <= kItersPerRun; ++k) {
                    const std::size_t j = cols.draw(rng);
                    const std::size_t i = rows.draw(rng);
                    Vector xhat = x;
                    rek_s_iterate(p.a, p.b, x, z, j, i);
                    rk_step(p.a, pb, xhat, i);
                    const double lhs = dist_sq(x, p.x_star);
                    const double rhs = dist_sq(x, xhat) + dist_sq(xhat, p.x_star);
                    const double g = gap(lhs, rhs);
                    worst = std::max(worst, g);
                    ++checked_rek;
                    if (g > 1e-9) ++violations;
                }
            }
            {  // REGS-E orthogonal decomposition
                RngStream rng(500 + 10 * ci + rep, 0);
                Vector x(p.cols(), 0.0);
                Vector z(p.cols(), 0.0);
                Vector residual = matvec(p.a, x);
                for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= p.b[i];
                for (int k = 1; k <= kItersPerRun; ++k) {
                    const std::size_t j = cols.draw(rng);
                    const std::size_t i = rows.draw(rng);
                    const Vector z_prev = z;
                    regs_e_iterate(p.a, p.b, x, z, residual, j, i);
                    const double nsq = p.a.row_norm_sq(i);
                    Vector t1(p.cols());
                    for (std::size_t c = 0; c < t1.size(); ++c)
                        t1[c] = z_prev[c] - p.x_star[c];
                    const double c1 = row_dot(p.a, i, t1) / nsq;
                    add_scaled_row(p.a, i, -c1, t1);
                    Vector diff(p.cols());
                    for (std::size_t c = 0; c < diff.size(); ++c)
                        diff[c] = x[c] - p.x_star[c];
                    const double c2 = row_dot(p.a, i, diff) / nsq;
                    Vector t2(p.cols(), 0.0);
                    add_scaled_row(p.a, i, c2, t2);
                    const double lhs = dist_sq(z, p.x_star);
                    const double rhs = norm_sq(t1) + norm_sq(t2);
                    const double g = gap(lhs, rhs);
                    worst = std::max(worst, g);
                    ++checked_regs;
                    if (g > 1e-9) ++violations;
                }
            }
        }
    }
    out.pass = violations == 0 && checked_rek >= 10000 && checked_regs >= 10000;
    std::ostringstream os;
    os << checked_rek << " + " << checked_regs << " iterations checked, " << violations
       << " violations, worst relative gap " << worst;
    out.detail = os.str();
    return out;
}

// Criterion 4: REGS-MNR's estimate x^k - z^k coincides with REGS-E's z^k
// under a shared index stream (20 systems, 1000 iterations each).
Outcome regs_equivalence() {
    Outcome out;
    double worst = 0.0;
    for (std::uint64_t inst = 0; inst < 20; ++inst) {
        const bool consistent = inst % 2 == 0;
        const std::size_t r = inst % 3 == 0 ? 10 : 6;
        Problem p = generated_problem(20, 10, r, 2.0, 1.0, consistent, 600 + inst);
        const WeightedSampler rows = WeightedSampler::from_rows(p.a);
        const WeightedSampler cols = WeightedSampler::from_cols(p.a);
        RngStream rng(700 + inst, 0);

        Vector x_m(p.cols(), 0.0), z_m(p.cols(), 0.0);
        Vector res_m = matvec(p.a, x_m);
        for (std::size_t i = 0; i < res_m.size(); ++i) res_m[i] -= p.b[i];
        Vector x_e(p.cols(), 0.0), z_e(p.cols(), 0.0);
        Vector res_e = res_m;

        for (int k = 1; k <= 1000; ++k) {
            const std::size_t j = cols.draw(rng);
            const std::size_t i = rows.draw(rng);
            regs_mnr_iterate(p.a, p.b, x_m, z_m, res_m, j, i);
            regs_e_iterate(p.a, p.b, x_e, z_e, res_e, j, i);
            double dev = 0.0;
            for (std::size_t c = 0; c < p.cols(); ++c) {
                const double d = (x_m[c] - z_m[c]) - z_e[c];
                dev += d * d;
            }
            worst = std::max(worst, std::sqrt(dev));
        }
    }
    out.pass = worst < 1e-8;
    std::ostringstream os;
    os << "max deviation " << worst << " (tolerance 1e-8)";
    out.detail = os.str();
    return out;
}

// Criterion 5: for v in nul(A) the row-projector expectation preserves the
// norm exactly, confirming the correction to the original argument.
Outcome fact1_counterexample() {
    Outcome out;
    double worst = 0.0;
    for (std::uint64_t inst = 0; inst < 20; ++inst) {
        Problem p = generated_problem(16, 10, 5, 2.0, 1.0, true, 800 + inst);
        RngStream rng(900 + inst, 0);
        Vector w(p.cols());
        for (double& v : w) v = rng.standard_normal();
        const Vector proj = project_rowspace(p, w);
        Vector v(p.cols());
        for (std::size_t c = 0; c < v.size(); ++c) v[c] = w[c] - proj[c];
        const double vsq = norm_sq(v);
        if (!(vsq > 1e-12)) {
            out.pass = false;
            out.detail = "degenerate nullspace draw";
            return out;
        }
        double expectation = 0.0;
        for (std::size_t i = 0; i < p.rows(); ++i) {
            const double nsq = p.a.row_norm_sq(i);
            const double pi = nsq / p.a.frob_sq();
            const double along = row_dot(p.a, i, v);
            expectation += pi * (vsq - along * along / nsq);
        }
        const double rel = std::abs(expectation - vsq) / vsq;
        worst = std::max(worst, rel);
        if (rel > 1e-10) out.pass = false;
    }
    std::ostringstream os;
    os << "max |E||P_i v||^2 - ||v||^2| / ||v||^2 = " << worst << " (tolerance 1e-10)";
    out.detail = os.str();
    return out;
}

// Criterion 6: on the four desk-scaled figure configurations the refined
// bounds dominate the existing ones at every recorded k, and Monte Carlo
// means stay below the refined bounds within 3 standard errors.
Outcome figure_configs() {
    Outcome out;
    double worst_ratio = 0.0;
    for (int figure = 1; figure <= 4; ++figure) {
        ExperimentConfig cfg;
        cfg.m = 60;
        cfg.n = 30;
        cfg.rank = (figure == 1 || figure == 3) ? 30 : 18;
        cfg.sigma_max = 1.0 + 0.25 * figure;
        cfg.sigma_min = 1.0;
        cfg.consistent = figure <= 2;
        cfg.algorithms = {Algorithm::REK_S, Algorithm::REGS_E};
        cfg.trials = 20;
        cfg.seed = 1000 + static_cast<std::uint64_t>(figure);
        cfg.record_every = 10;
        Problem p = generate_problem(cfg);
        cfg.iters = default_iteration_budget(p);
        const ExperimentResult res = run_experiment_on(p, cfg);

        for (const auto& c : res.curves) {
            if (!c.bound_new || !c.bound_old) {
                out.pass = false;
                out.detail = "missing bound curves";
                return out;
            }
            for (std::size_t ki = 0; ki < res.ks.size(); ++ki) {
                if (c.bound_new->values[ki] > c.bound_old->values[ki] * (1.0 + 1e-12)) {
                    out.pass = false;
                }
                const double mean = c.mean_err[ki];
                const double se = c.stderr_err[ki];
                const double limit =
                    c.bound_new->values[ki] *
                    (1.0 + (mean > 0.0 ? 3.0 * se / mean : 0.0) + 1e-12);
                if (mean > limit) out.pass = false;
                if (c.bound_new->values[ki] > 0.0) {
                    worst_ratio = std::max(worst_ratio, mean / c.bound_new->values[ki]);
                }
            }
        }
    }
    std::ostringstream os;
    os << "worst mean/bound ratio " << worst_ratio;
    out.detail = os.str();
    return out;
}

// Criterion 7: absolute error levels of the reference experiments depend
// on an unreported residual magnitude and iteration range, so the substitute
// check is oracle agreement: the SVD pseudoinverse oracle and the
// factor-based ground truth coincide on 20 instances per system case.
Outcome oracle_agreement() {
    Outcome out;
    double worst = 0.0;
    const struct {
        bool consistent;
        std::size_t r;
    } cases[4] = {{true, 10}, {true, 6}, {false, 10}, {false, 6}};
    for (int ci = 0; ci < 4; ++ci) {
        for (std::uint64_t inst = 0; inst < 20; ++inst) {
            Problem p = generated_problem(20, 10, cases[ci].r, 2.0, 1.0,
                                          cases[ci].consistent,
                                          2000 + 100 * ci + inst);
            const Vector oracle = pinv_solve_oracle(p.a, p.b);
            const double rel =
                std::sqrt(dist_sq(oracle, p.x_star)) / std::max(norm(p.x_star), 1e-300);
            worst = std::max(worst, rel);
            if (rel > 1e-8) out.pass = false;
        }
    }
    std::ostringstream os;
    os << "max relative disagreement " << worst << " over 80 instances (tolerance 1e-8)";
    out.detail = os.str();
    return out;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        Outcome (*fn)();
    };
    const Criterion criteria[] = {
        {"tightness: Monte Carlo mean matches the attained bounds (sigma1 = sigmar)",
         tightness},
        {"table 1 convergence pattern over 5 seeds", table1_pattern},
        {"per-step proof identities over >= 10^4 iterations", per_step_identities},
        {"REGS-MNR / REGS-E equivalence under a shared index stream", regs_equivalence},
        {"nullspace preservation of the row-projector expectation", fact1_counterexample},
        {"figure configurations: bound dominance and means below refined bounds",
         figure_configs},
        {"pseudoinverse oracle agreement with factor ground truth", oracle_agreement},
    };

    int failures = 0;
    int index = 0;
    for (const Criterion& c : criteria) {
        ++index;
        const Outcome out = c.fn();
        if (!out.pass) ++failures;
        std::printf("[%s] criterion %d: %s — %s\n", out.pass ? "PASS" : "FAIL", index,
                    c.name, out.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/7 acceptance criteria passed\n", 7 - failures);
    return failures;
}
