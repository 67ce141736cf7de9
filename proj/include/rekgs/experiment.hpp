#ifndef REKGS_EXPERIMENT_HPP
#define REKGS_EXPERIMENT_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "rekgs/bounds.hpp"
#include "rekgs/problems.hpp"
#include "rekgs/solvers.hpp"

namespace rekgs {

/// Declarative description of one Monte Carlo comparison run: one generated
/// problem, `trials` independent index streams per algorithm, errors
/// averaged pointwise on the recorded iteration grid.
struct ExperimentConfig {
    std::size_t m = 60;
    std::size_t n = 30;
    std::size_t rank = 30;
    double sigma_max = 2.0;
    double sigma_min = 1.0;
    bool consistent = true;
    std::optional<double> resid_scale;  // inconsistent only; default ||A xhat||
    std::vector<Algorithm> algorithms;
    std::size_t iters = 1;
    std::size_t trials = 20;
    std::uint64_t seed = 1;
    std::size_t record_every = 10;
    /// Regenerate the problem per trial instead of reusing one problem.
    bool regenerate_problem_per_trial = false;
    /// Stop a run once the traced error falls below this value; requires
    /// trials == 1 (the averaged grid would otherwise be ragged).
    std::optional<double> stop_below;
};

/// Throws std::invalid_argument describing the first violated constraint.
void validate(const ExperimentConfig& cfg);

/// Iteration budget used by the classification experiment and as the CLI
/// default: ceil(20 ||A||_F^2 / sigmar^2).
std::size_t default_iteration_budget(const Problem& p);

/// Stream ids: trial t uses RngStream(seed, t); problem generation uses a
/// reserved high stream so it never collides with trial streams.
inline constexpr std::uint64_t kProblemStreamId = 0x8000000000000000ull;

/// Generates the experiment's problem from cfg (seed, dimensions, spectrum,
/// consistency).
Problem generate_problem(const ExperimentConfig& cfg);

struct AlgorithmCurves {
    Algorithm algorithm = Algorithm::RK;
    std::vector<double> mean_err;    // averaged over trials, per grid point
    std::vector<double> stderr_err;  // standard error of the mean
    std::optional<BoundCurve> bound_old;
    std::optional<BoundCurve> bound_new;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<std::size_t> ks;  // recorded iteration grid (starts at 0)
    std::vector<AlgorithmCurves> curves;
    double rho_value = 0.0;
    double sigma1 = 0.0;
    double sigmar = 0.0;
    double frob_sq = 0.0;
};

/// Runs the full experiment: generate problem, run trials, average in
/// trial-index order, attach bound curves from the problem metadata.
/// Identical configs produce bit-identical results.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Same, but on an already-built problem (cfg dimensions are ignored;
/// trial count, iteration budget, seed and grid come from cfg).
ExperimentResult run_experiment_on(const Problem& problem,
                                   const ExperimentConfig& cfg);

/// Convergence classification over the four system cases at 60 x 30 scale.
/// Rows: consistent full-rank, consistent rank-deficient, inconsistent
/// full-rank, inconsistent rank-deficient. Columns: RK, RGS, REK-S, REGS-E.
/// A cell is 'Y' when the trial-mean final squared error drops below
/// 1e-4 times the initial squared error within ceil(20 ||A||_F^2 / sigmar^2)
/// iterations.
struct Table1 {
    static constexpr std::array<const char*, 4> row_labels = {
        "consistent rank=n", "consistent rank<n", "inconsistent rank=n",
        "inconsistent rank<n"};
    static constexpr std::array<const char*, 4> col_labels = {"RK", "RGS",
                                                              "REK", "REGS"};
    std::array<std::array<char, 4>, 4> cells{};

    bool matches_expected() const;
    std::string to_string() const;
};

/// The published pattern: REK and REGS all Y; RK = Y,Y,N,N; RGS = Y,N,Y,N.
Table1 table1_expected();

Table1 classify_table1(std::uint64_t seed);

/// CSV with a '#'-prefixed config echo, a `k` column and per-algorithm
/// mean/bound columns; doubles in shortest round-trip decimal form.
void emit_csv(const ExperimentResult& result, const std::filesystem::path& path);

/// Standalone SVG semilog-y chart of the mean error curves and refined
/// bounds; include_old_bounds adds the existing bounds where available.
void emit_plot(const ExperimentResult& result, const std::filesystem::path& path,
               bool include_old_bounds = false);

}  // namespace rekgs

#endif  // REKGS_EXPERIMENT_HPP
