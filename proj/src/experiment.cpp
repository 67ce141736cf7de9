#include "rekgs/experiment.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "num_format.hpp"
#include "rekgs/svg_plot.hpp"

namespace rekgs {

void validate(const ExperimentConfig& cfg) {
    if (cfg.rank < 2) throw std::invalid_argument("config: rank must be at least 2");
    if (cfg.rank > std::min(cfg.m, cfg.n)) {
        throw std::invalid_argument("config: rank exceeds min(m, n)");
    }
    if (!(cfg.sigma_min > 0.0) || !(cfg.sigma_min <= cfg.sigma_max)) {
        throw std::invalid_argument("config: need 0 < sigma_min <= sigma_max");
    }
    if (!cfg.consistent && cfg.rank >= cfg.m) {
        throw std::invalid_argument("config: inconsistent systems need rank < m");
    }
    if (cfg.consistent && cfg.resid_scale.has_value()) {
        throw std::invalid_argument("config: resid_scale applies to inconsistent systems only");
    }
    if (cfg.trials < 1) throw std::invalid_argument("config: trials must be at least 1");
    if (cfg.record_every < 1) {
        throw std::invalid_argument("config: record_every must be at least 1");
    }
    if (cfg.algorithms.empty()) {
        throw std::invalid_argument("config: no algorithms selected");
    }
    if (cfg.stop_below && cfg.trials != 1) {
        throw std::invalid_argument("config: stop_below requires trials == 1");
    }
}

std::size_t default_iteration_budget(const Problem& p) {
    const double s = p.spectral.sigma_min_nonzero;
    return static_cast<std::size_t>(std::ceil(20.0 * p.a.frob_sq() / (s * s)));
}

namespace {

Problem build_problem(const ExperimentConfig& cfg, std::uint64_t stream_id) {
    RngStream rng(cfg.seed, stream_id);
    auto [a, factors] = generate_matrix(cfg.m, cfg.n, cfg.rank, cfg.sigma_max,
                                        cfg.sigma_min, rng);
    if (cfg.consistent) {
        return make_consistent(std::move(a), std::move(factors), rng);
    }
    return make_inconsistent(std::move(a), std::move(factors), rng, cfg.resid_scale);
}

std::vector<std::size_t> record_grid(std::size_t iters, std::size_t every) {
    std::vector<std::size_t> ks{0};
    for (std::size_t k = every; k <= iters; k += every) ks.push_back(k);
    if (ks.back() != iters) ks.push_back(iters);
    return ks;
}

/// Runs body(t) for t in [0, count) on a small worker pool; exceptions are
/// rethrown on the calling thread.
void parallel_for_trials(std::size_t count, const std::function<void(std::size_t)>& body) {
    unsigned workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1) {
        for (std::size_t t = 0; t < count; ++t) body(t);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= count || failed.load()) return;
            try {
                body(t);
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

void attach_bounds(AlgorithmCurves& curves, const Problem& problem,
                   std::span<const std::size_t> ks) {
    switch (curves.algorithm) {
        case Algorithm::REK_ZF:
            curves.bound_old =
                make_bound_curve(BoundKind::REK_ZF_OLD, rek_bound_inputs(problem), ks);
            break;
        case Algorithm::REK_S:
            curves.bound_old =
                make_bound_curve(BoundKind::REK_ZF_OLD, rek_bound_inputs(problem), ks);
            curves.bound_new =
                make_bound_curve(BoundKind::REK_S_NEW, rek_bound_inputs(problem), ks);
            break;
        case Algorithm::REGS_MNR:
            curves.bound_old = make_bound_curve(BoundKind::REGS_MNR_OLD,
                                                regs_bound_inputs(problem), ks);
            break;
        case Algorithm::REGS_E:
            curves.bound_old = make_bound_curve(BoundKind::REGS_MNR_OLD,
                                                regs_bound_inputs(problem), ks);
            curves.bound_new =
                make_bound_curve(BoundKind::REGS_E_NEW, regs_bound_inputs(problem), ks);
            break;
        default:
            break;
    }
}

}  // namespace

Problem generate_problem(const ExperimentConfig& cfg) {
    return build_problem(cfg, kProblemStreamId);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    return run_experiment_on(generate_problem(cfg), cfg);
}

ExperimentResult run_experiment_on(const Problem& problem, const ExperimentConfig& cfg) {
    validate(cfg);

    ExperimentResult result;
    result.config = cfg;
    result.frob_sq = problem.a.frob_sq();
    result.rho_value = rho(problem.spectral, result.frob_sq);
    result.sigma1 = problem.spectral.sigma_max;
    result.sigmar = problem.spectral.sigma_min_nonzero;

    const std::vector<std::size_t> ks = record_grid(cfg.iters, cfg.record_every);
    const std::size_t n_algos = cfg.algorithms.size();

    if (cfg.stop_below) {
        // Single-trial early-stopped run: the grid is whatever got recorded.
        std::vector<std::vector<double>> errs(n_algos);
        std::vector<std::vector<std::size_t>> seen(n_algos);
        for (std::size_t ai = 0; ai < n_algos; ++ai) {
            RngStream rng(cfg.seed, 0);
            RunOptions opts{cfg.iters, cfg.record_every, {}, {}, cfg.stop_below};
            run_solver(cfg.algorithms[ai], problem, opts, rng,
                       [&](const TraceRecord& rec) {
                           seen[ai].push_back(rec.iteration);
                           errs[ai].push_back(rec.estimate_err_sq);
                       });
        }
        // Curves may have stopped at different iterations; cut to the shortest.
        std::size_t len = errs.empty() ? 0 : errs.front().size();
        for (const auto& e : errs) len = std::min(len, e.size());
        result.ks.assign(seen.front().begin(),
                         seen.front().begin() + static_cast<std::ptrdiff_t>(len));
        for (std::size_t ai = 0; ai < n_algos; ++ai) {
            AlgorithmCurves c;
            c.algorithm = cfg.algorithms[ai];
            c.mean_err.assign(errs[ai].begin(),
                              errs[ai].begin() + static_cast<std::ptrdiff_t>(len));
            c.stderr_err.assign(len, 0.0);
            attach_bounds(c, problem, result.ks);
            result.curves.push_back(std::move(c));
        }
        return result;
    }

    // trial_errs[algo][trial] = error curve on the grid
    std::vector<std::vector<std::vector<double>>> trial_errs(
        n_algos, std::vector<std::vector<double>>(cfg.trials));

    parallel_for_trials(cfg.trials, [&](std::size_t t) {
        const Problem* prob = &problem;
        std::optional<Problem> own;
        if (cfg.regenerate_problem_per_trial) {
            own = build_problem(cfg, kProblemStreamId + 1 + t);
            prob = &*own;
        }
        for (std::size_t ai = 0; ai < n_algos; ++ai) {
            std::vector<double>& curve = trial_errs[ai][t];
            curve.reserve(ks.size());
            RngStream rng(cfg.seed, t);
            RunOptions opts{cfg.iters, cfg.record_every, {}, {}, {}};
            run_solver(cfg.algorithms[ai], *prob, opts, rng,
                       [&](const TraceRecord& rec) {
                           curve.push_back(rec.estimate_err_sq);
                       });
            if (curve.size() != ks.size()) {
                throw std::logic_error("trial curve does not match the record grid");
            }
        }
    });

    result.ks = ks;
    for (std::size_t ai = 0; ai < n_algos; ++ai) {
        AlgorithmCurves c;
        c.algorithm = cfg.algorithms[ai];
        c.mean_err.resize(ks.size());
        c.stderr_err.resize(ks.size());
        const double nt = static_cast<double>(cfg.trials);
        for (std::size_t ki = 0; ki < ks.size(); ++ki) {
            double sum = 0.0;
            double sum_sq = 0.0;
            for (std::size_t t = 0; t < cfg.trials; ++t) {  // fixed trial order
                const double e = trial_errs[ai][t][ki];
                sum += e;
                sum_sq += e * e;
            }
            const double mean = sum / nt;
            c.mean_err[ki] = mean;
            if (cfg.trials > 1) {
                const double var = std::max(0.0, (sum_sq - nt * mean * mean) / (nt - 1.0));
                c.stderr_err[ki] = std::sqrt(var / nt);
            }
        }
        attach_bounds(c, problem, ks);
        result.curves.push_back(std::move(c));
    }
    return result;
}

bool Table1::matches_expected() const {
    const Table1 expected = table1_expected();
    return cells == expected.cells;
}

std::string Table1::to_string() const {
    std::ostringstream os;
    os << "case                  ";
    for (const char* c : col_labels) os << '\t' << c;
    os << '\n';
    for (std::size_t r = 0; r < cells.size(); ++r) {
        os << row_labels[r];
        for (std::size_t c = 0; c < cells[r].size(); ++c) os << '\t' << cells[r][c];
        os << '\n';
    }
    return os.str();
}

Table1 table1_expected() {
    Table1 t;
    t.cells = {{{'Y', 'Y', 'Y', 'Y'},
                {'Y', 'N', 'Y', 'Y'},
                {'N', 'Y', 'Y', 'Y'},
                {'N', 'N', 'Y', 'Y'}}};
    return t;
}

Table1 classify_table1(std::uint64_t seed) {
    struct Case {
        bool consistent;
        std::size_t rank;
    };
    constexpr std::array<Case, 4> cases{{{true, 30}, {true, 18}, {false, 30}, {false, 18}}};

    Table1 out;
    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
        ExperimentConfig cfg;
        cfg.m = 60;
        cfg.n = 30;
        cfg.rank = cases[ci].rank;
        cfg.sigma_max = 2.0;
        cfg.sigma_min = 1.0;
        cfg.consistent = cases[ci].consistent;
        cfg.algorithms = {Algorithm::RK, Algorithm::RGS, Algorithm::REK_S,
                          Algorithm::REGS_E};
        cfg.trials = 10;
        cfg.seed = seed;

        Problem problem = generate_problem(cfg);
        cfg.iters = default_iteration_budget(problem);
        cfg.record_every = cfg.iters;  // only the initial and final errors matter
        ExperimentResult res = run_experiment_on(problem, cfg);

        for (std::size_t ai = 0; ai < res.curves.size(); ++ai) {
            const auto& mean = res.curves[ai].mean_err;
            const double initial = mean.front();
            const double final_err = mean.back();
            out.cells[ci][ai] = final_err < 1e-4 * initial ? 'Y' : 'N';
        }
    }
    return out;
}

namespace {

void echo_config(std::ostream& os, const ExperimentResult& r) {
    const ExperimentConfig& c = r.config;
    os << "# rekgs-bench experiment\n";
    os << "# m " << c.m << " n " << c.n << " rank " << c.rank << " sigma_max "
       << detail::format_double(c.sigma_max) << " sigma_min "
       << detail::format_double(c.sigma_min) << " consistent " << (c.consistent ? 1 : 0);
    if (c.resid_scale) os << " resid_scale " << detail::format_double(*c.resid_scale);
    os << '\n';
    os << "# algorithms ";
    for (std::size_t i = 0; i < c.algorithms.size(); ++i) {
        if (i) os << ',';
        os << algorithm_name(c.algorithms[i]);
    }
    os << '\n';
    os << "# iters " << c.iters << " trials " << c.trials << " seed " << c.seed
       << " record_every " << c.record_every;
    if (c.regenerate_problem_per_trial) os << " regenerate_problem_per_trial 1";
    if (c.stop_below) os << " stop_below " << detail::format_double(*c.stop_below);
    os << '\n';
    os << "# rho " << detail::format_double(r.rho_value) << " sigma1 "
       << detail::format_double(r.sigma1) << " sigmar " << detail::format_double(r.sigmar)
       << " frob_sq " << detail::format_double(r.frob_sq) << '\n';
}

}  // namespace

void emit_csv(const ExperimentResult& result, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("emit_csv: cannot open " + path.string());
    }
    echo_config(os, result);
    os << 'k';
    for (const auto& c : result.curves) {
        const auto name = algorithm_name(c.algorithm);
        os << ',' << name << "_mean_err";
        if (c.bound_old) os << ',' << name << "_bound_old";
        if (c.bound_new) os << ',' << name << "_bound_new";
    }
    os << '\n';
    for (std::size_t ki = 0; ki < result.ks.size(); ++ki) {
        os << result.ks[ki];
        for (const auto& c : result.curves) {
            os << ',' << detail::format_double(c.mean_err[ki]);
            if (c.bound_old) os << ',' << detail::format_double(c.bound_old->values[ki]);
            if (c.bound_new) os << ',' << detail::format_double(c.bound_new->values[ki]);
        }
        os << '\n';
    }
    if (!os) {
        throw std::runtime_error("emit_csv: write failed for " + path.string());
    }
}

void emit_plot(const ExperimentResult& result, const std::filesystem::path& path,
               bool include_old_bounds) {
    std::vector<PlotSeries> series;
    std::vector<double> xs(result.ks.size());
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(result.ks[i]);
    for (const auto& c : result.curves) {
        const std::string name(algorithm_name(c.algorithm));
        series.push_back({name + " mean error", xs, c.mean_err, false});
        if (c.bound_new) {
            series.push_back({name + " bound (new)", xs, c.bound_new->values, true});
        }
        if (include_old_bounds && c.bound_old) {
            series.push_back({name + " bound (old)", xs, c.bound_old->values, true});
        }
    }
    std::ostringstream title;
    title << (result.config.consistent ? "consistent" : "inconsistent") << ' '
          << result.config.m << "x" << result.config.n << " rank " << result.config.rank
          << ", " << result.config.trials << " trials";
    write_semilogy_svg(path, series, title.str(), "iteration k",
                       "squared error");
}

}  // namespace rekgs
