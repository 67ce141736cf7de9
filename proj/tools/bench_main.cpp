#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "rekgs/bounds.hpp"
#include "rekgs/experiment.hpp"
#include "rekgs/problems.hpp"
#include "rekgs/solvers.hpp"

namespace {

struct RunArgs {
    rekgs::ExperimentConfig cfg;
    std::string algos = "rek_s,regs_e";
    double resid_scale = -1.0;  // <0 means default (||A xhat||)
    std::size_t iters = 0;      // 0 means the budget formula
    double stop_below = -1.0;
    int figure = 0;
    bool paper_scale = false;
    bool inconsistent = false;
    std::string out = "experiment.csv";
    std::string plot;
    bool old_bounds = false;
    std::string save_problem_path;
    std::string load_problem_path;
};

void apply_figure_preset(RunArgs& a) {
    // Desk-scaled variants of the paper's four configurations; --paper-scale
    // restores the original 500 x 250 dimensions.
    struct Preset {
        bool consistent;
        bool full_rank;
        double sigma_max;
    };
    constexpr Preset presets[4] = {
        {true, true, 1.25}, {true, false, 1.5}, {false, true, 1.75}, {false, false, 2.0}};
    const Preset& p = presets[a.figure - 1];
    a.cfg.m = a.paper_scale ? 500 : 60;
    a.cfg.n = a.paper_scale ? 250 : 30;
    a.cfg.rank = p.full_rank ? a.cfg.n : (a.paper_scale ? 150 : 18);
    a.cfg.sigma_max = p.sigma_max;
    a.cfg.sigma_min = 1.0;
    a.inconsistent = !p.consistent;
}

int do_run(RunArgs& a) {
    if (a.figure != 0) apply_figure_preset(a);
    a.cfg.consistent = !a.inconsistent;
    if (a.resid_scale >= 0.0) a.cfg.resid_scale = a.resid_scale;
    if (a.stop_below >= 0.0) a.cfg.stop_below = a.stop_below;

    std::stringstream names(a.algos);
    std::string name;
    a.cfg.algorithms.clear();
    while (std::getline(names, name, ',')) {
        if (!name.empty()) a.cfg.algorithms.push_back(rekgs::algorithm_from_name(name));
    }

    rekgs::Problem problem = [&] {
        if (!a.load_problem_path.empty()) {
            rekgs::Problem p = rekgs::load_problem(a.load_problem_path);
            a.cfg.m = p.rows();
            a.cfg.n = p.cols();
            a.cfg.rank = p.rank();
            a.cfg.sigma_max = p.spectral.sigma_max;
            a.cfg.sigma_min = p.spectral.sigma_min_nonzero;
            a.cfg.consistent = p.consistent;
            a.cfg.resid_scale.reset();
            return p;
        }
        a.cfg.iters = 1;  // placeholder so generation-time validation passes
        rekgs::validate(a.cfg);
        return rekgs::generate_problem(a.cfg);
    }();

    a.cfg.iters = a.iters == 0 ? rekgs::default_iteration_budget(problem) : a.iters;

    rekgs::ExperimentResult result = rekgs::run_experiment_on(problem, a.cfg);
    rekgs::emit_csv(result, a.out);
    std::cout << "wrote " << a.out << " (" << result.ks.size() << " rows, rho="
              << result.rho_value << ")\n";
    if (!a.plot.empty()) {
        rekgs::emit_plot(result, a.plot, a.old_bounds);
        std::cout << "wrote " << a.plot << '\n';
    }
    if (!a.save_problem_path.empty()) {
        rekgs::save_problem(problem, a.save_problem_path);
        std::cout << "wrote " << a.save_problem_path << '\n';
    }
    return 0;
}

int do_table1(std::uint64_t seed, std::size_t seeds) {
    bool all_match = true;
    for (std::size_t i = 0; i < seeds; ++i) {
        const rekgs::Table1 t = rekgs::classify_table1(seed + i);
        const bool match = t.matches_expected();
        all_match = all_match && match;
        std::cout << "seed " << seed + i << ":\n"
                  << t.to_string()
                  << (match ? "matches the published pattern"
                            : "DOES NOT match the published pattern")
                  << "\n\n";
    }
    return all_match ? 0 : 3;
}

struct BoundsArgs {
    rekgs::ExperimentConfig cfg;
    bool inconsistent = false;
    double resid_scale = -1.0;
    std::size_t iters = 0;
    std::string out = "bounds.csv";
};

int do_bounds(BoundsArgs& a) {
    a.cfg.consistent = !a.inconsistent;
    if (a.resid_scale >= 0.0) a.cfg.resid_scale = a.resid_scale;
    a.cfg.algorithms = {rekgs::Algorithm::REK_S, rekgs::Algorithm::REGS_E};
    a.cfg.iters = 1;
    rekgs::validate(a.cfg);
    rekgs::Problem problem = rekgs::generate_problem(a.cfg);
    const std::size_t iters =
        a.iters == 0 ? rekgs::default_iteration_budget(problem) : a.iters;

    std::vector<std::size_t> ks;
    for (std::size_t k = 0; k <= iters; k += a.cfg.record_every) ks.push_back(k);
    if (ks.back() != iters) ks.push_back(iters);

    const rekgs::BoundInputs rek = rekgs::rek_bound_inputs(problem);
    const rekgs::BoundInputs regs = rekgs::regs_bound_inputs(problem);
    const auto curves = {
        rekgs::make_bound_curve(rekgs::BoundKind::REK_ZF_OLD, rek, ks),
        rekgs::make_bound_curve(rekgs::BoundKind::REK_S_NEW, rek, ks),
        rekgs::make_bound_curve(rekgs::BoundKind::REGS_MNR_OLD, regs, ks),
        rekgs::make_bound_curve(rekgs::BoundKind::REGS_E_NEW, regs, ks)};

    std::ofstream os(a.out, std::ios::binary);
    if (!os) {
        std::cerr << "cannot open " << a.out << '\n';
        return 1;
    }
    os << "# rekgs-bench bounds\n";
    os << "# m " << a.cfg.m << " n " << a.cfg.n << " rank " << a.cfg.rank
       << " consistent " << (a.cfg.consistent ? 1 : 0) << " seed " << a.cfg.seed << '\n';
    os << "# rho " << rek.rho << " sigma1 " << rek.sigma1 << " sigmar " << rek.sigmar
       << '\n';
    os << 'k';
    for (const auto& c : curves) os << ',' << rekgs::bound_kind_name(c.kind);
    os << '\n';
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
        os << ks[ki];
        for (const auto& c : curves) os << ',' << c.values[ki];
        os << '\n';
    }
    std::cout << "wrote " << a.out << " (" << ks.size() << " rows)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"randomized extended Kaczmarz / Gauss-Seidel experiment harness"};
    app.require_subcommand(1);

    RunArgs run;
    CLI::App* run_cmd = app.add_subcommand(
        "run", "run seeded solver trials, average errors, evaluate bounds");
    run_cmd->add_option("--m", run.cfg.m, "rows");
    run_cmd->add_option("--n", run.cfg.n, "columns");
    run_cmd->add_option("--rank", run.cfg.rank, "rank of the generated matrix");
    run_cmd->add_option("--sigma-max", run.cfg.sigma_max, "largest singular value");
    run_cmd->add_option("--sigma-min", run.cfg.sigma_min, "smallest nonzero singular value");
    run_cmd->add_flag("--inconsistent", run.inconsistent, "build an inconsistent system");
    run_cmd->add_flag("--consistent", [&run](std::int64_t) { run.inconsistent = false; },
                      "build a consistent system (default)");
    run_cmd->add_option("--resid-scale", run.resid_scale,
                        "residual norm for inconsistent systems (default ||A xhat||)");
    run_cmd->add_option("--algos", run.algos,
                        "comma list of rk,rgs,rek_zf,rek_s,regs_mnr,regs_e");
    run_cmd->add_option("--iters", run.iters,
                        "iteration budget (default 20*||A||_F^2/sigma_r^2)");
    run_cmd->add_option("--trials", run.cfg.trials, "Monte Carlo trials");
    run_cmd->add_option("--seed", run.cfg.seed, "experiment seed");
    run_cmd->add_option("--record-every", run.cfg.record_every, "trace stride");
    run_cmd->add_option("--stop-below", run.stop_below,
                        "stop once the traced error falls below this (trials=1)");
    run_cmd->add_option("--figure", run.figure, "preset 1-4 matching the four cases")
        ->check(CLI::Range(1, 4));
    run_cmd->add_flag("--paper-scale", run.paper_scale,
                      "use the original 500x250 dimensions with --figure");
    run_cmd->add_flag("--regenerate-problem-per-trial",
                      run.cfg.regenerate_problem_per_trial,
                      "fresh problem per trial instead of one shared problem");
    run_cmd->add_option("--out", run.out, "CSV output path");
    run_cmd->add_option("--plot", run.plot, "SVG output path");
    run_cmd->add_flag("--old-bounds", run.old_bounds, "include old bounds in the plot");
    run_cmd->add_option("--save-problem", run.save_problem_path,
                        "persist the generated problem fixture");
    run_cmd->add_option("--problem", run.load_problem_path,
                        "load a problem fixture instead of generating one");

    std::uint64_t t1_seed = 1;
    std::size_t t1_seeds = 1;
    CLI::App* t1_cmd =
        app.add_subcommand("table1", "convergence classification over the four cases");
    t1_cmd->add_option("--seed", t1_seed, "first seed");
    t1_cmd->add_option("--seeds", t1_seeds, "number of consecutive seeds");

    BoundsArgs bounds;
    CLI::App* bounds_cmd =
        app.add_subcommand("bounds", "evaluate the four bound curves for a config");
    bounds_cmd->add_option("--m", bounds.cfg.m, "rows");
    bounds_cmd->add_option("--n", bounds.cfg.n, "columns");
    bounds_cmd->add_option("--rank", bounds.cfg.rank, "rank");
    bounds_cmd->add_option("--sigma-max", bounds.cfg.sigma_max, "largest singular value");
    bounds_cmd->add_option("--sigma-min", bounds.cfg.sigma_min,
                           "smallest nonzero singular value");
    bounds_cmd->add_flag("--inconsistent", bounds.inconsistent,
                         "build an inconsistent system");
    bounds_cmd->add_option("--resid-scale", bounds.resid_scale, "residual norm");
    bounds_cmd->add_option("--iters", bounds.iters, "grid end (default budget formula)");
    bounds_cmd->add_option("--record-every", bounds.cfg.record_every, "grid stride");
    bounds_cmd->add_option("--seed", bounds.cfg.seed, "problem seed");
    bounds_cmd->add_option("--out", bounds.out, "CSV output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return do_run(run);
        if (t1_cmd->parsed()) return do_table1(t1_seed, t1_seeds);
        if (bounds_cmd->parsed()) return do_bounds(bounds);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
