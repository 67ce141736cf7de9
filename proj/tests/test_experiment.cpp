#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rekgs/experiment.hpp"
#include "rekgs/svg_plot.hpp"

using namespace rekgs;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

ExperimentConfig figure1_desk_config() {
    ExperimentConfig cfg;
    cfg.m = 60;
    cfg.n = 30;
    cfg.rank = 30;
    cfg.sigma_max = 1.25;
    cfg.sigma_min = 1.0;
    cfg.consistent = true;
    cfg.algorithms = {Algorithm::REK_S, Algorithm::REGS_E};
    cfg.iters = 600;
    cfg.trials = 20;
    cfg.seed = 2024;
    cfg.record_every = 10;
    return cfg;
}

}  // namespace

TEST_CASE("config validation catches the documented constraint violations") {
    ExperimentConfig cfg = figure1_desk_config();
    CHECK_NOTHROW(validate(cfg));

    ExperimentConfig bad = cfg;
    bad.rank = 1;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = cfg;
    bad.rank = 31;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = cfg;
    bad.sigma_min = 2.0;  // above sigma_max
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = cfg;
    bad.consistent = false;  // rank == m impossible... rank=30 < m=60 is fine
    bad.rank = 30;
    CHECK_NOTHROW(validate(bad));
    bad.resid_scale = 1.0;
    CHECK_NOTHROW(validate(bad));
    bad.consistent = true;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = cfg;
    bad.trials = 0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = cfg;
    bad.record_every = 0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = cfg;
    bad.algorithms.clear();
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = cfg;
    bad.stop_below = 1e-6;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);  // needs trials == 1
}

TEST_CASE("a zero-iteration single-trial run reports the initial error") {
    ExperimentConfig cfg = figure1_desk_config();
    cfg.trials = 1;
    cfg.iters = 0;
    const ExperimentResult res = run_experiment(cfg);
    REQUIRE(res.ks == std::vector<std::size_t>{0});
    const Problem p = generate_problem(cfg);
    for (const auto& c : res.curves) {
        REQUIRE(c.mean_err.size() == 1);
        CHECK(c.mean_err[0] == doctest::Approx(norm_sq(p.x_star)).epsilon(1e-14));
    }
}

TEST_CASE("identical configs give byte-identical CSV files") {
    ExperimentConfig cfg = figure1_desk_config();
    cfg.iters = 100;
    cfg.trials = 5;
    const auto tmp = std::filesystem::temp_directory_path();
    const auto p1 = tmp / "rekgs_det_1.csv";
    const auto p2 = tmp / "rekgs_det_2.csv";
    emit_csv(run_experiment(cfg), p1);
    emit_csv(run_experiment(cfg), p2);
    const std::string s1 = slurp(p1);
    const std::string s2 = slurp(p2);
    CHECK(s1 == s2);

    ExperimentConfig other = cfg;
    other.seed = cfg.seed + 1;
    const auto p3 = tmp / "rekgs_det_3.csv";
    emit_csv(run_experiment(other), p3);
    CHECK(slurp(p3) != s1);
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);
    std::filesystem::remove(p3);
}

TEST_CASE("csv layout: config echo, header, one row per recorded k") {
    ExperimentConfig cfg = figure1_desk_config();
    cfg.iters = 95;  // not a multiple of the stride: final row still present
    cfg.trials = 3;
    const ExperimentResult res = run_experiment(cfg);
    const auto path = std::filesystem::temp_directory_path() / "rekgs_layout.csv";
    emit_csv(res, path);
    const std::string text = slurp(path);
    std::filesystem::remove(path);

    std::istringstream is(text);
    std::string line;
    std::size_t comment_lines = 0;
    while (std::getline(is, line) && !line.empty() && line[0] == '#') ++comment_lines;
    CHECK(comment_lines >= 3);
    CHECK(line ==
          "k,rek_s_mean_err,rek_s_bound_old,rek_s_bound_new,"
          "regs_e_mean_err,regs_e_bound_old,regs_e_bound_new");

    std::size_t rows = 0;
    long long prev_k = -1;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        ++rows;
        const long long k = std::stoll(line.substr(0, line.find(',')));
        CHECK(k > prev_k);
        prev_k = k;
        CHECK(count_occurrences(line, ",") == 6);
    }
    CHECK(rows == res.ks.size());
    CHECK(prev_k == 95);
}

TEST_CASE("emit_csv with no algorithms writes only the k column") {
    ExperimentResult res;
    res.config = figure1_desk_config();
    res.config.algorithms.clear();
    res.ks = {0, 1, 2};
    const auto path = std::filesystem::temp_directory_path() / "rekgs_empty.csv";
    emit_csv(res, path);
    const std::string text = slurp(path);
    std::filesystem::remove(path);
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line) && !line.empty() && line[0] == '#') {
    }
    CHECK(line == "k");
}

TEST_CASE("mean curves sit below the refined bounds on the figure-1 config") {
    const ExperimentResult res = run_experiment(figure1_desk_config());
    for (const auto& c : res.curves) {
        REQUIRE(c.bound_new.has_value());
        for (std::size_t ki = 0; ki < res.ks.size(); ++ki) {
            const double mean = c.mean_err[ki];
            const double se = c.stderr_err[ki];
            const double slack = mean > 0.0 ? 3.0 * se / mean : 0.0;
            CHECK(mean <= c.bound_new->values[ki] * (1.0 + slack + 1e-12));
        }
    }
}

TEST_CASE("paper-scale figure-1 run stays below the refined bounds") {
    ExperimentConfig cfg;
    cfg.m = 500;
    cfg.n = 250;
    cfg.rank = 250;
    cfg.sigma_max = 1.25;
    cfg.sigma_min = 1.0;
    cfg.consistent = true;
    cfg.algorithms = {Algorithm::REK_S, Algorithm::REGS_E};
    cfg.trials = 20;
    cfg.seed = 7;
    cfg.record_every = 100;
    Problem p = generate_problem(cfg);
    cfg.iters = default_iteration_budget(p);
    const ExperimentResult res = run_experiment_on(p, cfg);
    for (const auto& c : res.curves) {
        REQUIRE(c.bound_new.has_value());
        for (std::size_t ki = 0; ki < res.ks.size(); ++ki) {
            const double mean = c.mean_err[ki];
            const double se = c.stderr_err[ki];
            const double slack = mean > 0.0 ? 3.0 * se / mean : 0.0;
            CHECK(mean <= c.bound_new->values[ki] * (1.0 + slack + 1e-12));
        }
    }
}

TEST_CASE("stop_below truncates a single-trial run") {
    ExperimentConfig cfg = figure1_desk_config();
    cfg.trials = 1;
    cfg.iters = 5000;
    cfg.stop_below = 1e-6;
    const ExperimentResult res = run_experiment(cfg);
    CHECK(res.ks.back() < 5000);
    for (const auto& c : res.curves) {
        CHECK(c.mean_err.back() < 1e-6);
    }
}

TEST_CASE("classify_table1 reproduces the published pattern") {
    const Table1 t = classify_table1(1);
    CHECK(t.matches_expected());
    const std::string text = t.to_string();
    CHECK(count_occurrences(text, "Y") >= 10);
}

TEST_CASE("regenerating the problem per trial still yields deterministic output") {
    ExperimentConfig cfg = figure1_desk_config();
    cfg.iters = 50;
    cfg.trials = 4;
    cfg.regenerate_problem_per_trial = true;
    const ExperimentResult a = run_experiment(cfg);
    const ExperimentResult b = run_experiment(cfg);
    for (std::size_t ci = 0; ci < a.curves.size(); ++ci) {
        CHECK(a.curves[ci].mean_err == b.curves[ci].mean_err);
    }
}

TEST_CASE("log-scale mapping places decades at equal spacing") {
    const double y0 = map_log_y(1.0, 0.01, 1.0, 40.0, 430.0);
    const double y1 = map_log_y(0.1, 0.01, 1.0, 40.0, 430.0);
    const double y2 = map_log_y(0.01, 0.01, 1.0, 40.0, 430.0);
    CHECK(y0 == doctest::Approx(40.0));
    CHECK(y2 == doctest::Approx(430.0));
    CHECK(y1 - y0 == doctest::Approx(y2 - y1));
}

TEST_CASE("plots contain one data polyline per curve plus axes") {
    ExperimentConfig cfg = figure1_desk_config();
    cfg.iters = 100;
    cfg.trials = 2;
    const auto tmp = std::filesystem::temp_directory_path();

    // single algorithm without bounds -> exactly one curve
    ExperimentConfig single = cfg;
    single.algorithms = {Algorithm::RK};
    const auto p1 = tmp / "rekgs_plot_single.svg";
    emit_plot(run_experiment(single), p1);
    const std::string svg1 = slurp(p1);
    std::filesystem::remove(p1);
    CHECK(count_occurrences(svg1, "class=\"curve\"") == 1);
    CHECK(count_occurrences(svg1, "class=\"axis\"") == 2);

    // figure-1 pair: two means + two new bounds; six with the old bounds
    const ExperimentResult res = run_experiment(cfg);
    const auto p2 = tmp / "rekgs_plot_four.svg";
    emit_plot(res, p2, false);
    const std::string svg2 = slurp(p2);
    std::filesystem::remove(p2);
    CHECK(count_occurrences(svg2, "class=\"curve\"") == 4);

    const auto p3 = tmp / "rekgs_plot_six.svg";
    emit_plot(res, p3, true);
    const std::string svg3 = slurp(p3);
    std::filesystem::remove(p3);
    CHECK(count_occurrences(svg3, "class=\"curve\"") == 6);

    // the log-scale mapping of a decade staircase lands equally spaced in the file
    std::vector<PlotSeries> stair{{"stair", {0.0, 1.0, 2.0}, {1.0, 0.1, 0.01}, false}};
    const auto p4 = tmp / "rekgs_plot_stair.svg";
    write_semilogy_svg(p4, stair, "stair", "k", "value");
    const std::string svg4 = slurp(p4);
    std::filesystem::remove(p4);
    const std::size_t pts = svg4.find("points=\"");
    REQUIRE(pts != std::string::npos);
    const std::size_t end = svg4.find('"', pts + 8);
    std::istringstream coords(svg4.substr(pts + 8, end - pts - 8));
    std::vector<double> ys;
    std::string pair;
    while (coords >> pair) {
        ys.push_back(std::stod(pair.substr(pair.find(',') + 1)));
    }
    REQUIRE(ys.size() == 3);
    CHECK(ys[1] - ys[0] == doctest::Approx(ys[2] - ys[1]).epsilon(0.01));
}
