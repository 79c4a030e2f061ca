// bkm-bench: run boundary-knot-method experiments and emit CSV rows.
//
// Subcommands:
//   list-problems          print the builtin test problems
//   run                    run a single experiment, write one CSV row
//   sweep                  run one experiment per boundary knot count
//
// Exit codes: 0 on success, 1 on a usage/configuration error, 2 on a
// numerical failure (singular or near-singular system).
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bkm/bench.hpp"
#include "bkm/config.hpp"

namespace {

// Numerical failures worth exit code 2 are thrown as std::runtime_error by
// the solver and DRM layers; configuration problems arrive as
// std::invalid_argument (exit code 1).
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct CliOptions {
    std::string problem;
    std::string scheme;
    std::string boundary_knots;  // int for run, comma list for sweep
    int inner_knots = -1;        // -1 = not given
    int eval_knots = -1;
    long long seed = -1;
    std::string out;
    std::string domain_config;
};

void add_common_flags(CLI::App* cmd, CliOptions& opt, bool sweep) {
    cmd->add_option("--problem", opt.problem, "Builtin problem name (see list-problems)");
    cmd->add_option("--scheme", opt.scheme, "Collocation scheme: unsym | sym")
        ->check(CLI::IsMember({"unsym", "sym"}));
    cmd->add_option("--boundary-knots", opt.boundary_knots,
                    sweep ? "Comma-separated boundary knot totals, e.g. 41,49"
                          : "Total boundary knot count (split across components)");
    cmd->add_option("--inner-knots", opt.inner_knots, "Interior knot count")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--eval-knots", opt.eval_knots,
                    "Evaluation knot count (0 = problem default: 460 in 2-D, 1012 in 3-D)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", opt.seed, "RNG seed for knot placement")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--out", opt.out, "CSV output path (default: stdout)");
    cmd->add_option("--domain-config", opt.domain_config,
                    "Config file with experiment/domain overrides (CLI flags win)");
}

std::vector<int> parse_count_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string t = bkm::config_detail::trim(item);
        if (t.empty()) throw std::invalid_argument("empty entry in --boundary-knots list");
        out.push_back(static_cast<int>(bkm::config_detail::parse_int("--boundary-knots", t)));
    }
    if (out.empty()) throw std::invalid_argument("--boundary-knots list is empty");
    return out;
}

// Build the effective config: start from defaults, apply the config file
// (when given), then apply CLI flags on top so explicit flags always win.
bkm::ExperimentConfig make_config(const CliOptions& opt) {
    bkm::ExperimentConfig cfg;
    if (!opt.domain_config.empty())
        bkm::apply_config(bkm::read_config_file(opt.domain_config), cfg);
    if (!opt.problem.empty()) cfg.problem = opt.problem;
    if (opt.scheme == "unsym") cfg.scheme = bkm::Scheme::Unsymmetric;
    else if (opt.scheme == "sym") cfg.scheme = bkm::Scheme::Symmetric;
    if (opt.inner_knots >= 0) cfg.inner_count = opt.inner_knots;
    if (opt.eval_knots >= 0) cfg.eval_count = opt.eval_knots;
    if (opt.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opt.seed);
    if (!opt.out.empty()) cfg.out = opt.out;
    return cfg;
}

void emit(const bkm::ExperimentConfig& cfg, const std::vector<bkm::ExperimentResult>& rows) {
    if (cfg.out.empty()) {
        bkm::write_csv(std::cout, rows);
        return;
    }
    std::ofstream os(cfg.out);
    if (!os) throw std::invalid_argument("cannot open output file '" + cfg.out + "'");
    bkm::write_csv(os, rows);
}

const char* variant_name(bkm::DomainVariant v) {
    switch (v) {
        case bkm::DomainVariant::Rect2DWithEllipseHole: return "rect2d_ellipse_hole";
        case bkm::DomainVariant::Cube3DWithPeanutCavity: return "cube3d_peanut_cavity";
        case bkm::DomainVariant::Rect2D: return "rect2d";
        case bkm::DomainVariant::Cube3D: return "cube3d";
    }
    return "?";
}

int cmd_list_problems() {
    for (const bkm::TestProblem& p : bkm::builtin_problems()) {
        const char* op = p.op.kind == bkm::OperatorKind::Helmholtz ? "Helmholtz" : "modified Helmholtz";
        std::printf("%-18s %dD %-18s param=%.6g  domain=%s\n", p.name.c_str(), p.op.dim, op,
                    p.op.param, variant_name(p.domain.variant));
    }
    return 0;
}

int cmd_run(const CliOptions& opt) {
    bkm::ExperimentConfig cfg = make_config(opt);
    if (!opt.boundary_knots.empty()) {
        cfg.boundary_total = static_cast<int>(
            bkm::config_detail::parse_int("--boundary-knots", opt.boundary_knots));
        cfg.boundary_counts.clear();
    }
    if (cfg.boundary_total <= 0 && cfg.boundary_counts.empty())
        throw std::invalid_argument("run needs --boundary-knots (or boundary_knots.* in the config)");
    emit(cfg, {bkm::run(cfg)});
    return 0;
}

int cmd_sweep(const CliOptions& opt) {
    bkm::ExperimentConfig cfg = make_config(opt);
    if (opt.boundary_knots.empty())
        throw std::invalid_argument("sweep needs --boundary-knots with at least two counts");
    emit(cfg, bkm::convergence_sweep(cfg, parse_count_list(opt.boundary_knots)));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boundary knot method benchmark runner"};
    app.require_subcommand(1);

    CLI::App* list_cmd = app.add_subcommand("list-problems", "Print the builtin test problems");
    CliOptions run_opt, sweep_opt;
    CLI::App* run_cmd = app.add_subcommand("run", "Run one experiment and emit a CSV row");
    add_common_flags(run_cmd, run_opt, /*sweep=*/false);
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "Run a convergence sweep over boundary knot counts");
    add_common_flags(sweep_cmd, sweep_opt, /*sweep=*/true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (list_cmd->parsed()) return cmd_list_problems();
        if (run_cmd->parsed()) return cmd_run(run_opt);
        return cmd_sweep(sweep_opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}
