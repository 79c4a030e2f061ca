// Benchmark driver and configuration tests: knot-budget allocation,
// experiment determinism, CSV formatting, convergence sweeps, and the
// config file parser with its error diagnostics.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bkm/bench.hpp"
#include "bkm/config.hpp"

using bkm::BcKind;
using bkm::DomainSpec;
using bkm::DomainVariant;
using bkm::ExperimentConfig;
using bkm::ExperimentResult;
using bkm::Scheme;

namespace {

// Write a throwaway config file and return its path.
std::string write_config(const std::string& name, const std::string& body) {
    const std::string path = "/tmp/" + name;
    std::ofstream out(path);
    out << body;
    return path;
}

}  // namespace

TEST_CASE("boundary knot budgets split by component measure", "[bench]") {
    const DomainSpec d2;  // rect perimeter 8 vs ellipse perimeter ~2.55
    const auto c2 = bkm::allocate_boundary_counts(d2, 49);
    REQUIRE(c2.size() == 2);
    CHECK(c2.at("outer") + c2.at("hole") == 49);
    CHECK(c2.at("outer") > c2.at("hole"));
    CHECK(c2.at("hole") >= 4);

    DomainSpec d3;
    d3.variant = DomainVariant::Cube3DWithPeanutCavity;
    const auto c3 = bkm::allocate_boundary_counts(d3, 376);
    REQUIRE(c3.size() == 7);
    int total = 0;
    for (const auto& [name, n] : c3) {
        CHECK(n >= 4);
        total += n;
    }
    CHECK(total == 376);
    // The six congruent faces get equal budgets.
    CHECK(c3.at("x0") == c3.at("z1"));

    CHECK_THROWS_AS(bkm::allocate_boundary_counts(d2, 0), std::invalid_argument);
    CHECK_THROWS_AS(bkm::allocate_boundary_counts(d2, -5), std::invalid_argument);
}

TEST_CASE("identical configurations reproduce identical results", "[bench]") {
    ExperimentConfig cfg;
    cfg.problem = "helmholtz2d_inhom";
    cfg.scheme = Scheme::Unsymmetric;
    cfg.boundary_total = 20;
    cfg.inner_count = 10;
    cfg.seed = 7;
    const ExperimentResult a = bkm::run(cfg);
    const ExperimentResult b = bkm::run(cfg);

    CHECK(a.problem == "helmholtz2d_inhom");
    CHECK(a.dirichlet_count + a.neumann_count == 20);
    CHECK(a.inner_count == 10);
    CHECK(a.eval_count == 460);  // 2-D problem default
    CHECK(a.seed == 7);
    CHECK(a.l2_rel_err > 0.0);
    CHECK(a.cond_est > 1.0);

    // Bitwise equality of everything except the wall-clock timing.
    CHECK(a.dirichlet_count == b.dirichlet_count);
    CHECK(a.neumann_count == b.neumann_count);
    CHECK(a.inner_count == b.inner_count);
    CHECK(a.eval_count == b.eval_count);
    CHECK(a.l2_rel_err == b.l2_rel_err);
    CHECK(a.max_err == b.max_err);
    CHECK(a.cond_est == b.cond_est);
}

TEST_CASE("run validation", "[bench]") {
    ExperimentConfig cfg;
    cfg.boundary_total = 20;
    cfg.inner_count = -1;
    CHECK_THROWS_AS(bkm::run(cfg), std::invalid_argument);
    cfg.inner_count = 15;
    cfg.eval_count = -3;
    CHECK_THROWS_AS(bkm::run(cfg), std::invalid_argument);

    // Domain override must match the problem's dimensionality.
    cfg = ExperimentConfig{};
    cfg.boundary_total = 20;
    DomainSpec cube;
    cube.variant = DomainVariant::Cube3DWithPeanutCavity;
    cfg.domain = cube;
    CHECK_THROWS_AS(bkm::run(cfg), std::invalid_argument);

    cfg = ExperimentConfig{};
    cfg.problem = "no_such_problem";
    cfg.boundary_total = 20;
    CHECK_THROWS_AS(bkm::run(cfg), std::invalid_argument);
}

TEST_CASE("explicit evaluation count is honored", "[bench]") {
    ExperimentConfig cfg;
    cfg.boundary_total = 20;
    cfg.inner_count = 10;
    cfg.eval_count = 123;
    const ExperimentResult r = bkm::run(cfg);
    CHECK(r.eval_count == 123);
}

TEST_CASE("CSV output format", "[bench]") {
    ExperimentResult r;
    r.problem = "p1";
    r.scheme = Scheme::Symmetric;
    r.dirichlet_count = 12;
    r.neumann_count = 8;
    r.inner_count = 15;
    r.eval_count = 460;
    r.seed = 7;
    r.l2_rel_err = 0.000123456789;
    r.max_err = 0.5;
    r.cond_est = 1e10;
    r.wall_ms = 12.25;

    std::ostringstream os;
    bkm::write_csv(os, {r});
    const std::string want =
        std::string(bkm::kCsvHeader) +
        "\np1,sym,12,8,15,460,7,1.23457e-04,5.00000e-01,1.00000e+10,1.22500e+01\n";
    CHECK(os.str() == want);

    // Scheme names as used in the scheme column.
    CHECK(std::string(bkm::scheme_name(Scheme::Unsymmetric)) == "unsym");
    CHECK(std::string(bkm::scheme_name(Scheme::Symmetric)) == "sym");
}

TEST_CASE("convergence sweep sorts its knot counts", "[bench]") {
    ExperimentConfig base;
    base.problem = "helmholtz2d_inhom";
    base.inner_count = 10;
    base.eval_count = 150;
    base.seed = 1;
    const auto rows = bkm::convergence_sweep(base, {28, 20});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].dirichlet_count + rows[0].neumann_count == 20);
    CHECK(rows[1].dirichlet_count + rows[1].neumann_count == 28);

    CHECK_THROWS_AS(bkm::convergence_sweep(base, {20}), std::invalid_argument);
    CHECK_THROWS_AS(bkm::convergence_sweep(base, {}), std::invalid_argument);
}

TEST_CASE("config file parsing and application", "[config]") {
    const std::string path = write_config("bkm_test_full.cfg", R"(# experiment description
problem = diffreact2d_d1
scheme = sym   # trailing comment
seed = 9
inner_knots = 12
eval_knots = 200
out = /tmp/some.csv

boundary_knots.outer = 24
boundary_knots.hole = 12
domain.variant = rect2d_ellipse_hole
domain.outer_min.x = 0.5
domain.outer_max.x = 2.5
domain.hole_center.x = 1.5
domain.hole_a = 0.4
domain.hole_b = 0.2
domain.bc.hole = dirichlet
)");
    const auto pairs = bkm::read_config_file(path);
    ExperimentConfig cfg;
    bkm::apply_config(pairs, cfg);

    CHECK(cfg.problem == "diffreact2d_d1");
    CHECK(cfg.scheme == Scheme::Symmetric);
    CHECK(cfg.seed == 9);
    CHECK(cfg.inner_count == 12);
    CHECK(cfg.eval_count == 200);
    CHECK(cfg.out == "/tmp/some.csv");
    REQUIRE(cfg.boundary_counts.size() == 2);
    CHECK(cfg.boundary_counts.at("outer") == 24);
    CHECK(cfg.boundary_counts.at("hole") == 12);

    REQUIRE(cfg.domain.has_value());
    CHECK(cfg.domain->variant == DomainVariant::Rect2DWithEllipseHole);
    CHECK(cfg.domain->outer_min.x == 0.5);
    CHECK(cfg.domain->outer_max.x == 2.5);
    CHECK(cfg.domain->outer_min.y == 0.0);  // untouched default
    CHECK(cfg.domain->hole_center.x == 1.5);
    CHECK(cfg.domain->hole_a == 0.4);
    CHECK(cfg.domain->hole_b == 0.2);
    CHECK(cfg.domain->bc_assignment.at("hole") == BcKind::Dirichlet);
    std::remove(path.c_str());
}

TEST_CASE("boundary_knots.total clears per-component counts", "[config]") {
    const std::string path = write_config("bkm_test_total.cfg", R"(boundary_knots.outer = 24
boundary_knots.hole = 12
boundary_knots.total = 30
)");
    ExperimentConfig cfg;
    bkm::apply_config(bkm::read_config_file(path), cfg);
    CHECK(cfg.boundary_total == 30);
    CHECK(cfg.boundary_counts.empty());
    std::remove(path.c_str());
}

TEST_CASE("config error diagnostics", "[config]") {
    CHECK_THROWS_WITH(bkm::read_config_file("/tmp/does_not_exist_bkm.cfg"),
                      Catch::Matchers::ContainsSubstring("cannot open"));

    // Malformed lines are reported with their line number.
    {
        const std::string path = write_config("bkm_test_noeq.cfg", "problem = ok\njust words\n");
        CHECK_THROWS_WITH(bkm::read_config_file(path),
                          Catch::Matchers::ContainsSubstring("line 2"));
        std::remove(path.c_str());
    }
    {
        const std::string path = write_config("bkm_test_novalue.cfg", "problem =\n");
        CHECK_THROWS_WITH(bkm::read_config_file(path),
                          Catch::Matchers::ContainsSubstring("line 1"));
        std::remove(path.c_str());
    }

    ExperimentConfig cfg;
    // Unknown keys name the offending key.
    CHECK_THROWS_WITH(bkm::apply_config({{"nope", "3"}}, cfg),
                      Catch::Matchers::ContainsSubstring("nope"));
    CHECK_THROWS_AS(bkm::apply_config({{"scheme", "fancy"}}, cfg), std::invalid_argument);
    CHECK_THROWS_AS(bkm::apply_config({{"seed", "-4"}}, cfg), std::invalid_argument);
    CHECK_THROWS_AS(bkm::apply_config({{"seed", "abc"}}, cfg), std::invalid_argument);
    CHECK_THROWS_AS(bkm::apply_config({{"inner_knots", "1.5"}}, cfg), std::invalid_argument);
    CHECK_THROWS_AS(bkm::apply_config({{"domain.variant", "triangle"}}, cfg),
                    std::invalid_argument);
    CHECK_THROWS_AS(bkm::apply_config({{"domain.hole_a", "xyz"}}, cfg), std::invalid_argument);
    CHECK_THROWS_AS(bkm::apply_config({{"domain.outer_min.w", "1.0"}}, cfg),
                    std::invalid_argument);
    // "cavity" is not a component of the default 2-D domain.
    CHECK_THROWS_WITH(bkm::apply_config({{"domain.bc.cavity", "neumann"}}, cfg),
                      Catch::Matchers::ContainsSubstring("unknown boundary component"));
    CHECK_THROWS_AS(bkm::apply_config({{"domain.bc.hole", "robin"}}, cfg), std::invalid_argument);
}
