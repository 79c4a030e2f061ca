// Benchmark experiment driver: build knots for a test problem, fit the
// particular solution when the source is nonzero, solve the chosen
// collocation scheme, evaluate against the exact solution, and emit CSV
// rows.
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bkm/drm.hpp"
#include "bkm/geometry.hpp"
#include "bkm/metrics.hpp"
#include "bkm/problems.hpp"
#include "bkm/solver.hpp"

namespace bkm {

struct ExperimentConfig {
    std::string problem = "helmholtz2d_inhom";
    Scheme scheme = Scheme::Unsymmetric;
    // Per-component boundary knot counts; when empty, boundary_total is
    // split across components in proportion to their boundary measure.
    std::map<std::string, int> boundary_counts;
    int boundary_total = 0;
    int inner_count = 15;
    // 0 picks the problem default: 460 evaluation knots in 2-D, 1012 in 3-D.
    int eval_count = 0;
    std::uint64_t seed = 1;
    std::string out;  // CSV destination; empty means stdout
    std::optional<DomainSpec> domain;  // overrides the problem's default domain
};

struct ExperimentResult {
    std::string problem;
    Scheme scheme = Scheme::Unsymmetric;
    std::size_t dirichlet_count = 0;
    std::size_t neumann_count = 0;
    std::size_t inner_count = 0;
    std::size_t eval_count = 0;
    std::uint64_t seed = 0;
    double l2_rel_err = 0.0;
    double max_err = 0.0;
    double cond_est = 0.0;
    double wall_ms = 0.0;
};

namespace bench_detail {

// Boundary measure (perimeter in 2-D, area in 3-D) of one component, used
// to split a total knot budget proportionally.
inline double component_measure(const DomainSpec& d, const std::string& name) {
    const double w = d.outer_max.x - d.outer_min.x;
    const double h = d.outer_max.y - d.outer_min.y;
    const double t = d.outer_max.z - d.outer_min.z;
    if (name == "outer") return 2.0 * (w + h);
    if (name == "hole") {
        // Ramanujan's ellipse perimeter approximation.
        const double a = d.hole_a, b = d.hole_b;
        return kPi * (3.0 * (a + b) - std::sqrt((3.0 * a + b) * (a + 3.0 * b)));
    }
    if (name == "x0" || name == "x1") return h * t;
    if (name == "y0" || name == "y1") return w * t;
    if (name == "z0" || name == "z1") return w * h;
    if (name == "cavity") {
        // Surface of revolution about the x axis: ds = rho sin(theta)
        // sqrt(rho^2 + rho'^2) dtheta dphi, integrated by Simpson's rule.
        const int n = 200;
        const double dt = kPi / n;
        double s = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double theta = i * dt;
            const double rho = d.cavity_scale * peanut_profile(theta);
            const double rhop = d.cavity_scale * peanut_profile_derivative(theta);
            const double g = rho * std::sin(theta) * std::sqrt(rho * rho + rhop * rhop);
            s += g * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
        }
        return 2.0 * kPi * s * dt / 3.0;
    }
    throw std::logic_error("unknown boundary component " + name);
}

}  // namespace bench_detail

// Split a total boundary knot budget across the domain's components in
// proportion to their boundary measure (largest-remainder rounding), with
// a floor of 4 knots per component.
inline std::map<std::string, int> allocate_boundary_counts(const DomainSpec& d, int total) {
    if (total <= 0) throw std::invalid_argument("boundary knot total must be positive");
    const std::vector<std::string>& names = geo_detail::component_names(d);
    double msum = 0.0;
    std::vector<double> measure(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        measure[i] = bench_detail::component_measure(d, names[i]);
        msum += measure[i];
    }
    std::vector<int> quota(names.size());
    std::vector<std::pair<double, std::size_t>> rem;
    int used = 0;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const double share = total * measure[i] / msum;
        quota[i] = static_cast<int>(share);
        used += quota[i];
        rem.emplace_back(share - quota[i], i);
    }
    std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (int k = 0; k < total - used; ++k) quota[rem[k % rem.size()].second] += 1;
    // Enforce the per-component minimum by borrowing from the largest
    // component; boundary_knots rejects anything still under 4.
    for (std::size_t i = 0; i < quota.size(); ++i) {
        while (quota[i] < 4) {
            std::size_t big = 0;
            for (std::size_t j = 1; j < quota.size(); ++j)
                if (quota[j] > quota[big]) big = j;
            if (big == i || quota[big] <= 4) break;
            quota[big] -= 1;
            quota[i] += 1;
        }
    }
    std::map<std::string, int> out;
    for (std::size_t i = 0; i < names.size(); ++i) out[names[i]] = quota[i];
    return out;
}

// Run one experiment end to end.
inline ExperimentResult run(const ExperimentConfig& cfg) {
    TestProblem prob = find_problem(cfg.problem);
    if (cfg.domain) prob.domain = *cfg.domain;
    if (prob.domain.dim() != prob.op.dim)
        throw std::invalid_argument("domain dimensionality does not match the problem operator");
    if (cfg.inner_count < 0 || cfg.eval_count < 0)
        throw std::invalid_argument("knot counts must be non-negative");

    const auto t0 = std::chrono::steady_clock::now();
    KnotSet ks;
    ks.boundary = boundary_knots(prob.domain,
                                 cfg.boundary_counts.empty()
                                     ? allocate_boundary_counts(prob.domain, cfg.boundary_total)
                                     : cfg.boundary_counts,
                                 cfg.seed);
    apply_boundary_conditions(prob, ks.boundary);
    ks.interior = interior_knots(prob.domain, cfg.inner_count);
    const int m_eval = cfg.eval_count > 0 ? cfg.eval_count : (prob.op.dim == 2 ? 460 : 1012);
    ks.evaluation = evaluation_knots(prob.domain, m_eval);

    // Particular solution via source interpolation over the interior and
    // boundary knots; skipped when the sampled source is identically zero
    // (homogeneous problems need no inner knots at all).
    std::vector<Point> centers = ks.interior;
    for (const BoundaryKnot& k : ks.boundary) centers.push_back(k.position);
    std::vector<double> f_values(centers.size());
    bool all_zero = true;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        f_values[i] = prob.source_term(centers[i]);
        if (f_values[i] != 0.0) all_zero = false;
    }
    std::optional<DrmExpansion> u_p;
    if (!all_zero)
        u_p = fit(f_values, centers, KernelSpec{prob.op, 1, KernelFamily::General, 1.0});

    BkmSolution sol = solve_bkm(ks, prob.op, cfg.scheme, u_p ? &*u_p : nullptr);

    std::vector<double> computed(ks.evaluation.size()), exact(ks.evaluation.size());
    for (std::size_t i = 0; i < ks.evaluation.size(); ++i) {
        computed[i] = evaluate(sol, ks.evaluation[i]);
        exact[i] = prob.exact_solution(ks.evaluation[i]);
    }
    const auto t1 = std::chrono::steady_clock::now();

    ExperimentResult r;
    r.problem = prob.name;
    r.scheme = cfg.scheme;
    r.dirichlet_count = ks.dirichlet_count();
    r.neumann_count = ks.neumann_count();
    r.inner_count = ks.interior.size();
    r.eval_count = ks.evaluation.size();
    r.seed = cfg.seed;
    r.l2_rel_err = l2_relative_error(computed, exact);
    r.max_err = max_error(computed, exact);
    r.cond_est = sol.condition_estimate;
    r.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return r;
}

// One run per boundary knot total, shared seed, sorted by count.
inline std::vector<ExperimentResult> convergence_sweep(const ExperimentConfig& base,
                                                       std::vector<int> boundary_totals) {
    if (boundary_totals.size() < 2)
        throw std::invalid_argument("convergence sweep needs at least 2 boundary knot counts");
    std::sort(boundary_totals.begin(), boundary_totals.end());
    std::vector<ExperimentResult> out;
    for (int total : boundary_totals) {
        ExperimentConfig cfg = base;
        cfg.boundary_counts.clear();
        cfg.boundary_total = total;
        out.push_back(run(cfg));
    }
    return out;
}

inline const char* scheme_name(Scheme s) { return s == Scheme::Unsymmetric ? "unsym" : "sym"; }

inline constexpr const char* kCsvHeader =
    "problem,scheme,L_D,L_N,N_inner,M_eval,seed,l2_rel_err,max_err,cond_est,wall_ms";

// CSV with 6-significant-digit scientific notation for real columns.
inline void write_csv(std::ostream& os, const std::vector<ExperimentResult>& rows) {
    os << kCsvHeader << '\n';
    char buf[160];
    for (const ExperimentResult& r : rows) {
        std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%zu,%llu,%.5e,%.5e,%.5e,%.5e",
                      r.dirichlet_count, r.neumann_count, r.inner_count, r.eval_count,
                      static_cast<unsigned long long>(r.seed), r.l2_rel_err, r.max_err, r.cond_est,
                      r.wall_ms);
        os << r.problem << ',' << scheme_name(r.scheme) << ',' << buf << '\n';
    }
}

}  // namespace bkm
