// Benchmark test problems: operators, exact solutions with analytic
// gradients, and analytically derived source terms, each paired with its
// default domain. The source terms are re-verified against a
// finite-difference application of the operator every time the builtin
// list is constructed, so a definition that drifts out of sync with its
// exact solution fails loudly.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "bkm/geometry.hpp"
#include "bkm/kernels.hpp"
#include "bkm/point.hpp"

namespace bkm {

struct TestProblem {
    std::string name;
    OperatorSpec op;
    DomainSpec domain;
    std::function<double(const Point&)> exact_solution;
    std::function<Point(const Point&)> exact_gradient;
    std::function<double(const Point&)> source_term;
};

// Worst relative deviation between source_term and the finite-difference
// application of the operator to exact_solution, sampled at `samples`
// random interior points. Relative to max(1, |f|) so homogeneous cases
// degrade to an absolute check.
inline double source_consistency_error(const TestProblem& p, int samples = 10,
                                       std::uint64_t seed = 12345) {
    std::mt19937_64 rng(seed);
    const DomainSpec& d = p.domain;
    const double h = 1e-4;
    double worst = 0.0;
    int found = 0, guard = 0;
    while (found < samples) {
        if (++guard > 100000)
            throw std::runtime_error("source check: cannot sample interior points of domain");
        Point q{d.outer_min.x + geo_detail::uniform01(rng) * (d.outer_max.x - d.outer_min.x),
                d.outer_min.y + geo_detail::uniform01(rng) * (d.outer_max.y - d.outer_min.y), 0.0};
        if (d.dim() == 3)
            q.z = d.outer_min.z + geo_detail::uniform01(rng) * (d.outer_max.z - d.outer_min.z);
        if (!point_in_domain(d, q)) continue;
        ++found;
        double lap = 0.0;
        for (int axis = 0; axis < d.dim(); ++axis) {
            Point lo = q, hi = q;
            (axis == 0 ? lo.x : axis == 1 ? lo.y : lo.z) -= h;
            (axis == 0 ? hi.x : axis == 1 ? hi.y : hi.z) += h;
            lap += (p.exact_solution(hi) - 2.0 * p.exact_solution(q) + p.exact_solution(lo)) / (h * h);
        }
        const double sign = p.op.kind == OperatorKind::Helmholtz ? 1.0 : -1.0;
        const double applied = lap + sign * p.op.param * p.op.param * p.exact_solution(q);
        const double f = p.source_term(q);
        worst = std::max(worst, std::fabs(applied - f) / std::max(1.0, std::fabs(f)));
    }
    return worst;
}

namespace problem_detail {

inline TestProblem make_helmholtz2d_inhom() {
    TestProblem p;
    p.name = "helmholtz2d_inhom";
    p.op = OperatorSpec{OperatorKind::Helmholtz, std::sqrt(2.0), 2};
    p.domain.variant = DomainVariant::Rect2DWithEllipseHole;
    p.exact_solution = [](const Point& q) { return q.x * q.x * std::sin(q.x) * std::cos(q.y); };
    p.exact_gradient = [](const Point& q) {
        return Point{(2.0 * q.x * std::sin(q.x) + q.x * q.x * std::cos(q.x)) * std::cos(q.y),
                     -q.x * q.x * std::sin(q.x) * std::sin(q.y), 0.0};
    };
    p.source_term = [](const Point& q) {
        return (2.0 * std::sin(q.x) + 4.0 * q.x * std::cos(q.x)) * std::cos(q.y);
    };
    return p;
}

inline TestProblem make_helmholtz3d_hom() {
    TestProblem p;
    p.name = "helmholtz3d_hom";
    p.op = OperatorSpec{OperatorKind::Helmholtz, std::sqrt(3.0), 3};
    p.domain.variant = DomainVariant::Cube3DWithPeanutCavity;
    p.exact_solution = [](const Point& q) { return std::sin(q.x) * std::cos(q.y) * std::cos(q.z); };
    p.exact_gradient = [](const Point& q) {
        return Point{std::cos(q.x) * std::cos(q.y) * std::cos(q.z),
                     -std::sin(q.x) * std::sin(q.y) * std::cos(q.z),
                     -std::sin(q.x) * std::cos(q.y) * std::sin(q.z)};
    };
    p.source_term = [](const Point&) { return 0.0; };
    return p;
}

}  // namespace problem_detail

// Diffusion-reaction problem with exact solution e^{-d(x+y)} and
// independent decay rate d and reaction parameter tau. With tau = d*sqrt(2)
// the source q = (2d^2 - tau^2) e^{-d(x+y)} vanishes analytically, but it
// is still evaluated through the full formula so the near-zero source path
// of the particular-solution machinery is exercised rather than bypassed.
inline TestProblem make_diffusion_reaction2d(double d, double tau, const std::string& name) {
    TestProblem p;
    p.name = name;
    p.op = OperatorSpec{OperatorKind::ModifiedHelmholtz, tau, 2};
    p.domain.variant = DomainVariant::Rect2DWithEllipseHole;
    p.exact_solution = [d](const Point& q) { return std::exp(-d * (q.x + q.y)); };
    p.exact_gradient = [d](const Point& q) {
        const double u = std::exp(-d * (q.x + q.y));
        return Point{-d * u, -d * u, 0.0};
    };
    p.source_term = [d, tau](const Point& q) {
        return (2.0 * d * d - tau * tau) * std::exp(-d * (q.x + q.y));
    };
    return p;
}

// The four benchmark problems. Construction cross-checks every source
// term against the finite-difference operator residual and refuses to
// hand out an inconsistent definition.
inline std::vector<TestProblem> builtin_problems() {
    std::vector<TestProblem> out;
    out.push_back(problem_detail::make_helmholtz2d_inhom());
    out.push_back(problem_detail::make_helmholtz3d_hom());
    out.push_back(make_diffusion_reaction2d(1.0, std::sqrt(2.0), "diffreact2d_d1"));
    out.push_back(make_diffusion_reaction2d(5.0, 5.0 * std::sqrt(2.0), "diffreact2d_d5"));
    for (const TestProblem& p : out) {
        const double err = source_consistency_error(p);
        if (!(err <= 1e-4))
            throw std::logic_error("problem " + p.name +
                                   " source term inconsistent with its exact solution (residual " +
                                   std::to_string(err) + ")");
    }
    return out;
}

inline TestProblem find_problem(const std::string& name) {
    std::vector<TestProblem> all = builtin_problems();
    for (TestProblem& p : all)
        if (p.name == name) return std::move(p);
    std::string known;
    for (const TestProblem& p : all) known += (known.empty() ? "" : ", ") + p.name;
    throw std::invalid_argument("unknown problem '" + name + "' (known: " + known + ")");
}

// Fill bc_value on each knot from the exact solution (Dirichlet) or the
// normal component of its gradient (Neumann).
inline void apply_boundary_conditions(const TestProblem& p, std::vector<BoundaryKnot>& knots) {
    for (BoundaryKnot& k : knots)
        k.bc_value = k.bc_kind == BcKind::Dirichlet
                         ? p.exact_solution(k.position)
                         : dot(p.exact_gradient(k.position), k.normal);
}

}  // namespace bkm
