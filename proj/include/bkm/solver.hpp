#pragma once

// Boundary-knot collocation systems for the homogeneous part u_h, in two
// flavors:
//
//  - Unsymmetric: u_h(x) = sum_k alpha_k u_0^#(|x - x_k|) over all L
//    boundary knots; Dirichlet rows collocate values, Neumann rows normal
//    derivatives.
//
//  - Symmetric (Hermite-style): Dirichlet knots contribute plain kernel
//    terms and Neumann knots contribute source-normal derivative terms,
//      u_h(x) = sum_{s in D} a_s u_0^#(r_s)
//             + sum_{s in N} a_s d u_0^#(r_s) / dn_s,
//    which makes the collocation matrix exactly symmetric: the (D,N) block
//    is the transpose of (N,D) because differentiating the radial kernel
//    in the source point and projecting on n_s equals the field-point
//    derivative seen from the other knot, and the (N,N) block is the mixed
//    second derivative, symmetric under exchange of the two knots. (With
//    the opposite sign on the Neumann basis the off-diagonal blocks come
//    out antisymmetric instead; the sign here is forced by requiring
//    symmetry, and only flips the sign of the Neumann coefficients, not
//    the represented field.)
//
// The boundary data on the right-hand side is pre-corrected by the
// particular solution: R - u_p on Dirichlet rows, N - du_p/dn on Neumann
// rows.
//
// Systems with moderate kernel arguments are additionally assembled and
// solved in double-double precision (see BkmSolution::alpha_extended):
// the collocation matrix is so ill-conditioned that its exact coefficient
// vector does not fit in double significant digits, which otherwise
// floors the achievable field accuracy near 1e-7 no matter how many knots
// are used.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bkm/detail/extended.hpp"
#include "bkm/drm.hpp"
#include "bkm/geometry.hpp"
#include "bkm/kernels.hpp"
#include "bkm/linalg.hpp"
#include "bkm/point.hpp"

namespace bkm {

enum class Scheme { Unsymmetric, Symmetric };

// Assembled collocation system. dirichlet_count records the block split of
// the knot ordering (Dirichlet rows/columns first).
struct DenseSystem {
    Matrix matrix;
    std::vector<double> rhs;
    std::size_t dirichlet_count = 0;
};

struct BkmSolution {
    std::vector<double> alpha;
    Scheme scheme = Scheme::Unsymmetric;
    KernelSpec kernel;  // General, order 0
    std::vector<BoundaryKnot> knots;
    std::optional<DrmExpansion> particular;
    double condition_estimate = 0.0;
    // Double-double repeat of the homogeneous solve: the exact coefficient
    // vector of these ill-conditioned systems needs more significant
    // digits than a double carries, so a double alpha floors the field
    // error near 1e-7 regardless of knot count. evaluate() prefers this
    // vector when present; alpha above remains the double-precision
    // solution.
    std::vector<detail::dd> alpha_extended;
};

namespace solver_detail {

inline void check_knots(const std::vector<BoundaryKnot>& knots) {
    if (knots.empty()) throw std::invalid_argument("assemble: need at least one boundary knot");
    for (std::size_t i = 0; i < knots.size(); ++i)
        for (std::size_t j = i + 1; j < knots.size(); ++j)
            if (dist(knots[i].position, knots[j].position) <= 1e-12)
                throw std::runtime_error("assemble: coincident boundary knots at index " +
                                         std::to_string(i) + " and " + std::to_string(j));
}

inline std::size_t dirichlet_block(const std::vector<BoundaryKnot>& knots) {
    std::size_t c = 0;
    while (c < knots.size() && knots[c].bc_kind == BcKind::Dirichlet) ++c;
    for (std::size_t i = c; i < knots.size(); ++i)
        if (knots[i].bc_kind == BcKind::Dirichlet)
            throw std::invalid_argument("assemble: knots must be ordered Dirichlet block first");
    return c;
}

inline double rhs_entry(const BoundaryKnot& k, const DrmExpansion* u_p) {
    if (!u_p) return k.bc_value;
    if (k.bc_kind == BcKind::Dirichlet) return k.bc_value - particular_solution(*u_p, k.position);
    return k.bc_value - particular_normal_derivative(*u_p, k.position, k.normal);
}

// The extended-precision solve covers systems whose largest kernel
// argument keeps the ascending Bessel series fully accurate in
// double-double (the oscillatory series loses ~e^{z} worth of digits to
// cancellation).
inline bool extended_eligible(const KnotSet& knots, const OperatorSpec& op) {
    double dmax = 0.0;
    for (std::size_t i = 0; i < knots.boundary.size(); ++i)
        for (std::size_t j = i + 1; j < knots.boundary.size(); ++j)
            dmax = std::max(dmax, dist(knots.boundary[i].position, knots.boundary[j].position));
    return op.param * dmax <= 25.0;
}

inline detail::dd kernel_value_dd(const KernelSpec& ks, const Point& a, const Point& b) {
    return detail::dd_general_solution(ks, detail::dd_dist(a, b));
}

// One entry of the extended collocation matrix, mirroring the double
// assembly of the given scheme entry for entry.
inline detail::dd matrix_entry_dd(const KernelSpec& ks, Scheme scheme, const BoundaryKnot& row,
                                  bool row_dirichlet, const BoundaryKnot& col, bool col_dirichlet) {
    if (scheme == Scheme::Unsymmetric)
        return row_dirichlet ? kernel_value_dd(ks, row.position, col.position)
                             : detail::dd_normal_derivative_field(ks, row.position, row.normal,
                                                                  col.position);
    if (row_dirichlet && col_dirichlet) return kernel_value_dd(ks, row.position, col.position);
    if (row_dirichlet)
        return detail::dd_normal_derivative_source(ks, row.position, col.position, col.normal);
    if (col_dirichlet)
        return detail::dd_normal_derivative_field(ks, row.position, row.normal, col.position);
    return detail::dd_mixed_normal_second_derivative(ks, row.position, row.normal, col.position,
                                                     col.normal);
}

}  // namespace solver_detail

inline DenseSystem assemble_unsymmetric(const KnotSet& knots, const OperatorSpec& op,
                                        const DrmExpansion* u_p = nullptr, double kernel_scale = 1.0) {
    solver_detail::check_knots(knots.boundary);
    const KernelSpec ks{op, 0, KernelFamily::General, kernel_scale};
    const std::size_t l = knots.boundary.size();
    DenseSystem sys{Matrix(l, l), std::vector<double>(l), solver_detail::dirichlet_block(knots.boundary)};
    for (std::size_t i = 0; i < l; ++i) {
        const BoundaryKnot& row = knots.boundary[i];
        for (std::size_t k = 0; k < l; ++k) {
            const BoundaryKnot& col = knots.boundary[k];
            sys.matrix(i, k) =
                row.bc_kind == BcKind::Dirichlet
                    ? general_solution(ks, dist(row.position, col.position))
                    : normal_derivative_field(ks, row.position, row.normal, col.position);
        }
        sys.rhs[i] = solver_detail::rhs_entry(row, u_p);
    }
    return sys;
}

inline DenseSystem assemble_symmetric(const KnotSet& knots, const OperatorSpec& op,
                                      const DrmExpansion* u_p = nullptr, double kernel_scale = 1.0) {
    solver_detail::check_knots(knots.boundary);
    const KernelSpec ks{op, 0, KernelFamily::General, kernel_scale};
    const std::size_t l = knots.boundary.size();
    const std::size_t ld = solver_detail::dirichlet_block(knots.boundary);
    DenseSystem sys{Matrix(l, l), std::vector<double>(l), ld};
    for (std::size_t i = 0; i < l; ++i) {
        const BoundaryKnot& row = knots.boundary[i];
        const bool row_d = i < ld;
        for (std::size_t s = 0; s < l; ++s) {
            const BoundaryKnot& col = knots.boundary[s];
            const bool col_d = s < ld;
            double v;
            if (row_d && col_d)
                v = general_solution(ks, dist(row.position, col.position));
            else if (row_d && !col_d)
                v = normal_derivative_source(ks, row.position, col.position, col.normal);
            else if (!row_d && col_d)
                v = normal_derivative_field(ks, row.position, row.normal, col.position);
            else
                v = mixed_normal_second_derivative(ks, row.position, row.normal, col.position,
                                                   col.normal);
            sys.matrix(i, s) = v;
        }
        sys.rhs[i] = solver_detail::rhs_entry(row, u_p);
    }
    return sys;
}

struct SolveResult {
    std::vector<double> alpha;
    double condition_estimate = 0.0;
};

inline SolveResult solve(const DenseSystem& sys) {
    LuDecomposition lu(sys.matrix);
    SolveResult r;
    r.alpha = lu.solve(sys.rhs);
    r.condition_estimate = lu.condition_estimate();
    return r;
}

// Full field u(x) = u_h(x) + u_p(x).
inline double evaluate(const BkmSolution& sol, const Point& x) {
    if (!sol.alpha_extended.empty()) {
        // Extended-precision coefficients are meaningful only when the
        // kernel sum is also accumulated in double-double: their norm can
        // exceed 1e16, so rounding either factor to double first would
        // forfeit the extra digits.
        const std::size_t ld = sol.scheme == Scheme::Symmetric
                                   ? solver_detail::dirichlet_block(sol.knots)
                                   : sol.knots.size();
        detail::dd s(0.0);
        for (std::size_t k = 0; k < sol.knots.size(); ++k) {
            const BoundaryKnot& knot = sol.knots[k];
            const detail::dd basis =
                k < ld ? solver_detail::kernel_value_dd(sol.kernel, x, knot.position)
                       : detail::dd_normal_derivative_source(sol.kernel, x, knot.position,
                                                             knot.normal);
            s = detail::add(s, detail::mul(sol.alpha_extended[k], basis));
        }
        double out = detail::to_double(s);
        if (sol.particular) out += particular_solution(*sol.particular, x);
        return out;
    }
    double s = 0.0;
    const std::size_t ld =
        sol.scheme == Scheme::Symmetric ? solver_detail::dirichlet_block(sol.knots) : sol.knots.size();
    for (std::size_t k = 0; k < sol.knots.size(); ++k) {
        const BoundaryKnot& knot = sol.knots[k];
        if (k < ld)
            s += sol.alpha[k] * general_solution(sol.kernel, dist(x, knot.position));
        else
            s += sol.alpha[k] * normal_derivative_source(sol.kernel, x, knot.position, knot.normal);
    }
    if (sol.particular) s += particular_solution(*sol.particular, x);
    return s;
}

// du/dn at x along the unit direction n.
inline double evaluate_normal_derivative(const BkmSolution& sol, const Point& x, const Point& n) {
    double s = 0.0;
    const std::size_t ld =
        sol.scheme == Scheme::Symmetric ? solver_detail::dirichlet_block(sol.knots) : sol.knots.size();
    for (std::size_t k = 0; k < sol.knots.size(); ++k) {
        const BoundaryKnot& knot = sol.knots[k];
        if (k < ld)
            s += sol.alpha[k] * normal_derivative_field(sol.kernel, x, n, knot.position);
        else
            s += sol.alpha[k] *
                 mixed_normal_second_derivative(sol.kernel, x, n, knot.position, knot.normal);
    }
    if (sol.particular) s += particular_normal_derivative(*sol.particular, x, n);
    return s;
}

// Assemble + solve + package, the common path for both schemes.
inline BkmSolution solve_bkm(const KnotSet& knots, const OperatorSpec& op, Scheme scheme,
                             const DrmExpansion* u_p = nullptr, double kernel_scale = 1.0) {
    DenseSystem sys = scheme == Scheme::Unsymmetric ? assemble_unsymmetric(knots, op, u_p, kernel_scale)
                                                    : assemble_symmetric(knots, op, u_p, kernel_scale);
    SolveResult r = solve(sys);
    BkmSolution sol;
    sol.alpha = std::move(r.alpha);
    sol.scheme = scheme;
    sol.kernel = KernelSpec{op, 0, KernelFamily::General, kernel_scale};
    sol.knots = knots.boundary;
    if (u_p) sol.particular = *u_p;
    sol.condition_estimate = r.condition_estimate;
    if (solver_detail::extended_eligible(knots, op)) {
        const std::size_t l = knots.boundary.size();
        const std::size_t ld = sys.dirichlet_count;
        std::vector<detail::dd> a(l * l), b(l);
        for (std::size_t i = 0; i < l; ++i) {
            for (std::size_t k = 0; k < l; ++k)
                a[i * l + k] = solver_detail::matrix_entry_dd(sol.kernel, scheme, knots.boundary[i],
                                                              i < ld, knots.boundary[k], k < ld);
            b[i] = detail::dd(sys.rhs[i]);
        }
        if (detail::dd_lu_solve_inplace(a, b)) sol.alpha_extended = std::move(b);
    }
    return sol;
}

}  // namespace bkm
