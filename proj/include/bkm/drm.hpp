#pragma once

// Dual reciprocity particular solutions. The source term f is interpolated
// over all boundary + interior knots with the order-1 general solution as
// the radial basis; because applying the operator to the order-(m+1)
// general solution yields the order-m one, the particular solution is then
// the same expansion with the order-2 kernel:
//
//   f(x)  ~ sum_j lambda_j u_1^#(|x - x_j|)
//   u_p(x) = sum_j lambda_j u_2^#(|x - x_j|)
//
// so that (Laplacian +/- param^2) u_p reproduces the interpolant of f.
//
// Interpolation with an analytic radial basis is exponentially
// ill-conditioned: at realistic center counts the true coefficients need
// more than the ~16 digits a double carries, and a double-rounded lambda
// cannot reproduce f at the centers to better than roughly
// ||lambda||_1 * eps. The fit therefore factors and solves the system in
// double-double arithmetic, keeps the extended coefficients alongside the
// rounded ones, and evaluates u_p against the extended set, so the
// interpolation residual and the operator identity above hold to far
// below the rounded coefficients' noise floor.

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "bkm/detail/extended.hpp"
#include "bkm/kernels.hpp"
#include "bkm/linalg.hpp"
#include "bkm/point.hpp"

namespace bkm {

struct DrmExpansion {
    std::vector<double> lambda;
    std::vector<Point> centers;
    KernelSpec phi_spec;  // interpolation kernel (General, order m)
    KernelSpec u_p_spec;  // particular-solution kernel (General, order m+1)
    // Double-double coefficients from fit(); lambda is their rounding.
    // When present, particular_solution() sums against these so the
    // expansion reproduces f at the centers to well below double rounding.
    std::vector<detail::dd> lambda_extended;
};

namespace drm_detail {

inline void check_centers(const std::vector<Point>& centers) {
    for (std::size_t i = 0; i < centers.size(); ++i)
        for (std::size_t j = i + 1; j < centers.size(); ++j)
            if (dist(centers[i], centers[j]) <= 1e-12)
                throw std::runtime_error("drm: duplicate centers at index " + std::to_string(i) +
                                         " and " + std::to_string(j));
}

inline void check_phi(const KernelSpec& phi_spec) {
    if (phi_spec.family != KernelFamily::General)
        throw std::invalid_argument("drm: interpolation kernel must be a General (nonsingular) solution");
}

}  // namespace drm_detail

// Symmetric interpolation matrix A(i,j) = phi(|x_i - x_j|).
inline Matrix assemble_interpolation_matrix(const std::vector<Point>& centers,
                                            const KernelSpec& phi_spec) {
    drm_detail::check_phi(phi_spec);
    drm_detail::check_centers(centers);
    const std::size_t n = centers.size();
    Matrix a(n, n);
    const double diag = general_solution(phi_spec, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = diag;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = general_solution(phi_spec, dist(centers[i], centers[j]));
            a(i, j) = v;
            a(j, i) = v;
        }
    }
    return a;
}

namespace drm_detail {

// 1-norm condition estimate of the interpolation matrix from its extended
// factorization (Hager's power iteration on ||A^{-1}||_1; A is symmetric,
// so no transpose solves are needed).
inline double condition_estimate_extended(const Matrix& a, const std::vector<detail::dd>& lu,
                                          const std::vector<std::size_t>& piv) {
    const std::size_t n = piv.size();
    double anorm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) c += std::fabs(a(i, j));
        anorm = std::max(anorm, c);
    }
    std::vector<detail::dd> x(n, detail::dd(1.0 / static_cast<double>(n)));
    double est = 0.0;
    std::size_t last = n;  // unit-vector index of the previous iterate
    for (int pass = 0; pass < 5; ++pass) {
        detail::dd_lu_backsolve(lu, piv, x);
        double norm1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) norm1 += std::fabs(detail::to_double(x[i]));
        if (norm1 <= est) break;
        est = norm1;
        for (std::size_t i = 0; i < n; ++i)
            x[i] = detail::dd(detail::to_double(x[i]) < 0.0 ? -1.0 : 1.0);
        detail::dd_lu_backsolve(lu, piv, x);
        std::size_t jmax = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::fabs(detail::to_double(x[i])) > std::fabs(detail::to_double(x[jmax]))) jmax = i;
        if (jmax == last) break;
        last = jmax;
        for (std::size_t i = 0; i < n; ++i) x[i] = detail::dd(i == jmax ? 1.0 : 0.0);
    }
    return anorm * est;
}

[[noreturn]] inline void throw_near_singular(double estimate) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", estimate);
    throw std::runtime_error(
        std::string("drm fit: interpolation matrix is near-singular, condition estimate ") + buf);
}

}  // namespace drm_detail

// Solve A_phi lambda = f by dense LU with partial pivoting, carried in
// double-double arithmetic. Fails when the matrix is within three decimal
// digits of singularity at that working precision (eps = 2^-104).
inline DrmExpansion fit(const std::vector<double>& f_values, const std::vector<Point>& centers,
                        const KernelSpec& phi_spec) {
    if (f_values.size() != centers.size())
        throw std::invalid_argument("drm fit: f_values length must match the number of centers");
    if (centers.empty()) throw std::invalid_argument("drm fit: need at least one center");
    Matrix a = assemble_interpolation_matrix(centers, phi_spec);
    const std::size_t n = centers.size();

    std::vector<detail::dd> lu(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) lu[i * n + j] = detail::dd(a(i, j));
    std::vector<std::size_t> piv(n);
    if (!detail::dd_lu_factor(lu, piv))
        drm_detail::throw_near_singular(std::numeric_limits<double>::infinity());

    const double cond = drm_detail::condition_estimate_extended(a, lu, piv);
    const double limit = 1.0 / (std::ldexp(1.0, -104) * 1e3);  // working-precision epsilon
    if (cond > limit) drm_detail::throw_near_singular(cond);

    DrmExpansion e;
    e.lambda_extended.resize(n);
    for (std::size_t i = 0; i < n; ++i) e.lambda_extended[i] = detail::dd(f_values[i]);
    detail::dd_lu_backsolve(lu, piv, e.lambda_extended);
    e.lambda.resize(n);
    for (std::size_t i = 0; i < n; ++i) e.lambda[i] = detail::to_double(e.lambda_extended[i]);
    e.centers = centers;
    e.phi_spec = phi_spec;
    e.u_p_spec = phi_spec;
    e.u_p_spec.order = phi_spec.order + 1;
    return e;
}

// u_p(x) = sum_j lambda_j u_{m+1}^#(|x - x_j|). Fitted expansions carry
// extended coefficients whose magnitudes can dwarf the sum; accumulating
// in double-double keeps the cancellation exact.
inline double particular_solution(const DrmExpansion& e, const Point& x) {
    if (!e.lambda_extended.empty()) {
        detail::dd s(0.0);
        for (std::size_t j = 0; j < e.lambda_extended.size(); ++j)
            s = detail::add(s, detail::mul(e.lambda_extended[j],
                                           detail::dd_general_solution(
                                               e.u_p_spec, detail::dd_dist(x, e.centers[j]))));
        return detail::to_double(s);
    }
    double s = 0.0;
    for (std::size_t j = 0; j < e.lambda.size(); ++j)
        s += e.lambda[j] * general_solution(e.u_p_spec, dist(x, e.centers[j]));
    return s;
}

// d u_p / dn at x.
inline double particular_normal_derivative(const DrmExpansion& e, const Point& x, const Point& n) {
    if (!e.lambda_extended.empty()) {
        detail::dd s(0.0);
        for (std::size_t j = 0; j < e.lambda_extended.size(); ++j)
            s = detail::add(s, detail::mul(e.lambda_extended[j],
                                           detail::dd_normal_derivative_field(e.u_p_spec, x, n,
                                                                              e.centers[j])));
        return detail::to_double(s);
    }
    double s = 0.0;
    for (std::size_t j = 0; j < e.lambda.size(); ++j)
        s += e.lambda[j] * normal_derivative_field(e.u_p_spec, x, n, e.centers[j]);
    return s;
}

}  // namespace bkm
