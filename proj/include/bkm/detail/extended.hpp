// Extended-precision (double-double) kernel evaluation and dense solve
// support for the ill-conditioned interpolation systems the method builds.
//
// Both the collocation matrix and the dual-reciprocity interpolation
// matrix are notoriously ill-conditioned: their exact solutions have
// coefficient norms that overflow the ~16 significant digits a double can
// carry long before the approximated field itself stops improving.
// Carrying the assembly, factorization, and summation in double-double
// arithmetic (~32 digits) lets the computed field track the method's true
// convergence instead of flooring many orders of magnitude earlier. The
// kernels are evaluated by their ascending series, which converge quickly
// and — for the oscillatory Helmholtz family — lose no more than ~e^{z}
// worth of digits, harmless in double-double over the argument ranges the
// solver admits on this path.
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "double_double.hpp"
#include "../kernels.hpp"
#include "../point.hpp"

namespace bkm::detail {

inline dd dd_sqrt(const dd& a) {
    if (a.hi <= 0.0) return dd(0.0);
    // One Newton step on top of the double sqrt reaches full dd accuracy.
    double s = std::sqrt(a.hi);
    dd e = sub(a, mul(dd(s), dd(s)));
    return add(dd(s), div(e, dd(2.0 * s)));
}

inline dd dd_dist(const Point& a, const Point& b) {
    dd dx = two_sum(a.x, -b.x);
    dd dy = two_sum(a.y, -b.y);
    dd dz = two_sum(a.z, -b.z);
    dd s = add(add(mul(dx, dx), mul(dy, dy)), mul(dz, dz));
    return dd_sqrt(s);
}

// v_nu(z) = z^{-nu} C_nu(z) by the ascending series
//
//   v_nu(z) = sum_k s^k (z^2/4)^k c_k,   c_0 = 2^{-nu} / Gamma(nu + 1),
//   c_k = c_{k-1} / (k (nu + k)),        s = -1 for J, +1 for I,
//
// which handles integer nu (dim 2) and half-integer nu (dim 3) alike; c_0
// comes from an exact product form in both cases.
inline dd dd_scaled_bessel_series(double nu, const dd& z, bool oscillatory) {
    const int whole = static_cast<int>(nu);
    dd c0(1.0);
    if (nu == static_cast<double>(whole)) {
        for (int j = 1; j <= whole; ++j) c0 = div(c0, dd(2.0 * j));
    } else {
        c0 = dd_sqrt(div(dd(2.0), dd_pi));
        for (int j = 0; j <= whole; ++j) c0 = div(c0, dd(2.0 * j + 1.0));
    }
    const dd q = div(mul(z, z), dd(4.0));
    dd term = c0, v = c0;
    for (int k = 1; k < 400; ++k) {
        term = div(mul(term, q), dd(static_cast<double>(k) * (nu + static_cast<double>(k))));
        if (oscillatory) term = neg(term);
        v = add(v, term);
        if (std::fabs(term.hi) < 1e-35 * std::fabs(v.hi)) break;
    }
    return v;
}

// Kernel value and radial derivatives of the order-m general solution in
// double-double, mirroring radial_derivatives(): with z = p r and
// nu = dim/2 - 1 + m,
//
//   g        = A_m z^{2m} v_nu(z)
//   g1/r     = A_m p^2 (2m z^{2m-2} v_nu + sigma z^{2m} v_{nu+1})
//   g2       = A_m p^2 (2m(2m-1) z^{2m-2} v_nu
//              + sigma (4m+1) z^{2m} v_{nu+1} + z^{2m+2} v_{nu+2})
//
// with sigma = +1 for I and -1 for J, A_m = scale / (2^m m! p^{2m}).
struct DdRadialDerivatives {
    dd g;
    dd g1_over_r;
    dd g2;
};

inline DdRadialDerivatives dd_radial_derivatives(const KernelSpec& ks, const dd& r) {
    const int m = ks.order;
    const double p = ks.op.param;
    const bool oscillatory = ks.op.kind == OperatorKind::Helmholtz;
    const double nu = 0.5 * ks.op.dim - 1.0 + m;
    const dd z = mul(r, dd(p));
    const dd z2 = mul(z, z);

    const dd v0 = dd_scaled_bessel_series(nu, z, oscillatory);
    const dd v1 = dd_scaled_bessel_series(nu + 1.0, z, oscillatory);
    const dd v2 = dd_scaled_bessel_series(nu + 2.0, z, oscillatory);

    dd a(ks.scale);
    const dd p2 = mul(dd(p), dd(p));
    for (int j = 1; j <= m; ++j) a = div(a, mul(dd(2.0 * j), p2));
    const dd ap2 = mul(a, p2);

    dd zpow(1.0);  // z^{2m}
    for (int j = 0; j < m; ++j) zpow = mul(zpow, z2);
    const double tm = 2.0 * m;
    // z^{2m-2} v_nu arises only multiplied by 2m, so guard out m = 0.
    dd lower(0.0);
    if (m > 0) {
        lower = v0;
        for (int j = 0; j < m - 1; ++j) lower = mul(lower, z2);
    }

    const dd sv1 = oscillatory ? neg(v1) : v1;
    DdRadialDerivatives d;
    d.g = mul(a, mul(zpow, v0));
    d.g1_over_r = mul(ap2, add(mul(lower, dd(tm)), mul(zpow, sv1)));
    d.g2 = mul(ap2, add(add(mul(lower, dd(tm * (tm - 1.0))), mul(mul(zpow, sv1), dd(2.0 * tm + 1.0))),
                        mul(mul(zpow, z2), v2)));
    return d;
}

inline dd dd_general_solution(const KernelSpec& ks, const dd& r) {
    return dd_radial_derivatives(ks, r).g;
}

// dd difference vector a - b, exact per component.
struct DdVec {
    dd x, y, z;
};

inline DdVec dd_diff(const Point& a, const Point& b) {
    return {two_sum(a.x, -b.x), two_sum(a.y, -b.y), two_sum(a.z, -b.z)};
}

inline dd dd_dot(const DdVec& a, const Point& b) {
    return add(add(mul(a.x, b.x), mul(a.y, b.y)), mul(a.z, b.z));
}

inline dd dd_norm(const DdVec& a) {
    return dd_sqrt(add(add(mul(a.x, a.x), mul(a.y, a.y)), mul(a.z, a.z)));
}

// d/dn_field [ g(|x_field - x_src|) ] = (g1/r) ((x_field - x_src) . n_field).
inline dd dd_normal_derivative_field(const KernelSpec& ks, const Point& x_field, const Point& n_field,
                                     const Point& x_src) {
    const DdVec d = dd_diff(x_field, x_src);
    return mul(dd_radial_derivatives(ks, dd_norm(d)).g1_over_r, dd_dot(d, n_field));
}

// d/dn_src [ g(|x_field - x_src|) ] = (g1/r) ((x_src - x_field) . n_src).
inline dd dd_normal_derivative_source(const KernelSpec& ks, const Point& x_field, const Point& x_src,
                                      const Point& n_src) {
    const DdVec d = dd_diff(x_src, x_field);
    return mul(dd_radial_derivatives(ks, dd_norm(d)).g1_over_r, dd_dot(d, n_src));
}

// n_field^T H n_src with H the mixed Hessian of g(|x_field - x_src|):
// -g2 c_f c_s - (g1/r)(n_field . n_src - c_f c_s), with the finite
// coincident-point limit -(g1/r)(0) (n_field . n_src).
inline dd dd_mixed_normal_second_derivative(const KernelSpec& ks, const Point& x_field,
                                            const Point& n_field, const Point& x_src,
                                            const Point& n_src) {
    const DdVec d = dd_diff(x_field, x_src);
    const dd r = dd_norm(d);
    const DdRadialDerivatives rd = dd_radial_derivatives(ks, r);
    const dd nn = dd(dot(n_field, n_src));
    if (r.hi == 0.0) return neg(mul(rd.g1_over_r, nn));
    const dd cf = div(dd_dot(d, n_field), r);
    const dd cs = div(dd_dot(d, n_src), r);
    const dd cfcs = mul(cf, cs);
    return sub(neg(mul(rd.g2, cfcs)), mul(rd.g1_over_r, sub(nn, cfcs)));
}

// LU factorization with partial pivoting, in place. `a` is row-major
// n x n; `piv` receives the row swaps. Returns false if a pivot collapses
// to zero.
inline bool dd_lu_factor(std::vector<dd>& a, std::vector<std::size_t>& piv) {
    const std::size_t n = piv.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::fabs(a[k * n + k].hi);
        for (std::size_t i = k + 1; i < n; ++i) {
            double cand = std::fabs(a[i * n + k].hi);
            if (cand > best) { best = cand; p = i; }
        }
        if (best <= 1e-300) return false;
        piv[k] = p;
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
        for (std::size_t i = k + 1; i < n; ++i) {
            dd m = div(a[i * n + k], a[k * n + k]);
            a[i * n + k] = m;
            for (std::size_t j = k + 1; j < n; ++j)
                a[i * n + j] = sub(a[i * n + j], mul(m, a[k * n + j]));
        }
    }
    return true;
}

// Back-substitution against a factorization from dd_lu_factor; `b` is
// overwritten with the solution.
inline void dd_lu_backsolve(const std::vector<dd>& a, const std::vector<std::size_t>& piv,
                            std::vector<dd>& b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k)
        if (piv[k] != k) std::swap(b[k], b[piv[k]]);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = k + 1; i < n; ++i)
            b[i] = sub(b[i], mul(a[i * n + k], b[k]));
    for (std::size_t k = n; k-- > 0;) {
        for (std::size_t j = k + 1; j < n; ++j)
            b[k] = sub(b[k], mul(a[k * n + j], b[j]));
        b[k] = div(b[k], a[k * n + k]);
    }
}

// Solve the dense system in place with partial pivoting. `a` is row-major
// n x n, `b` length n; on return `b` holds the solution. Returns false if
// a pivot collapses to zero.
inline bool dd_lu_solve_inplace(std::vector<dd>& a, std::vector<dd>& b) {
    std::vector<std::size_t> piv(b.size());
    if (!dd_lu_factor(a, piv)) return false;
    dd_lu_backsolve(a, piv, b);
    return true;
}

}  // namespace bkm::detail
