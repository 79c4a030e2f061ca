#pragma once

// Radial kernels of the Helmholtz and modified-Helmholtz operators: the
// nonsingular general solutions u_m^# and the singular fundamental
// solutions u_m^*, orders m >= 0, in dimensions 2 and 3, together with the
// closed-form radial and normal derivatives that boundary collocation
// needs.
//
// With p the operator parameter, z = p*r, and nu = n/2 - 1 + m, the order-m
// radial kernel is
//
//     g(r) = A_m * z^{2m} * v_nu(z),      v_nu(z) = z^{-nu} C_nu(z),
//
// where C is J (general, Helmholtz), I (general, modified Helmholtz),
// Y or K (fundamental counterparts), and A_m = A_{m-1} / (2 m p^2). The
// scaled form v_nu is smooth and even for J/I, which makes every general
// kernel and its derivatives finite at r = 0. Derivatives come from
// d/dz [v_nu(z)] = sigma * z * v_{nu+1}(z) with sigma = +1 for I and -1
// for J, Y, K.

#include <cmath>
#include <stdexcept>

#include "bkm/point.hpp"
#include "bkm/specfun.hpp"

namespace bkm {

enum class OperatorKind { Helmholtz, ModifiedHelmholtz };

// The PDE operator: Laplacian + param^2 (Helmholtz, param = gamma) or
// Laplacian - param^2 (modified Helmholtz, param = tau), in dim dimensions.
struct OperatorSpec {
    OperatorKind kind = OperatorKind::Helmholtz;
    double param = 1.0;
    int dim = 2;
};

enum class KernelFamily { General, Fundamental };

// One member of the kernel hierarchy: operator, order m, family, and the
// free constant A_0 (or B_0), which any positive value serves for since
// the expansion coefficients absorb it.
struct KernelSpec {
    OperatorSpec op;
    int order = 0;
    KernelFamily family = KernelFamily::General;
    double scale = 1.0;
};

namespace detail {

inline void validate(const OperatorSpec& op) {
    if (!(op.param > 0.0)) throw std::invalid_argument("OperatorSpec: param must be > 0");
    if (op.dim != 2 && op.dim != 3) throw std::invalid_argument("OperatorSpec: dim must be 2 or 3");
}

inline void validate(const KernelSpec& ks) {
    validate(ks.op);
    if (ks.order < 0) throw std::invalid_argument("KernelSpec: order must be >= 0");
    if (!(ks.scale > 0.0)) throw std::invalid_argument("KernelSpec: scale must be > 0");
}

// A_m = scale / (2^m m! p^{2m}).
inline double kernel_coefficient(const KernelSpec& ks) {
    double c = ks.scale;
    const double p2 = ks.op.param * ks.op.param;
    for (int j = 1; j <= ks.order; ++j) c /= 2.0 * static_cast<double>(j) * p2;
    return c;
}

inline BesselKind kernel_bessel_kind(const KernelSpec& ks) {
    const bool helm = ks.op.kind == OperatorKind::Helmholtz;
    if (ks.family == KernelFamily::General)
        return helm ? BesselKind::J : BesselKind::I;
    return helm ? BesselKind::Y : BesselKind::K;
}

}  // namespace detail

// Kernel value g and radial derivatives at one radius. g1_over_r carries
// g1(r)/r with its finite r -> 0 limit for general kernels; the normal
// derivative and mixed-Hessian formulas are built from it so they stay
// finite at coincident points.
struct RadialDerivatives {
    double g = 0.0;
    double g1 = 0.0;
    double g2 = 0.0;
    double g1_over_r = 0.0;
};

inline RadialDerivatives radial_derivatives(const KernelSpec& ks, double r) {
    detail::validate(ks);
    if (!(r >= 0.0)) throw std::domain_error("radial_derivatives: r must be >= 0");
    const bool fundamental = ks.family == KernelFamily::Fundamental;
    if (fundamental && r == 0.0)
        throw std::domain_error("radial_derivatives: fundamental kernel is singular at r = 0");

    const double p = ks.op.param;
    const double z = p * r;
    const int m = ks.order;
    const double nu = 0.5 * ks.op.dim - 1.0 + m;
    const BesselKind kind = detail::kernel_bessel_kind(ks);
    const double sigma = (kind == BesselKind::I) ? 1.0 : -1.0;
    const double a = detail::kernel_coefficient(ks);

    const double v0 = scaled_bessel(kind, nu, z);
    const double v1 = scaled_bessel(kind, nu + 1.0, z);
    const double v2 = scaled_bessel(kind, nu + 2.0, z);
    const double tm = 2.0 * m;

    // z^{2m}, z^{2m +/- 1}, z^{2m - 2}: the negative-exponent cases only
    // arise multiplied by the coefficient 2m = 0, so guard them out.
    const double z2m = std::pow(z, tm);
    RadialDerivatives d;
    d.g = a * z2m * v0;
    d.g1 = a * p * ((m > 0 ? tm * std::pow(z, tm - 1.0) * v0 : 0.0) + sigma * std::pow(z, tm + 1.0) * v1);
    const double lower = (m > 0) ? std::pow(z, tm - 2.0) * v0 : 0.0;
    d.g1_over_r = a * p * p * (tm * lower + sigma * z2m * v1);
    d.g2 = a * p * p *
           (tm * (tm - 1.0) * lower + sigma * (2.0 * tm + 1.0) * z2m * v1 + std::pow(z, tm + 2.0) * v2);
    return d;
}

// u_m^#(r): the nonsingular general solution, finite at r = 0.
inline double general_solution(const KernelSpec& ks, double r) {
    if (ks.family != KernelFamily::General)
        throw std::invalid_argument("general_solution: spec must have the General family");
    return radial_derivatives(ks, r).g;
}

// u_m^*(r): the singular fundamental solution, r > 0 only.
inline double fundamental_solution(const KernelSpec& ks, double r) {
    if (ks.family != KernelFamily::Fundamental)
        throw std::invalid_argument("fundamental_solution: spec must have the Fundamental family");
    return radial_derivatives(ks, r).g;
}

// d/dn_src [ g(|x_field - x_src|) ]: derivative in the source knot along
// the source normal. Equals g1(r) * ((x_src - x_field) . n_src) / r, which
// vanishes smoothly at coincident points.
inline double normal_derivative_source(const KernelSpec& ks, const Point& x_field, const Point& x_src,
                                       const Point& n_src) {
    const double r = dist(x_field, x_src);
    const RadialDerivatives d = radial_derivatives(ks, r);
    return d.g1_over_r * dot(x_src - x_field, n_src);
}

// d/dn_field [ g(|x_field - x_src|) ]: derivative in the field point along
// the field normal: g1(r) * ((x_field - x_src) . n_field) / r.
inline double normal_derivative_field(const KernelSpec& ks, const Point& x_field, const Point& n_field,
                                      const Point& x_src) {
    const double r = dist(x_field, x_src);
    const RadialDerivatives d = radial_derivatives(ks, r);
    return d.g1_over_r * dot(x_field - x_src, n_field);
}

// n_field^T H n_src with H the mixed Hessian of g(|x_field - x_src|),
// one derivative in each point:
//   -g2(r) c_f c_s - (g1(r)/r) (n_field . n_src - c_f c_s),
// c_f = ((x_field - x_src) . n_field)/r, c_s likewise. At r = 0 the
// directional factor's coefficient g2 - g1/r vanishes for every general
// kernel, leaving the finite limit -(g1/r)(0) * (n_field . n_src).
inline double mixed_normal_second_derivative(const KernelSpec& ks, const Point& x_field,
                                             const Point& n_field, const Point& x_src,
                                             const Point& n_src) {
    const Point d = x_field - x_src;
    const double r = norm(d);
    const RadialDerivatives rd = radial_derivatives(ks, r);
    if (r == 0.0) return -rd.g1_over_r * dot(n_field, n_src);
    const double cf = dot(d, n_field) / r;
    const double cs = dot(d, n_src) / r;
    return -rd.g2 * cf * cs - rd.g1_over_r * (dot(n_field, n_src) - cf * cs);
}

}  // namespace bkm
