#pragma once

// Bessel functions J, Y and modified Bessel functions I, K of nonnegative
// integer and half-integer order, the building blocks of the general and
// fundamental solutions in kernels.hpp.
//
// Evaluation strategy: ascending power series (accumulated in compensated
// double-double arithmetic where the terms cancel) for small and moderate
// arguments, Hankel-type asymptotic expansions for large arguments, and
// order recurrences to reach orders >= 2 from the 0/1 (or 1/2, 3/2)
// anchors. Half-integer orders use the elementary closed forms. Crossover
// constants live below; the test suite pins them with series, quadrature
// and Wronskian cross-checks.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "bkm/detail/double_double.hpp"

namespace bkm {

enum class BesselKind { J, Y, I, K };

namespace detail {

inline constexpr double kJSeriesMax = 25.0;  // J: series below, asymptotic above
inline constexpr double kYSeriesMax = 16.0;  // Y0/Y1 anchors
inline constexpr double kKSeriesMax = 18.0;  // K0/K1 anchors

// Ascending series for J (alternating) or I (positive terms), any supported
// order, summed in double-double. Returns the full function value.
inline dd bessel_ji_series(double nu, double x, bool modified) {
    if (x == 0.0) return dd(nu == 0.0 ? 1.0 : 0.0);
    dd q = div(two_prod(x, x), 4.0);
    dd term(1.0);
    dd sum(1.0);
    double peak = 1.0;
    for (int k = 1; k < 600; ++k) {
        double denom = static_cast<double>(k) * (static_cast<double>(k) + nu);
        term = div(mul(term, q), modified ? denom : -denom);
        sum = add(sum, term);
        double mag = std::fabs(term.hi);
        if (mag > peak) peak = mag;
        if (mag < 1e-34 * peak && mag < 1e-34 * (std::fabs(sum.hi) + peak)) break;
    }
    double front = std::pow(0.5 * x, nu) / std::tgamma(nu + 1.0);
    return mul(sum, front);
}

// Hankel asymptotic expansion, valid for large x. Returns J (want_y false)
// or Y (want_y true).
inline double bessel_jy_asymptotic(double nu, double x, bool want_y) {
    const double mu = 4.0 * nu * nu;
    const double inv8x = 1.0 / (8.0 * x);
    double ak = 1.0;
    double p = 1.0, qq = 0.0;
    double prev = std::numeric_limits<double>::max();
    for (int k = 1; k <= 40; ++k) {
        double num = mu - static_cast<double>(2 * k - 1) * (2 * k - 1);
        ak *= num * inv8x / static_cast<double>(k);
        double mag = std::fabs(ak);
        if (mag >= prev) break;  // asymptotic tail started to diverge
        prev = mag;
        int phase = k / 2;  // terms alternate in pairs: +,+,-,-,+,+,...
        double signed_ak = (phase % 2 == 0) ? ak : -ak;
        if (k % 2 == 0)
            p += signed_ak;
        else
            qq += signed_ak;
        if (mag < 1e-18) break;
    }
    // chi = x - (nu/2 + 1/4)*pi, with the constant part in double-double so
    // the phase stays accurate.
    dd chi = add(dd(x), neg(mul(dd_pi, 0.5 * nu + 0.25)));
    double c = std::cos(chi.hi) - chi.lo * std::sin(chi.hi);
    double s = std::sin(chi.hi) + chi.lo * std::cos(chi.hi);
    double amp = std::sqrt(to_double(div(dd_two_over_pi, x)));
    return want_y ? amp * (p * s + qq * c) : amp * (p * c - qq * s);
}

// Asymptotic expansion for K, large x.
inline double bessel_k_asymptotic(double nu, double x) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    double prev = std::numeric_limits<double>::max();
    for (int k = 1; k <= 40; ++k) {
        double num = mu - static_cast<double>(2 * k - 1) * (2 * k - 1);
        term *= num / (8.0 * x * static_cast<double>(k));
        double mag = std::fabs(term);
        if (mag >= prev) break;
        prev = mag;
        sum += term;
        if (mag < 1e-18 * std::fabs(sum)) break;
    }
    return std::sqrt(to_double(div(dd_pi, 2.0 * x))) * std::exp(-x) * sum;
}

// Log-series anchors for Y_0, Y_1 (x <= kYSeriesMax), fully in double-double.
inline dd bessel_y01_series(int n, double x) {
    dd q = div(two_prod(x, x), 4.0);
    dd lg = add(dd_log(0.5 * x), dd_euler_gamma);  // ln(x/2) + gamma
    dd jn = bessel_ji_series(static_cast<double>(n), x, false);
    if (n == 0) {
        // Y0 = (2/pi) [ (ln(x/2)+g) J0 + sum_{k>=1} (-1)^{k+1} H_k q^k/(k!)^2 ]
        dd u(1.0);   // q^k / (k!)^2
        dd h(0.0);   // H_k
        dd s(0.0);
        for (int k = 1; k < 600; ++k) {
            u = div(mul(u, q), static_cast<double>(k) * static_cast<double>(k));
            h = add(h, div(dd(1.0), static_cast<double>(k)));
            dd t = mul(u, h);
            if (k % 2 == 0) t = neg(t);
            s = add(s, t);
            if (std::fabs(t.hi) < 1e-34 * (std::fabs(s.hi) + 1e-300) && k > x) break;
        }
        return mul(add(mul(lg, jn), s), dd_two_over_pi);
    }
    // Y1 = (2/pi)(ln(x/2)+g) J1 - 2/(pi x)
    //      - (x/(2 pi)) sum_k (H_k + H_{k+1}) (-q)^k / (k! (k+1)!)
    dd u(1.0);  // q^k / (k! (k+1)!)
    dd hk(0.0), hk1(1.0);
    dd s = add(hk, hk1);  // k = 0 term
    for (int k = 1; k < 600; ++k) {
        u = div(mul(u, q), static_cast<double>(k) * static_cast<double>(k + 1));
        hk = add(hk, div(dd(1.0), static_cast<double>(k)));
        hk1 = add(hk1, div(dd(1.0), static_cast<double>(k + 1)));
        dd t = mul(u, add(hk, hk1));
        if (k % 2 == 1) t = neg(t);
        s = add(s, t);
        if (std::fabs(t.hi) < 1e-34 * (std::fabs(s.hi) + 1e-300) && k > x) break;
    }
    dd out = mul(mul(lg, jn), dd_two_over_pi);
    out = sub(out, div(dd(2.0), mul(dd_pi, x)));
    out = sub(out, mul(mul(s, x), div(dd(0.5), dd_pi)));
    return out;
}

// Log-series anchors for K_0, K_1 (x <= kKSeriesMax).
inline dd bessel_k01_series(int n, double x) {
    dd q = div(two_prod(x, x), 4.0);
    dd lg = add(dd_log(0.5 * x), dd_euler_gamma);
    dd in = bessel_ji_series(static_cast<double>(n), x, true);
    if (n == 0) {
        // K0 = -(ln(x/2)+g) I0 + sum_{k>=1} H_k q^k/(k!)^2
        dd u(1.0), h(0.0), s(0.0);
        for (int k = 1; k < 600; ++k) {
            u = div(mul(u, q), static_cast<double>(k) * static_cast<double>(k));
            h = add(h, div(dd(1.0), static_cast<double>(k)));
            dd t = mul(u, h);
            s = add(s, t);
            if (std::fabs(t.hi) < 1e-34 * std::fabs(s.hi)) break;
        }
        return sub(s, mul(lg, in));
    }
    // K1 = 1/x + (ln(x/2)+g) I1 - (x/4) sum_k (H_k + H_{k+1}) q^k/(k!(k+1)!)
    dd u(1.0);
    dd hk(0.0), hk1(1.0);
    dd s = add(hk, hk1);
    for (int k = 1; k < 600; ++k) {
        u = div(mul(u, q), static_cast<double>(k) * static_cast<double>(k + 1));
        hk = add(hk, div(dd(1.0), static_cast<double>(k)));
        hk1 = add(hk1, div(dd(1.0), static_cast<double>(k + 1)));
        dd t = mul(u, add(hk, hk1));
        s = add(s, t);
        if (std::fabs(t.hi) < 1e-34 * std::fabs(s.hi)) break;
    }
    dd out = add(div(dd(1.0), x), mul(lg, in));
    return sub(out, mul(s, 0.25 * x));
}

// J_n for integer n >= 2 and x > kJSeriesMax, monotone zone n > 3x/4:
// downward recurrence with the even-order sum normalization
// J0 + 2 J2 + 2 J4 + ... = 1.
inline double bessel_j_miller(int n, double x) {
    int start = n + 40 + static_cast<int>(std::ceil(0.5 * x));
    if (start % 2 != 0) ++start;
    double jkp1 = 0.0;
    double jk = 1e-280;
    double nsum = 2.0 * jk;  // start is even
    double jn = (n == start) ? jk : 0.0;
    for (int k = start; k >= 1; --k) {
        double jkm1 = (2.0 * k / x) * jk - jkp1;
        jkp1 = jk;
        jk = jkm1;
        int ord = k - 1;
        if (ord == n) jn = jk;
        if (ord % 2 == 0) nsum += (ord == 0) ? jk : 2.0 * jk;
        if (std::fabs(jk) > 1e250) {
            jk *= 1e-250;
            jkp1 *= 1e-250;
            nsum *= 1e-250;
            jn *= 1e-250;
        }
    }
    return jn / nsum;
}

inline double bessel_j_int(int n, double x) {
    if (x <= kJSeriesMax) return to_double(bessel_ji_series(static_cast<double>(n), x, false));
    if (n <= 1) return bessel_jy_asymptotic(static_cast<double>(n), x, false);
    if (static_cast<double>(n) <= 0.75 * x) {
        double jm = bessel_jy_asymptotic(0.0, x, false);
        double jc = bessel_jy_asymptotic(1.0, x, false);
        for (int k = 1; k < n; ++k) {
            double jn = (2.0 * k / x) * jc - jm;
            jm = jc;
            jc = jn;
        }
        return jc;
    }
    return bessel_j_miller(n, x);
}

inline double bessel_y_int(int n, double x) {
    double y0, y1;
    if (x <= kYSeriesMax) {
        y0 = to_double(bessel_y01_series(0, x));
        if (n == 0) return y0;
        y1 = to_double(bessel_y01_series(1, x));
    } else {
        y0 = bessel_jy_asymptotic(0.0, x, true);
        if (n == 0) return y0;
        y1 = bessel_jy_asymptotic(1.0, x, true);
    }
    double ym = y0, yc = y1;
    for (int k = 1; k < n; ++k) {
        double yn = (2.0 * k / x) * yc - ym;
        ym = yc;
        yc = yn;
    }
    return yc;
}

inline double bessel_k_int(int n, double x) {
    double k0, k1;
    if (x <= kKSeriesMax) {
        k0 = to_double(bessel_k01_series(0, x));
        if (n == 0) return k0;
        k1 = to_double(bessel_k01_series(1, x));
    } else {
        k0 = bessel_k_asymptotic(0.0, x);
        if (n == 0) return k0;
        k1 = bessel_k_asymptotic(1.0, x);
    }
    double km = k0, kc = k1;
    for (int k = 1; k < n; ++k) {
        double kn = (2.0 * k / x) * kc + km;
        km = kc;
        kc = kn;
    }
    return kc;
}

// Half-integer J via upward recurrence from the closed forms
// J_{1/2} = sqrt(2/(pi x)) sin x, J_{3/2} = sqrt(2/(pi x)) (sin x / x - cos x).
// Stable for x comfortably above the order; the series covers the rest.
inline double bessel_j_half_recur(int twice_nu, double x) {
    double amp = std::sqrt(to_double(div(dd_two_over_pi, x)));
    double s = std::sin(x), c = std::cos(x);
    double jm = amp * s;  // nu = 1/2
    if (twice_nu == 1) return jm;
    double jc = amp * (s / x - c);  // nu = 3/2
    for (int t = 3; t < twice_nu; t += 2) {
        double nu_cur = 0.5 * t;
        double jn = (2.0 * nu_cur / x) * jc - jm;
        jm = jc;
        jc = jn;
    }
    return jc;
}

inline double bessel_j_half(int twice_nu, double x) {
    double nu = 0.5 * twice_nu;
    if (x <= kJSeriesMax || x < nu + 2.0)
        return to_double(bessel_ji_series(nu, x, false));
    return bessel_j_half_recur(twice_nu, x);
}

// Half-integer Y: upward recurrence from
// Y_{1/2} = -sqrt(2/(pi x)) cos x, Y_{3/2} = -sqrt(2/(pi x)) (cos x / x + sin x).
// Y is the dominant solution upward, so this is stable for all x.
inline double bessel_y_half(int twice_nu, double x) {
    double amp = std::sqrt(to_double(div(dd_two_over_pi, x)));
    double s = std::sin(x), c = std::cos(x);
    double ym = -amp * c;
    if (twice_nu == 1) return ym;
    double yc = -amp * (c / x + s);
    for (int t = 3; t < twice_nu; t += 2) {
        double nu_cur = 0.5 * t;
        double yn = (2.0 * nu_cur / x) * yc - ym;
        ym = yc;
        yc = yn;
    }
    return yc;
}

// Half-integer K: upward recurrence from K_{1/2} = sqrt(pi/(2x)) e^{-x}.
inline double bessel_k_half(int twice_nu, double x) {
    double km = std::sqrt(to_double(div(dd_pi, 2.0 * x))) * std::exp(-x);
    if (twice_nu == 1) return km;
    double kc = km * (1.0 + 1.0 / x);
    for (int t = 3; t < twice_nu; t += 2) {
        double nu_cur = 0.5 * t;
        double kn = (2.0 * nu_cur / x) * kc + km;
        km = kc;
        kc = kn;
    }
    return kc;
}

// Order grid check: returns 2*order as a nonnegative integer.
inline int checked_twice_order(double order) {
    double t = 2.0 * order;
    double r = std::round(t);
    if (!(order >= 0.0) || std::fabs(t - r) > 1e-9 || r > 400.0)
        throw std::domain_error("bessel: order must be a nonnegative integer or half-integer, got " +
                                std::to_string(order));
    return static_cast<int>(r);
}

}  // namespace detail

// C_nu(x) for C in {J, Y, I, K}. Orders: nonnegative integer or
// half-integer. Y and K are singular at x = 0.
inline double bessel(BesselKind kind, double order, double x) {
    const int t2 = detail::checked_twice_order(order);
    if (!(x >= 0.0)) throw std::domain_error("bessel: argument must be >= 0");
    const bool half = (t2 % 2) != 0;
    const int n = t2 / 2;
    switch (kind) {
        case BesselKind::J:
            if (x == 0.0) return order == 0.0 ? 1.0 : 0.0;
            return half ? detail::bessel_j_half(t2, x) : detail::bessel_j_int(n, x);
        case BesselKind::I:
            if (x == 0.0) return order == 0.0 ? 1.0 : 0.0;
            return detail::to_double(detail::bessel_ji_series(order, x, true));
        case BesselKind::Y:
            if (x == 0.0) throw std::domain_error("bessel: Y has a singularity at the origin");
            return half ? detail::bessel_y_half(t2, x) : detail::bessel_y_int(n, x);
        case BesselKind::K:
            if (x == 0.0) throw std::domain_error("bessel: K has a singularity at the origin");
            return half ? detail::bessel_k_half(t2, x) : detail::bessel_k_int(n, x);
    }
    throw std::domain_error("bessel: unknown kind");
}

// z^{-nu} C_nu(z). For J and I this is an entire even function of z with
// limit 2^{-nu}/Gamma(nu+1) at z = 0; the kernel derivatives are built on
// it. For Y and K it inherits the origin singularity.
inline double scaled_bessel(BesselKind kind, double order, double z) {
    const int t2 = detail::checked_twice_order(order);
    (void)t2;
    if (!(z >= 0.0)) throw std::domain_error("scaled_bessel: argument must be >= 0");
    const bool entire = (kind == BesselKind::J || kind == BesselKind::I);
    if (z < 1.0) {
        if (!entire) {
            if (z == 0.0) throw std::domain_error("scaled_bessel: singular kind at the origin");
            return bessel(kind, order, z) / std::pow(z, order);
        }
        // Direct series for z^{-nu} C_nu(z): no z^nu factor, so no underflow.
        const bool modified = (kind == BesselKind::I);
        const double q = 0.25 * z * z;
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k < 60; ++k) {
            term *= (modified ? q : -q) / (static_cast<double>(k) * (static_cast<double>(k) + order));
            sum += term;
            if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
        }
        return sum * std::pow(2.0, -order) / std::tgamma(order + 1.0);
    }
    return bessel(kind, order, z) / std::pow(z, order);
}

}  // namespace bkm
