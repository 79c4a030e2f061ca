#pragma once

// Compensated double-double arithmetic (~31 significant digits) used by the
// series evaluations in specfun.hpp. Only the handful of operations the
// series need are provided. Requires a correctly rounded std::fma, which
// glibc guarantees.

#include <cmath>

namespace bkm::detail {

struct dd {
    double hi = 0.0;
    double lo = 0.0;

    constexpr dd() = default;
    constexpr dd(double h) : hi(h), lo(0.0) {}
    constexpr dd(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi + lo; }
};

// Error-free transforms.
inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline dd quick_two_sum(double a, double b) {  // requires |a| >= |b|
    double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline dd add(const dd& a, const dd& b) {
    dd s = two_sum(a.hi, b.hi);
    dd t = two_sum(a.lo, b.lo);
    double lo = s.lo + t.hi;
    dd r = quick_two_sum(s.hi, lo);
    r.lo += t.lo;
    return quick_two_sum(r.hi, r.lo);
}

inline dd sub(const dd& a, const dd& b) { return add(a, {-b.hi, -b.lo}); }

inline dd neg(const dd& a) { return {-a.hi, -a.lo}; }

inline dd mul(const dd& a, const dd& b) {
    dd p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline dd mul(const dd& a, double b) {
    dd p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    return quick_two_sum(p.hi, p.lo);
}

inline dd div(const dd& a, const dd& b) {
    double q1 = a.hi / b.hi;
    dd r = sub(a, mul(b, q1));
    double q2 = r.hi / b.hi;
    r = sub(r, mul(b, q2));
    double q3 = r.hi / b.hi;
    dd q = quick_two_sum(q1, q2);
    return add(q, dd(q3));
}

inline dd div(const dd& a, double b) { return div(a, dd(b)); }

inline double to_double(const dd& a) { return a.hi + a.lo; }

inline dd dd_abs(const dd& a) { return a.hi < 0.0 ? neg(a) : a; }

// Constant pairs: hi is the nearest double, lo the binary remainder.
inline constexpr dd dd_pi{3.141592653589793, 1.2246467991473532e-16};
inline constexpr dd dd_two_over_pi{0.6366197723675814, -3.935735335036497e-17};
inline constexpr dd dd_ln2{0.6931471805599453, 2.3190468138462996e-17};
inline constexpr dd dd_euler_gamma{0.5772156649015329, -4.942915152430645e-18};

// ln(x) in double-double via range reduction to [1/sqrt(2), sqrt(2)) and the
// atanh series: ln m = 2 atanh((m-1)/(m+1)).
inline dd dd_log(double x) {
    int e = 0;
    double m = std::frexp(x, &e);  // x = m * 2^e, m in [0.5, 1)
    if (m < 0.7071067811865476) {
        m *= 2.0;
        e -= 1;
    }
    // m - 1 is exact for m in [1/2, 2) (Sterbenz); m + 1 must be kept as an
    // unevaluated pair or ln loses ~1e-17 relative accuracy, which the
    // strongly cancelling K series then amplifies by e^{2x}.
    dd t = div(dd(m - 1.0), two_sum(m, 1.0));
    dd t2 = mul(t, t);
    dd term = t;
    dd sum = t;
    for (int k = 3; k < 80; k += 2) {
        term = mul(term, t2);
        dd contrib = div(term, static_cast<double>(k));
        sum = add(sum, contrib);
        if (std::fabs(contrib.hi) < 1e-35 * std::fabs(sum.hi)) break;
    }
    sum = mul(sum, 2.0);
    return add(sum, mul(dd_ln2, static_cast<double>(e)));
}

}  // namespace bkm::detail
