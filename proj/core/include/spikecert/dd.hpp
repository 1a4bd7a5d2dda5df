// Double-double arithmetic: an unevaluated sum of two doubles giving ~31
// significant digits. Used for the ill-conditioned Gram solves and the
// near-singular bordered determinants, where plain doubles lose every digit.
//
// The error-free transforms below require strict IEEE double semantics;
// do not compile this header with -ffast-math or equivalents.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace spikecert {

// The double overloads participate in the same unqualified calls as the DD
// ones, so templated numeric code written against either type resolves here.
using std::abs;
using std::exp;
using std::isfinite;
using std::sqrt;

struct DD {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DD() = default;
    constexpr DD(double h) : hi(h), lo(0.0) {}
    constexpr DD(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi; }
};

namespace detail {

// two_sum: a + b = s + err, exactly.
inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

// quick_two_sum: requires |a| >= |b| (or a == 0).
inline DD quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

// two_prod: a * b = p + err, exactly (single-rounding fma contract).
inline DD two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

} // namespace detail

inline DD operator+(DD a, DD b) {
    DD s = detail::two_sum(a.hi, b.hi);
    DD t = detail::two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = detail::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return detail::quick_two_sum(s.hi, s.lo);
}

inline DD operator-(DD a) { return {-a.hi, -a.lo}; }
inline DD operator-(DD a, DD b) { return a + (-b); }

inline DD operator*(DD a, DD b) {
    DD p = detail::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return detail::quick_two_sum(p.hi, p.lo);
}

inline DD operator/(DD a, DD b) {
    double q1 = a.hi / b.hi;
    DD r = a - DD(q1) * b;
    double q2 = r.hi / b.hi;
    r = r - DD(q2) * b;
    double q3 = r.hi / b.hi;
    DD q = detail::quick_two_sum(q1, q2);
    return q + DD(q3);
}

inline DD& operator+=(DD& a, DD b) { a = a + b; return a; }
inline DD& operator-=(DD& a, DD b) { a = a - b; return a; }
inline DD& operator*=(DD& a, DD b) { a = a * b; return a; }
inline DD& operator/=(DD& a, DD b) { a = a / b; return a; }

inline DD operator+(DD a, double b) { return a + DD(b); }
inline DD operator+(double a, DD b) { return DD(a) + b; }
inline DD operator-(DD a, double b) { return a - DD(b); }
inline DD operator-(double a, DD b) { return DD(a) - b; }
inline DD operator*(DD a, double b) { return a * DD(b); }
inline DD operator*(double a, DD b) { return DD(a) * b; }
inline DD operator/(DD a, double b) { return a / DD(b); }
inline DD operator/(double a, DD b) { return DD(a) / b; }

inline bool operator==(DD a, DD b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator!=(DD a, DD b) { return !(a == b); }
inline bool operator<(DD a, DD b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(DD a, DD b) { return b < a; }
inline bool operator<=(DD a, DD b) { return !(b < a); }
inline bool operator>=(DD a, DD b) { return !(a < b); }

inline double to_double(DD a) { return a.hi; }
inline double to_double(double a) { return a; }

inline DD abs(DD a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }

inline bool isfinite(DD a) { return std::isfinite(a.hi); }

namespace dd_const {
inline constexpr DD pi{3.141592653589793116e+00, 1.224646799147353207e-16};
inline constexpr DD ln2{6.931471805599452862e-01, 2.319046813846299558e-17};
} // namespace dd_const

// ldexp on both limbs: exact scaling by 2^n.
inline DD ldexp(DD a, int n) { return {std::ldexp(a.hi, n), std::ldexp(a.lo, n)}; }

inline DD sqrt(DD a) {
    if (a.hi <= 0.0) return DD(std::sqrt(a.hi)); // 0 or NaN, matching double
    double x = 1.0 / std::sqrt(a.hi);
    double y = a.hi * x;
    // one Karp-Markstein correction step doubles the accurate digits
    DD yy = DD(y) + (a - DD(y) * DD(y)).hi * (x * 0.5);
    return yy;
}

// exp by argument reduction: exp(a) = 2^k * (exp(r/16))^16 with |r| <= ln2/2.
// Four squarings keep the accumulated roundoff under 1e-30 relative.
inline DD exp(DD a) {
    if (a.hi <= -709.0) return DD(0.0);
    if (a.hi >= 709.0) return DD(std::numeric_limits<double>::infinity());
    double k = std::floor(a.hi / dd_const::ln2.hi + 0.5);
    DD r = a - dd_const::ln2 * k;
    r = ldexp(r, -4);
    DD term = r;
    DD sum = DD(1.0) + r;
    for (int i = 2; i <= 20; ++i) {
        term = term * r / double(i);
        sum += term;
        if (std::fabs(term.hi) < 1e-36 * std::fabs(sum.hi)) break;
    }
    for (int i = 0; i < 4; ++i) sum = sum * sum;
    return ldexp(sum, int(k));
}

// integer power by repeated squaring
inline DD powi(DD a, int n) {
    if (n == 0) return DD(1.0);
    bool inv = n < 0;
    unsigned m = inv ? unsigned(-(long long)n) : unsigned(n);
    DD base = a, acc(1.0);
    while (m) {
        if (m & 1u) acc *= base;
        base *= base;
        m >>= 1u;
    }
    return inv ? DD(1.0) / acc : acc;
}

inline double powi(double a, int n) {
    if (n == 0) return 1.0;
    bool inv = n < 0;
    unsigned m = inv ? unsigned(-(long long)n) : unsigned(n);
    double base = a, acc = 1.0;
    while (m) {
        if (m & 1u) acc *= base;
        base *= base;
        m >>= 1u;
    }
    return inv ? 1.0 / acc : acc;
}

} // namespace spikecert
