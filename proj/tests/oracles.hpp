// Test-only oracles, independent of the library's evaluation paths:
// central finite differences, adaptive Simpson quadrature, and a
// reverse-order compensated summation.

#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracles {

inline double central_diff(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Adaptive Simpson on [a,b] with absolute tolerance tol.
inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                          double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Neumaier-compensated sum over terms in reverse order; the library sums
// ascending, so agreement is evidence the sum is order-insensitive.
inline double reverse_compensated_sum(const std::vector<double>& terms) {
    double sum = 0.0, comp = 0.0;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        double t = sum + *it;
        if (std::fabs(sum) >= std::fabs(*it)) comp += (sum - t) + *it;
        else comp += (*it - t) + sum;
        sum = t;
    }
    return sum + comp;
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

} // namespace oracles
