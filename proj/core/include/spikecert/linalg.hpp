#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "spikecert/dd.hpp"

namespace spikecert {

// Row-major dense matrix for the small (<= ~10 x 10) systems this library
// deals in, templated so the same elimination code runs in double or DD.
template <class R>
struct SmallMat {
    int rows = 0, cols = 0;
    std::vector<R> a;

    SmallMat() = default;
    SmallMat(int r, int c) : rows(r), cols(c), a(std::size_t(r) * std::size_t(c), R(0.0)) {}

    R& operator()(int i, int j) { return a[std::size_t(i) * std::size_t(cols) + std::size_t(j)]; }
    const R& operator()(int i, int j) const { return a[std::size_t(i) * std::size_t(cols) + std::size_t(j)]; }
};

template <class R>
struct PivotInfo {
    R min_pivot{0.0};
    R max_pivot{0.0};
    double growth = 1.0; // max intermediate magnitude / max initial magnitude
    bool singular = false;
};

// Determinant by Gaussian elimination with full pivoting. Destroys its copy
// of the input. Exact zero pivots short-circuit to det = 0.
template <class R>
R det_full_pivot(SmallMat<R> m, PivotInfo<R>* info = nullptr) {
    const int n = m.rows;
    double sign = 1.0;
    R det(1.0);
    PivotInfo<R> pi;
    double max0 = 0.0, maxall = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) max0 = std::max(max0, std::fabs(to_double(m(i, j))));
    maxall = max0;
    for (int k = 0; k < n; ++k) {
        int pr = k, pc = k;
        R best = abs(m(k, k));
        for (int i = k; i < n; ++i)
            for (int j = k; j < n; ++j)
                if (abs(m(i, j)) > best) { best = abs(m(i, j)); pr = i; pc = j; }
        if (pr != k) {
            for (int j = 0; j < n; ++j) std::swap(m(k, j), m(pr, j));
            sign = -sign;
        }
        if (pc != k) {
            for (int i = 0; i < n; ++i) std::swap(m(i, k), m(i, pc));
            sign = -sign;
        }
        R piv = m(k, k);
        R apiv = abs(piv);
        if (k == 0) pi.max_pivot = pi.min_pivot = apiv;
        else {
            if (apiv > pi.max_pivot) pi.max_pivot = apiv;
            if (apiv < pi.min_pivot) pi.min_pivot = apiv;
        }
        if (to_double(apiv) == 0.0) {
            pi.singular = true;
            if (info) { pi.growth = max0 > 0.0 ? maxall / max0 : 1.0; *info = pi; }
            return R(0.0);
        }
        det *= piv;
        for (int i = k + 1; i < n; ++i) {
            R f = m(i, k) / piv;
            for (int j = k + 1; j < n; ++j) {
                m(i, j) -= f * m(k, j);
                maxall = std::max(maxall, std::fabs(to_double(m(i, j))));
            }
        }
    }
    if (info) { pi.growth = max0 > 0.0 ? maxall / max0 : 1.0; *info = pi; }
    return det * sign;
}

// Linear solve by full-pivot LU. Returns false when a pivot vanishes exactly.
template <class R>
bool solve_full_pivot(SmallMat<R> m, std::vector<R> b, std::vector<R>& x, PivotInfo<R>* info = nullptr) {
    const int n = m.rows;
    std::vector<int> colperm(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) colperm[std::size_t(j)] = j;
    PivotInfo<R> pi;
    for (int k = 0; k < n; ++k) {
        int pr = k, pc = k;
        R best = abs(m(k, k));
        for (int i = k; i < n; ++i)
            for (int j = k; j < n; ++j)
                if (abs(m(i, j)) > best) { best = abs(m(i, j)); pr = i; pc = j; }
        if (pr != k) {
            for (int j = 0; j < n; ++j) std::swap(m(k, j), m(pr, j));
            std::swap(b[std::size_t(k)], b[std::size_t(pr)]);
        }
        if (pc != k) {
            for (int i = 0; i < n; ++i) std::swap(m(i, k), m(i, pc));
            std::swap(colperm[std::size_t(k)], colperm[std::size_t(pc)]);
        }
        R piv = m(k, k);
        R apiv = abs(piv);
        if (k == 0) pi.max_pivot = pi.min_pivot = apiv;
        else {
            if (apiv > pi.max_pivot) pi.max_pivot = apiv;
            if (apiv < pi.min_pivot) pi.min_pivot = apiv;
        }
        if (to_double(apiv) == 0.0) {
            pi.singular = true;
            if (info) *info = pi;
            return false;
        }
        for (int i = k + 1; i < n; ++i) {
            R f = m(i, k) / piv;
            m(i, k) = f;
            for (int j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
            b[std::size_t(i)] -= f * b[std::size_t(k)];
        }
    }
    std::vector<R> y(std::size_t(n), R(0.0));
    for (int i = n - 1; i >= 0; --i) {
        R acc = b[std::size_t(i)];
        for (int j = i + 1; j < n; ++j) acc -= m(i, j) * y[std::size_t(j)];
        y[std::size_t(i)] = acc / m(i, i);
    }
    x.assign(std::size_t(n), R(0.0));
    for (int j = 0; j < n; ++j) x[std::size_t(colperm[std::size_t(j)])] = y[std::size_t(j)];
    if (info) *info = pi;
    return true;
}

// Pairwise-summation tree: deterministic result independent of chunking by
// callers, and O(log n) error growth.
template <class R>
R pairwise_sum(std::span<const R> v) {
    if (v.empty()) return R(0.0);
    if (v.size() == 1) return v[0];
    if (v.size() <= 8) {
        R acc = v[0];
        for (std::size_t i = 1; i < v.size(); ++i) acc += v[i];
        return acc;
    }
    std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

template <class R>
R pairwise_sum(const std::vector<R>& v) {
    return pairwise_sum(std::span<const R>(v.data(), v.size()));
}

} // namespace spikecert
