#pragma once

#include <functional>
#include <span>
#include <type_traits>
#include <vector>

#include "spikecert/dd.hpp"
#include "spikecert/errors.hpp"
#include "spikecert/kernel.hpp"
#include "spikecert/linalg.hpp"
#include "spikecert/measure.hpp"
#include "spikecert/spikes.hpp"

namespace spikecert {

class Framework;

namespace detail {

// Kernel x-derivatives of one atom family evaluated at a fixed point for
// every sample atom, orders 0..dmax. Built once per evaluation point so grid
// scans do not re-evaluate exponentials per matrix entry.
template <class R>
struct AtomTable {
    int K = 0;
    int dmax = 0;
    std::vector<R> vals;    // (dmax+1) x K, row-major by derivative order
    const R& psi(int d, int k) const { return vals[std::size_t(d) * std::size_t(K) + std::size_t(k)]; }
};

template <class R>
AtomTable<R> build_atom_table(const Kernel& kernel, const SamplingMeasure& measure, R x, int dmax) {
    AtomTable<R> t;
    t.K = int(measure.atoms.size());
    t.dmax = dmax;
    t.vals.resize(std::size_t(dmax + 1) * std::size_t(t.K));
    for (int k = 0; k < t.K; ++k) {
        R s(measure.atoms[std::size_t(k)].location);
        if (kernel.family == KernelFamily::Laplace) {
            R e = exp(-(x * s));
            R p(1.0);
            for (int d = 0; d <= dmax; ++d) {
                t.vals[std::size_t(d) * std::size_t(t.K) + std::size_t(k)] = p * e;
                p *= -s;
            }
        } else {
            R u = (x - s) / kernel.sigma;
            R e = exp(-(u * u));
            for (int d = 0; d <= dmax; ++d) {
                R v = d == 0 ? e : hermite_aux_eval<R>(d, u) * e / powi(R(kernel.sigma), d);
                t.vals[std::size_t(d) * std::size_t(t.K) + std::size_t(k)] = v;
            }
        }
    }
    return t;
}

// sum_k w_k A(da, k) B(db, k), ascending atoms, compensated accumulation.
template <class R>
R weighted_dot(const SamplingMeasure& measure, const AtomTable<R>& a, int da, const AtomTable<R>& b, int db) {
    DD acc(0.0);
    for (int k = 0; k < a.K; ++k) {
        if constexpr (std::is_same_v<R, double>) {
            acc += DD(measure.atoms[std::size_t(k)].weight) * DD(a.psi(da, k)) * DD(b.psi(db, k));
        } else {
            acc += measure.atoms[std::size_t(k)].weight * a.psi(da, k) * b.psi(db, k);
        }
    }
    if constexpr (std::is_same_v<R, double>) return to_double(acc);
    else return acc;
}

const std::vector<std::vector<double>>& binomial_table(int n);

} // namespace detail

// A reconstruction framework: kernel + sampling measure, optionally with
// L1-normalized atoms. Exposes the autocorrelation C(x,x') and its partial
// derivatives, the forward map, and the Gram matrices of atom-derivative
// families. Immutable after construction; all evaluations are pure.
class Framework {
  public:
    Framework(Kernel kernel, SamplingMeasure measure, bool normalized = false);

    const Kernel& kernel() const { return kernel_; }
    const SamplingMeasure& measure() const { return measure_; }
    bool normalized() const { return normalized_; }

    // d1^k d2^l C(x, x') where C(x,x') = <phi(x), phi(x')>_H.
    double correlation(int k, int l, double x, double xp) const;

    template <class R>
    R correlation_t(int k, int l, R x, R xp) const;

    // Derivative of the (possibly normalized) atom profile: d^d/dx^d psi(x,s).
    template <class R>
    R atom_deriv(int d, R x, R s) const;

    // Observation (Phi m)_k = sum_i a_i psi(x_i, s_k); discrete measures only.
    std::vector<double> forward(const SpikeConfiguration& spikes) const;
    // Continuous observation profile s -> sum_i a_i psi(x_i, s) (LebesgueLine).
    std::function<double(double)> forward_profile(const SpikeConfiguration& spikes) const;

    // Gram of (phi(x_1), phi'(x_1), ..., phi(x_M), phi'(x_M)).
    SmallMat<double> gram_gamma(const std::vector<double>& positions) const;
    // Gram of (phi(x0), phi'(x0), ..., phi^(k)(x0)).
    SmallMat<double> gram_F(double x0, int k) const;

    template <class R>
    SmallMat<R> gram_gamma_t(const std::vector<R>& positions) const;
    template <class R>
    SmallMat<R> gram_F_t(R x0, int k) const;

    // L1 normalizer N^(deriv)(x) = sum_k w_k d1^deriv psi(x, s_k).
    double normalizer(int deriv, double x) const;
    template <class R>
    R normalizer_t(int deriv, R x) const;

    // Derivatives of 1/N up to order n (inclusive), from the atom table at x.
    template <class R>
    std::vector<R> reciprocal_normalizer_derivs(const detail::AtomTable<R>& table, int n) const;

    // Weighted inner product / norm of observation-space vectors.
    double hilbert_inner(std::span<const double> a, std::span<const double> b) const;
    double hilbert_norm(std::span<const double> a) const;
    // <phi^(d)(x), y>_H for an observation vector y.
    double atom_observation_inner(int d, double x, std::span<const double> y) const;

    // Normalized correlation from prebuilt tables (detail shared with the
    // certificate and determinant evaluators).
    template <class R>
    R correlation_tables(int k, int l, const detail::AtomTable<R>& a, const detail::AtomTable<R>& b) const;

  private:
    void check_orders(int k, int l) const;

    template <class R>
    R lebesgue_correlation(int k, int l, R x, R xp) const;

    Kernel kernel_;
    SamplingMeasure measure_;
    bool normalized_ = false;
};

// Validates finite mass and a strictly positive normalizer, then returns the
// framework with normalized atom evaluations switched on.
Framework normalize(const Framework& fw);
Framework normalize(Kernel kernel, SamplingMeasure measure);

} // namespace spikecert

// ---- template implementations -------------------------------------------

namespace spikecert {

namespace detail {

template <class R>
R pi_const() {
    if constexpr (std::is_same_v<R, DD>) return dd_const::pi;
    else return 3.14159265358979323846;
}

} // namespace detail

template <class R>
R Framework::lebesgue_correlation(int k, int l, R x, R xp) const {
    // C(x,x') = sigma sqrt(pi/2) exp(-(x-x')^2 / (2 sigma^2)); partials by
    // differentiating the closed form, validated against quadrature.
    if (k + l > hermite_aux_max_order())
        throw DerivOrderUnsupported("combined closed-form correlation order exceeds the exact-coefficient limit");
    R sig(kernel_.sigma);
    R amp = sig * sqrt(R(0.5) * detail::pi_const<R>());
    R h = sig * sqrt(R(2.0));
    R u = (x - xp) / h;
    int n = k + l;
    R g = n == 0 ? exp(-(u * u)) : hermite_aux_eval<R>(n, u) * exp(-(u * u)) / powi(h, n);
    double sign = (l % 2 == 0) ? 1.0 : -1.0;
    return amp * g * sign;
}

template <class R>
R Framework::correlation_t(int k, int l, R x, R xp) const {
    check_orders(k, l);
    if (measure_.kind == MeasureKind::LebesgueLine) return lebesgue_correlation<R>(k, l, x, xp);
    auto ta = detail::build_atom_table<R>(kernel_, measure_, x, k);
    auto tb = detail::build_atom_table<R>(kernel_, measure_, xp, l);
    return correlation_tables<R>(k, l, ta, tb);
}

template <class R>
R Framework::correlation_tables(int k, int l, const detail::AtomTable<R>& a, const detail::AtomTable<R>& b) const {
    if (!normalized_) return detail::weighted_dot<R>(measure_, a, k, b, l);
    const auto& binom = detail::binomial_table(std::max(k, l));
    auto ra = reciprocal_normalizer_derivs<R>(a, k);
    auto rb = reciprocal_normalizer_derivs<R>(b, l);
    R acc(0.0);
    for (int p = 0; p <= k; ++p) {
        for (int q = 0; q <= l; ++q) {
            R raw = detail::weighted_dot<R>(measure_, a, p, b, q);
            acc += binom[std::size_t(k)][std::size_t(p)] * binom[std::size_t(l)][std::size_t(q)] * raw *
                   ra[std::size_t(k - p)] * rb[std::size_t(l - q)];
        }
    }
    return acc;
}

template <class R>
std::vector<R> Framework::reciprocal_normalizer_derivs(const detail::AtomTable<R>& table, int n) const {
    std::vector<R> nd(std::size_t(n) + 1, R(0.0));
    for (int j = 0; j <= n; ++j) {
        DD acc(0.0);
        for (int k = 0; k < table.K; ++k) {
            if constexpr (std::is_same_v<R, double>) acc += DD(measure_.atoms[std::size_t(k)].weight) * DD(table.psi(j, k));
            else acc += measure_.atoms[std::size_t(k)].weight * table.psi(j, k);
        }
        if constexpr (std::is_same_v<R, double>) nd[std::size_t(j)] = to_double(acc);
        else nd[std::size_t(j)] = acc;
    }
    if (!(to_double(nd[0]) > 0.0)) throw NonPositiveNormalizer("normalizer N(x) must be strictly positive");
    const auto& binom = detail::binomial_table(n);
    std::vector<R> g(std::size_t(n) + 1, R(0.0));
    g[0] = R(1.0) / nd[0];
    for (int m = 1; m <= n; ++m) {
        R acc(0.0);
        for (int j = 1; j <= m; ++j) acc += binom[std::size_t(m)][std::size_t(j)] * nd[std::size_t(j)] * g[std::size_t(m - j)];
        g[std::size_t(m)] = -acc / nd[0];
    }
    return g;
}

template <class R>
R Framework::atom_deriv(int d, R x, R s) const {
    if (!normalized_) return kernel_deriv<R>(kernel_, d, x, s);
    auto table = detail::build_atom_table<R>(kernel_, measure_, x, d);
    auto g = reciprocal_normalizer_derivs<R>(table, d);
    const auto& binom = detail::binomial_table(d);
    R acc(0.0);
    for (int p = 0; p <= d; ++p)
        acc += binom[std::size_t(d)][std::size_t(p)] * kernel_deriv<R>(kernel_, p, x, s) * g[std::size_t(d - p)];
    return acc;
}

template <class R>
R Framework::normalizer_t(int deriv, R x) const {
    if (measure_.kind == MeasureKind::LebesgueLine) throw InfiniteMass("normalizer undefined for infinite mass");
    auto table = detail::build_atom_table<R>(kernel_, measure_, x, deriv);
    DD acc(0.0);
    for (int k = 0; k < table.K; ++k) {
        if constexpr (std::is_same_v<R, double>) acc += DD(measure_.atoms[std::size_t(k)].weight) * DD(table.psi(deriv, k));
        else acc += measure_.atoms[std::size_t(k)].weight * table.psi(deriv, k);
    }
    if constexpr (std::is_same_v<R, double>) return to_double(acc);
    else return acc;
}

template <class R>
SmallMat<R> Framework::gram_gamma_t(const std::vector<R>& positions) const {
    const int m = int(positions.size());
    SmallMat<R> g(2 * m, 2 * m);
    std::vector<detail::AtomTable<R>> tables;
    if (measure_.is_discrete()) {
        tables.reserve(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) tables.push_back(detail::build_atom_table<R>(kernel_, measure_, positions[std::size_t(i)], 1));
    }
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int a = 0; a <= 1; ++a) {
                for (int b = 0; b <= 1; ++b) {
                    R v = measure_.is_discrete()
                              ? correlation_tables<R>(a, b, tables[std::size_t(i)], tables[std::size_t(j)])
                              : lebesgue_correlation<R>(a, b, positions[std::size_t(i)], positions[std::size_t(j)]);
                    g(2 * i + a, 2 * j + b) = v;
                }
            }
        }
    }
    return g;
}

template <class R>
SmallMat<R> Framework::gram_F_t(R x0, int k) const {
    check_orders(k, k);
    SmallMat<R> g(k + 1, k + 1);
    if (measure_.is_discrete()) {
        auto table = detail::build_atom_table<R>(kernel_, measure_, x0, k);
        for (int i = 0; i <= k; ++i)
            for (int j = 0; j <= k; ++j) g(i, j) = correlation_tables<R>(i, j, table, table);
    } else {
        for (int i = 0; i <= k; ++i)
            for (int j = 0; j <= k; ++j) g(i, j) = lebesgue_correlation<R>(i, j, x0, x0);
    }
    return g;
}

} // namespace spikecert
