#include "spikecert/framework.hpp"

#include <algorithm>
#include <cmath>

namespace spikecert {

namespace detail {

const std::vector<std::vector<double>>& binomial_table(int n) {
    static thread_local std::vector<std::vector<double>> table = {{1.0}};
    while (int(table.size()) <= n) {
        const auto& prev = table.back();
        std::vector<double> row(prev.size() + 1, 1.0);
        for (std::size_t j = 1; j + 1 < row.size(); ++j) row[j] = prev[j - 1] + prev[j];
        table.push_back(std::move(row));
    }
    return table;
}

} // namespace detail

Framework::Framework(Kernel kernel, SamplingMeasure measure, bool normalized)
    : kernel_(std::move(kernel)), measure_(std::move(measure)), normalized_(normalized) {
    kernel_.validate();
    measure_.validate();
    if (measure_.kind == MeasureKind::LebesgueLine) {
        if (kernel_.family != KernelFamily::Gaussian)
            throw UnsupportedClosedForm("full-line sampling has a closed form for the gaussian kernel only");
        if (normalized_) throw InfiniteMass("cannot normalize against an infinite-mass measure");
    } else {
        for (const auto& a : measure_.atoms) {
            bool ok = kernel_.s_in_domain(a.location);
            // Laplace with normalized atoms admits a sample at s = 0; the
            // normalization costs the measurement that s = 0 would spoil.
            if (!ok && normalized_ && kernel_.family == KernelFamily::Laplace && a.location >= 0.0) ok = true;
            if (!ok) throw DomainViolation("sample location outside the kernel's sample domain");
        }
    }
}

void Framework::check_orders(int k, int l) const {
    if (k < 0 || l < 0 || k > kernel_.max_deriv_order || l > kernel_.max_deriv_order)
        throw DerivOrderUnsupported("correlation derivative order exceeds kernel class");
}

double Framework::correlation(int k, int l, double x, double xp) const {
    return correlation_t<double>(k, l, x, xp);
}

std::vector<double> Framework::forward(const SpikeConfiguration& spikes) const {
    spikes.validate(false);
    if (!measure_.is_discrete())
        throw UnsupportedClosedForm("forward observation vector requires a discrete sampling measure");
    std::vector<double> y(measure_.atoms.size(), 0.0);
    for (std::size_t k = 0; k < measure_.atoms.size(); ++k) {
        DD acc(0.0);
        for (std::size_t i = 0; i < spikes.count(); ++i)
            acc += DD(spikes.amplitudes[i]) * DD(atom_deriv<double>(0, spikes.positions[i], measure_.atoms[k].location));
        y[k] = to_double(acc);
    }
    return y;
}

std::function<double(double)> Framework::forward_profile(const SpikeConfiguration& spikes) const {
    spikes.validate(false);
    Kernel kernel = kernel_;
    SpikeConfiguration sp = spikes;
    return [kernel, sp](double s) {
        double acc = 0.0;
        for (std::size_t i = 0; i < sp.count(); ++i)
            acc += sp.amplitudes[i] * kernel_deriv<double>(kernel, 0, sp.positions[i], s);
        return acc;
    };
}

SmallMat<double> Framework::gram_gamma(const std::vector<double>& positions) const {
    for (std::size_t i = 0; i + 1 < positions.size(); ++i)
        if (!(positions[i] < positions[i + 1])) throw DomainViolation("positions must be strictly increasing");
    return gram_gamma_t<double>(positions);
}

SmallMat<double> Framework::gram_F(double x0, int k) const { return gram_F_t<double>(x0, k); }

double Framework::normalizer(int deriv, double x) const { return normalizer_t<double>(deriv, x); }

double Framework::hilbert_inner(std::span<const double> a, std::span<const double> b) const {
    if (!measure_.is_discrete()) throw UnsupportedClosedForm("observation-space inner product needs discrete samples");
    DD acc(0.0);
    for (std::size_t k = 0; k < measure_.atoms.size(); ++k) acc += DD(measure_.atoms[k].weight) * DD(a[k]) * DD(b[k]);
    return to_double(acc);
}

double Framework::hilbert_norm(std::span<const double> a) const { return std::sqrt(std::max(0.0, hilbert_inner(a, a))); }

double Framework::atom_observation_inner(int d, double x, std::span<const double> y) const {
    if (!measure_.is_discrete()) throw UnsupportedClosedForm("observation-space inner product needs discrete samples");
    DD acc(0.0);
    for (std::size_t k = 0; k < measure_.atoms.size(); ++k)
        acc += DD(measure_.atoms[k].weight) * DD(atom_deriv<double>(d, x, measure_.atoms[k].location)) * DD(y[k]);
    return to_double(acc);
}

Framework normalize(const Framework& fw) { return normalize(fw.kernel(), fw.measure()); }

Framework normalize(Kernel kernel, SamplingMeasure measure) {
    if (!measure.is_discrete()) throw InfiniteMass("cannot normalize against an infinite-mass measure");
    Framework out(std::move(kernel), std::move(measure), true);
    // Positivity probe of N over the sample span, padded; evaluation throws
    // NonPositiveNormalizer lazily if a later query ever sees N <= 0.
    auto [lo, hi] = out.measure().location_span();
    double pad = out.kernel().family == KernelFamily::Gaussian ? 6.0 * out.kernel().sigma : 1.0;
    double a = out.kernel().family == KernelFamily::Laplace ? out.kernel().c : lo - pad;
    double b = hi + pad;
    for (int i = 0; i <= 64; ++i) {
        double x = a + (b - a) * double(i) / 64.0;
        if (!(out.normalizer(0, x) > 0.0)) throw NonPositiveNormalizer("normalizer N(x) must be strictly positive");
    }
    return out;
}

} // namespace spikecert
