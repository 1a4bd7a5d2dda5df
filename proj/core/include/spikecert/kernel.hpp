#pragma once

#include <cmath>
#include <string>

#include "spikecert/dd.hpp"
#include "spikecert/errors.hpp"
#include "spikecert/hermite.hpp"

namespace spikecert {

enum class KernelFamily { Gaussian, Laplace };

// Measurement kernel psi(x,s) with closed-form x-derivatives.
//   Gaussian: psi = exp(-((x-s)/sigma)^2), x and s anywhere on the line.
//   Laplace:  psi = exp(-x s), x in [c,+inf) with c >= 0, s in (0,+inf).
struct Kernel {
    KernelFamily family = KernelFamily::Gaussian;
    double sigma = 1.0;      // Gaussian width
    double c = 0.0;          // Laplace x-domain lower bound, c >= 0
    int max_deriv_order = 12;

    static Kernel gaussian(double sigma = 1.0, int max_order = 12);
    static Kernel laplace(double c = 0.0, int max_order = 12);

    void validate() const;

    bool x_in_domain(double x) const;
    // Laplace samples must be strictly positive; s = 0 is admitted only for
    // normalized frameworks (the framework validation relaxes this).
    bool s_in_domain(double s) const;
    double x_lower() const; // -inf for Gaussian
    std::string family_name() const;
};

// d^k/dx^k psi(x,s), exact closed form.
double eval_kernel_deriv(const Kernel& kernel, int k, double x, double s);

template <class R>
R kernel_deriv(const Kernel& kernel, int k, R x, R s) {
    if (kernel.family == KernelFamily::Laplace) {
        R e = exp(-(x * s));
        return powi(-s, k) * e;
    }
    R u = (x - s) / kernel.sigma;
    R e = exp(-(u * u));
    if (k == 0) return e;
    return hermite_aux_eval<R>(k, u) * e / powi(R(kernel.sigma), k);
}

} // namespace spikecert
