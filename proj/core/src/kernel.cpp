#include "spikecert/kernel.hpp"

#include <cmath>
#include <limits>

namespace spikecert {

Kernel Kernel::gaussian(double sigma, int max_order) {
    Kernel k;
    k.family = KernelFamily::Gaussian;
    k.sigma = sigma;
    k.max_deriv_order = max_order;
    k.validate();
    return k;
}

Kernel Kernel::laplace(double c, int max_order) {
    Kernel k;
    k.family = KernelFamily::Laplace;
    k.c = c;
    k.max_deriv_order = max_order;
    k.validate();
    return k;
}

void Kernel::validate() const {
    if (family == KernelFamily::Gaussian) {
        if (!(sigma > 0.0)) throw DomainViolation("gaussian kernel requires sigma > 0");
    } else {
        if (!(c >= 0.0)) throw DomainViolation("laplace kernel requires x-domain lower bound c >= 0");
    }
    if (max_deriv_order < 2) throw DerivOrderUnsupported("kernel regularity class must be at least 2");
    if (max_deriv_order > hermite_aux_max_order())
        throw DerivOrderUnsupported("kernel derivative order exceeds the exact-coefficient limit");
}

bool Kernel::x_in_domain(double x) const {
    if (!std::isfinite(x)) return false;
    return family == KernelFamily::Gaussian ? true : x >= c;
}

bool Kernel::s_in_domain(double s) const {
    if (!std::isfinite(s)) return false;
    return family == KernelFamily::Gaussian ? true : s > 0.0;
}

double Kernel::x_lower() const {
    return family == KernelFamily::Gaussian ? -std::numeric_limits<double>::infinity() : c;
}

std::string Kernel::family_name() const {
    return family == KernelFamily::Gaussian ? "gaussian" : "laplace";
}

double eval_kernel_deriv(const Kernel& kernel, int k, double x, double s) {
    if (k < 0 || k > kernel.max_deriv_order)
        throw DerivOrderUnsupported("derivative order " + std::to_string(k) + " exceeds kernel class " +
                                    std::to_string(kernel.max_deriv_order));
    if (!kernel.x_in_domain(x)) throw DomainViolation("x outside kernel domain");
    if (!kernel.s_in_domain(s)) throw DomainViolation("s outside sample domain");
    return kernel_deriv<double>(kernel, k, x, s);
}

} // namespace spikecert
