#pragma once

#include <vector>

#include "spikecert/framework.hpp"

namespace spikecert {

enum class CertificateKind { V, W, Signed };

struct SolveOptions {
    // Relative singular-value threshold below which the Gram is declared
    // rank deficient, per working precision.
    double rank_tol = 1e-12;
    double extended_rank_tol = 1e-24;
    // Condition estimate beyond which the solve is redone in double-double;
    // routine for Laplace frameworks with M >= 3.
    double dd_condition_threshold = 1e10;
    bool force_extended = false;
};

// Dual precertificate: coefficients of an expansion over correlation atoms.
//   kind V:      eta(t) = sum_i c_{2i} C(t,x_i) + c_{2i+1} d2 C(t,x_i),
//                constraints eta(x_i) = 1, eta'(x_i) = 0.
//   kind Signed: same atoms, constraints eta(x_i) = sign(a_i), eta'(x_i) = 0.
//   kind W:      eta(t) = sum_k c_k d2^k C(t,x0), eta(x0) = 1 and the next
//                2M-1 derivatives vanish at x0.
struct Certificate {
    CertificateKind kind = CertificateKind::V;
    std::vector<double> anchors;   // x_i, or {x0} for kind W
    std::vector<double> targets;   // interpolated values at anchors (1 or sign(a_i))
    int num_spikes = 0;            // M
    std::vector<double> coeffs;
    std::vector<DD> coeffs_dd;     // populated when extended precision was engaged
    bool extended_precision = false;
    double gram_condition = 1.0;
    double constraint_residual = 0.0; // max over anchors of solve residual
    Framework framework;

    int coeff_count() const { return int(coeffs.size()); }
};

Certificate compute_eta_V(const Framework& fw, const SpikeConfiguration& spikes, const SolveOptions& opts = {});
Certificate compute_eta_W(const Framework& fw, double x0, int M, const SolveOptions& opts = {});
Certificate compute_eta_signed(const Framework& fw, const SpikeConfiguration& spikes, const SolveOptions& opts = {});

// eta^(deriv)(t) from the coefficient expansion and correlation partials.
double eval_certificate(const Certificate& cert, int deriv, double t);

// Reusable evaluator: caches the anchor-side atom tables so grid scans only
// build the moving-point table per query.
template <class R>
class CertificateEvaluator {
  public:
    explicit CertificateEvaluator(const Certificate& cert);
    R operator()(int deriv, R t) const;

  private:
    const Certificate* cert_;
    std::vector<R> coeffs_;
    int anchor_order_ = 1;
    std::vector<detail::AtomTable<R>> anchor_tables_;
};

extern template class CertificateEvaluator<double>;
extern template class CertificateEvaluator<DD>;

} // namespace spikecert
