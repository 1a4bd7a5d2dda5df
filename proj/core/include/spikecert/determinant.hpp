#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "spikecert/certificate.hpp"
#include "spikecert/framework.hpp"

namespace spikecert {

struct DeterminantOptions {
    // Switch radius to the continuous-extension formula, as a fraction of
    // the reference span; grows with the vanishing order so the rescaled
    // quotient never loses the sign digits.
    double delta_switch_rel = 1e-4;
    // Pivot-growth estimate beyond which the elimination is redone in
    // double-double.
    double growth_threshold = 1e8;
    bool force_extended = false;
    // Cap on the number of increasing sample tuples the Cauchy-Binet
    // validation may enumerate.
    std::size_t tuple_budget = 200000;
    // Reference span for the switch radius; <= 0 derives it from the
    // anchors and samples.
    double span = 0.0;
};

// Rescaled bordered determinant D_V(t) in the atom family
// (1, C(.,x_1), d2 C(.,x_1), ..., C(.,x_M), d2 C(.,x_M)); strictly positive
// on the whole domain exactly when the source condition holds. Near anchors
// the continuous extension (second-derivative row) replaces the raw
// quotient.
double det_V(const Framework& fw, const std::vector<double>& positions, double t,
             const DeterminantOptions& opts = {});

// Same in the confluent family (1, C(.,x0), d2 C(.,x0), ..., d2^{2M-1} C(.,x0))
// with prefactor (2M)!/(t-x0)^{2M}. At t = x0 equals -etaW^(2M)(x0) det(F*F).
double det_W(const Framework& fw, double x0, int M, double t, const DeterminantOptions& opts = {});

// Signed variants: first-row border +1 / -1, anchor borders sign(a_i),
// rescaled over the matching sign set. Support stability of the signed
// problem needs D+ > 0 and D- < 0 everywhere.
std::pair<double, double> det_V_signed(const Framework& fw, const SpikeConfiguration& spikes, double t,
                                       const DeterminantOptions& opts = {});

// Determinants of the Gram matrices, evaluated in double-double.
double det_gram_gamma(const Framework& fw, const std::vector<double>& positions);
double det_gram_F(const Framework& fw, double x0, int k);

// Relative residual between the bordered determinant and
// -eta''(x_i) det(Gram) (or -etaW^(2M)(x0) det(F*F)), the two sides computed
// by independent routes.
double cramer_residual(const Framework& fw, const std::vector<double>& positions, int anchor_index,
                       const SolveOptions& solve_opts = {});
double cramer_residual_W(const Framework& fw, double x0, int M, const SolveOptions& solve_opts = {});

// Sample-indexed building blocks of the Cauchy-Binet decompositions.
// det_A: 2M x 2M, rows by samples, columns (psi(x_i,.), d1 psi(x_i,.)) or
// (d1^j psi(x0,.))_{j<2M}.
double det_A(const Kernel& kernel, const std::vector<double>& positions, const std::vector<double>& samples);
double det_A(const Kernel& kernel, double x0, int M, const std::vector<double>& samples);
// Normalized variants carry a leading all-ones column and 2M+1 samples.
double det_A_normalized(const Kernel& kernel, const std::vector<double>& positions,
                        const std::vector<double>& samples);
double det_A_normalized(const Kernel& kernel, double x0, int M, const std::vector<double>& samples);

// det_B: bordered (2M+1) x (2M+1) with first column (1,1,0,...,1,0)^T and
// prefactor 1/prod (t-x_i)^2 (1/(t-x0)^{2M} for the confluent variant),
// extended by continuity at the anchors. With s0_augment the constant
// border column is replaced by the atom profile at s0.
double det_B(const Kernel& kernel, const std::vector<double>& positions, double t,
             const std::vector<double>& samples, std::optional<double> s0_augment = {},
             const DeterminantOptions& opts = {});
double det_B(const Kernel& kernel, double x0, int M, double t, const std::vector<double>& samples,
             std::optional<double> s0_augment = {}, const DeterminantOptions& opts = {});

struct CauchyBinetResult {
    double gram_direct = 0.0;
    double gram_tuple = 0.0;
    double gram_residual = 0.0;
    double d_direct = 0.0;
    double d_tuple = 0.0;
    double d_residual = 0.0;
    std::size_t tuples = 0;
};

// Validates det(Gram) against the tuple sum of weighted squared det_A, and
// (when t is given) D(t) against the det_A * det_B tuple sum.
CauchyBinetResult cauchy_binet_check(const Framework& fw, const std::vector<double>& positions,
                                     std::optional<double> t = {}, const DeterminantOptions& opts = {});
CauchyBinetResult cauchy_binet_check(const Framework& fw, double x0, int M, std::optional<double> t = {},
                                     const DeterminantOptions& opts = {});

// N-weighted bordered determinant of the normalization chain: first column
// (N(t), N(x_1), N'(x_1), ..., N(x_M), N'(x_M)), remaining columns the raw
// correlation atoms. Equals the normalized bordered determinant times
// N(t) prod_j N(x_j)^4, and expands over (2M+1)-tuples as
// sum w D_A_normalized * det_B(s0-augmented, unscaled).
double normalized_border_det(const Framework& raw_fw, const std::vector<double>& positions, double t);

enum class DetReportKind { V, W, SignedPlus, SignedMinus };

struct DeterminantReport {
    DetReportKind kind = DetReportKind::V;
    std::vector<double> grid_t;
    std::vector<double> grid_d;
    double min_value = 0.0;
    double argmin = 0.0;
    std::vector<double> extension_points; // D at each anchor via the extension rows
    std::vector<double> cramer_residuals; // per anchor
    bool has_cauchy_binet = false;
    double cb_gram_residual = 0.0;
    double cb_d_residual_max = 0.0;
};

DeterminantReport determinant_report(const Framework& fw, const std::vector<double>& positions, double lo,
                                     double hi, int grid_points, const DeterminantOptions& opts = {});
DeterminantReport determinant_report_W(const Framework& fw, double x0, int M, double lo, double hi,
                                       int grid_points, const DeterminantOptions& opts = {});

} // namespace spikecert
