#pragma once

#include <utility>
#include <vector>

#include "spikecert/certificate.hpp"
#include "spikecert/determinant.hpp"

namespace spikecert {

struct ScanPolicy {
    int grid_points = 4001;
    // Padding beyond the extremal anchors; < 0 selects the automatic rule
    // (6 sigma beyond anchors and samples for the Gaussian, certified tail
    // bound for the Laplace).
    double pad = -1.0;
    double margin_tol = 1e-7;
    double curvature_tol_rel = 1e-9;
    // Exclusion-ball radius around each anchor; < 0 derives it from the
    // curvature so the quadratic deficit at the ball edge clears margin_tol.
    double excl_radius = -1.0;
    int refine_points = 41;
    double identically_one_tol = 1e-10;
};

enum class FailureReason { None, RankDeficient, CurvatureNonNegative, ExceedsOne, IdenticallyOne };

const char* to_string(FailureReason r);

struct ScanGrid {
    double lo = 0.0;
    double hi = 0.0;
    int uniform_points = 0;
    std::vector<double> points; // uniform grid followed by per-anchor refinements
};

struct CertificateVerdict {
    bool valid = false;
    // eta''(x_i) per anchor; for kind W the single entry is etaW^(2M)(x0)
    // obtained through the determinant identity.
    std::vector<double> curvature;
    // min over off-ball grid points of 1 - eta (signed: 1 - |eta|)
    double global_margin = 0.0;
    ScanGrid grid;
    std::vector<double> grid_eta; // eta at every grid point
    std::vector<double> excl_radii;
    FailureReason failure_reason = FailureReason::None;
    double max_abs_eta_minus_one = 0.0; // over the whole grid
    double gram_condition = 0.0;
    double constraint_residual = 0.0;
};

// Scan interval the verdict certifies: padded anchor hull for the Gaussian,
// [c, tail-bound cutoff] for the Laplace.
std::pair<double, double> scan_interval(const Certificate& cert, const ScanPolicy& policy = {});

CertificateVerdict certify(const Certificate& cert, const ScanPolicy& policy = {});

// Compute + certify, mapping a RankDeficient solve into the verdict.
CertificateVerdict certify_spikes(const Framework& fw, const SpikeConfiguration& spikes,
                                  const ScanPolicy& policy = {}, const SolveOptions& solve = {});
CertificateVerdict certify_signed_spikes(const Framework& fw, const SpikeConfiguration& spikes,
                                         const ScanPolicy& policy = {}, const SolveOptions& solve = {});
CertificateVerdict certify_point(const Framework& fw, double x0, int M, const ScanPolicy& policy = {},
                                 const SolveOptions& solve = {});

} // namespace spikecert
