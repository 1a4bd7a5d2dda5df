#include "spikecert/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spikecert {

const char* to_string(FailureReason r) {
    switch (r) {
        case FailureReason::None: return "none";
        case FailureReason::RankDeficient: return "rank_deficient";
        case FailureReason::CurvatureNonNegative: return "curvature_nonnegative";
        case FailureReason::ExceedsOne: return "exceeds_one";
        case FailureReason::IdenticallyOne: return "identically_one";
    }
    return "unknown";
}

namespace {

// Certified decay bound for a Laplace certificate: |eta(t)| is dominated by
// sum_j w_j e^{-t s_j} F_j with per-sample factors F_j collecting the
// coefficient magnitudes, so the scan may stop once the bound clears the
// margin.
double laplace_tail_bound(const Certificate& cert, double t) {
    const auto& atoms = cert.framework.measure().atoms;
    const auto& c = cert.coeffs;
    double bound = 0.0;
    for (const auto& a : atoms) {
        double f = 0.0;
        if (cert.kind == CertificateKind::W) {
            double x0 = cert.anchors[0];
            double p = 1.0;
            for (std::size_t k = 0; k < c.size(); ++k) {
                f += std::fabs(c[k]) * p;
                p *= a.location;
            }
            f *= std::exp(-x0 * a.location);
        } else {
            for (std::size_t i = 0; i < cert.anchors.size(); ++i)
                f += (std::fabs(c[2 * i]) + std::fabs(c[2 * i + 1]) * a.location) * std::exp(-cert.anchors[i] * a.location);
        }
        bound += a.weight * std::exp(-t * a.location) * f;
    }
    return bound;
}

// On a normalized framework, eta(t) = sum_k theta_k(t) p(s_k) with positive
// weights theta summing to one, where p is the dual vector. The weights
// concentrate on the slowest-decaying sample as t leaves the sample hull, so
// |eta| is certified below 1 - margin once the off-dominant mass is small.
double dual_vector_at_sample(const Certificate& cert, double s) {
    const Framework& fw = cert.framework;
    double acc = 0.0;
    if (cert.kind == CertificateKind::W) {
        for (std::size_t j = 0; j < cert.coeffs.size(); ++j)
            acc += cert.coeffs[j] * fw.atom_deriv<double>(int(j), cert.anchors[0], s);
    } else {
        for (std::size_t i = 0; i < cert.anchors.size(); ++i) {
            acc += cert.coeffs[2 * i] * fw.atom_deriv<double>(0, cert.anchors[i], s);
            acc += cert.coeffs[2 * i + 1] * fw.atom_deriv<double>(1, cert.anchors[i], s);
        }
    }
    return acc;
}

double normalized_tail_cutoff(const Certificate& cert, bool right, double start, double margin) {
    const Framework& fw = cert.framework;
    const auto& atoms = fw.measure().atoms;
    const std::size_t K = atoms.size();
    const std::size_t kstar = right && fw.kernel().family == KernelFamily::Gaussian ? K - 1 : 0;
    std::vector<double> p(K);
    for (std::size_t k = 0; k < K; ++k) p[k] = dual_vector_at_sample(cert, atoms[k].location);
    double room = 1.0 - margin - std::fabs(p[kstar]);
    double fallback_span = std::fabs(atoms.back().location - atoms.front().location) +
                           std::fabs(cert.anchors.back() - cert.anchors.front()) + 1.0;
    if (!(room > 0.0)) return start + (right ? 4.0 : -4.0) * fallback_span;
    double sstar = atoms[kstar].location;
    double sigma2 = fw.kernel().sigma * fw.kernel().sigma;
    auto off_mass = [&](double t) {
        double b = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            if (k == kstar) continue;
            double expo;
            if (fw.kernel().family == KernelFamily::Laplace) {
                expo = -t * (atoms[k].location - sstar);
            } else if (right) {
                expo = -(sstar - atoms[k].location) * (2.0 * t - atoms[k].location - sstar) / sigma2;
            } else {
                expo = -(atoms[k].location - sstar) * (atoms[k].location + sstar - 2.0 * t) / sigma2;
            }
            b += (atoms[k].weight / atoms[kstar].weight) * std::exp(std::min(expo, 200.0)) *
                 std::fabs(p[k] - p[kstar]);
        }
        return b;
    };
    double t = right ? std::max(start, atoms.back().location) + 1.0 : std::min(start, atoms.front().location) - 1.0;
    double step = 1.0;
    for (int it = 0; it < 80 && off_mass(t) > 0.5 * room; ++it) {
        t += right ? step : -step;
        step *= 2.0;
        if (std::fabs(t) > 1e5) break;
    }
    return t;
}

} // namespace

std::pair<double, double> scan_interval(const Certificate& cert, const ScanPolicy& policy) {
    const Framework& fw = cert.framework;
    double alo = cert.anchors.front(), ahi = cert.anchors.back();
    for (double x : cert.anchors) { alo = std::min(alo, x); ahi = std::max(ahi, x); }
    if (policy.pad >= 0.0) {
        double lo = alo - policy.pad, hi = ahi + policy.pad;
        if (fw.kernel().family == KernelFamily::Laplace) lo = std::max(lo, fw.kernel().c);
        return {lo, hi};
    }
    if (fw.normalized()) {
        // clamp to where the normalizer stays representable
        auto [slo, shi] = fw.measure().location_span();
        if (fw.kernel().family == KernelFamily::Gaussian) {
            double horizon = 20.0 * fw.kernel().sigma;
            double lo = normalized_tail_cutoff(cert, false, std::min(alo, slo), policy.margin_tol);
            double hi = normalized_tail_cutoff(cert, true, std::max(ahi, shi), policy.margin_tol);
            return {std::max(lo, slo - horizon), std::min(hi, shi + horizon)};
        }
        double hi = normalized_tail_cutoff(cert, true, std::max(ahi, shi), policy.margin_tol);
        double smin = std::max(fw.measure().atoms.front().location, 1e-6);
        return {fw.kernel().c, std::min(hi, fw.kernel().c + 600.0 / smin)};
    }
    if (fw.kernel().family == KernelFamily::Gaussian) {
        double lo = alo, hi = ahi;
        if (fw.measure().is_discrete()) {
            auto [slo, shi] = fw.measure().location_span();
            lo = std::min(lo, slo);
            hi = std::max(hi, shi);
        }
        double pad = 6.0 * fw.kernel().sigma;
        return {lo - pad, hi + pad};
    }
    double lo = fw.kernel().c;
    double hi = ahi + 1.0;
    while (laplace_tail_bound(cert, hi) >= policy.margin_tol && hi < 1e6) hi *= 2.0;
    return {lo, hi};
}

namespace {

template <class R>
std::vector<double> evaluate_grid(const Certificate& cert, const std::vector<double>& points) {
    CertificateEvaluator<R> eval(cert);
    std::vector<double> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = to_double(eval(0, R(points[i])));
    return out;
}

template <class R>
double eval_one(const Certificate& cert, int deriv, double t) {
    CertificateEvaluator<R> eval(cert);
    return to_double(eval(deriv, R(t)));
}

double domain_clamp(const Framework& fw, double t) {
    if (fw.kernel().family == KernelFamily::Laplace) return std::max(t, fw.kernel().c);
    return t;
}

double window_clamp(const Framework& fw, double lo, double hi, double t) {
    return domain_clamp(fw, std::clamp(t, lo, hi));
}

} // namespace

CertificateVerdict certify(const Certificate& cert, const ScanPolicy& policy) {
    const Framework& fw = cert.framework;
    const bool ext = cert.extended_precision;
    const bool is_w = cert.kind == CertificateKind::W;
    const bool is_signed = cert.kind == CertificateKind::Signed;
    CertificateVerdict v;
    v.gram_condition = cert.gram_condition;
    v.constraint_residual = cert.constraint_residual;

    // (1) curvature at the anchors; kind W takes the 2M-th derivative sign
    // from the determinant identity rather than order-2M correlation partials
    if (is_w) {
        int m = cert.num_spikes;
        double dw = det_W(fw, cert.anchors[0], m, cert.anchors[0]);
        double detf = det_gram_F(fw, cert.anchors[0], 2 * m - 1);
        v.curvature.push_back(-dw / detf);
    } else {
        for (double x : cert.anchors)
            v.curvature.push_back(ext ? eval_one<DD>(cert, 2, x) : eval_one<double>(cert, 2, x));
    }
    double curv_scale = 0.0;
    for (double q : v.curvature) curv_scale = std::max(curv_scale, std::fabs(q));
    const double curvature_tol = policy.curvature_tol_rel * curv_scale;

    // (2) exclusion radii: solve the quadratic (order-2M for kind W) deficit
    // model so the ball edge clears 4x margin_tol, capped by the anchor gaps
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < cert.anchors.size(); ++i)
        min_gap = std::min(min_gap, cert.anchors[i + 1] - cert.anchors[i]);
    auto [lo, hi] = scan_interval(cert, policy);
    double span = hi - lo;
    if (!std::isfinite(min_gap)) min_gap = span;
    for (std::size_t i = 0; i < cert.anchors.size(); ++i) {
        double r;
        if (policy.excl_radius >= 0.0) {
            r = policy.excl_radius;
        } else {
            double q = std::max(std::fabs(v.curvature[std::min(i, v.curvature.size() - 1)]), 1e-300);
            if (is_w) {
                int m = cert.num_spikes;
                double fact = 1.0;
                for (int j = 2; j <= 2 * m; ++j) fact *= double(j);
                r = std::pow(8.0 * policy.margin_tol * fact / q, 1.0 / double(2 * m));
            } else {
                r = std::sqrt(8.0 * policy.margin_tol / q);
            }
            r = std::clamp(r, 1e-6 * span, std::min(0.45 * min_gap, 0.25 * span));
        }
        v.excl_radii.push_back(r);
    }

    // (3) scan grid: uniform points plus refinements around each anchor
    v.grid.lo = lo;
    v.grid.hi = hi;
    v.grid.uniform_points = policy.grid_points;
    auto& pts = v.grid.points;
    pts.reserve(std::size_t(policy.grid_points) + cert.anchors.size() * std::size_t(policy.refine_points));
    for (int i = 0; i < policy.grid_points; ++i)
        pts.push_back(policy.grid_points == 1 ? lo : lo + span * double(i) / double(policy.grid_points - 1));
    for (std::size_t i = 0; i < cert.anchors.size(); ++i) {
        double r = v.excl_radii[i];
        for (int j = 0; j < policy.refine_points; ++j) {
            double t = cert.anchors[i] - 4.0 * r + 8.0 * r * double(j) / double(policy.refine_points - 1);
            pts.push_back(window_clamp(fw, lo, hi, t));
        }
    }
    v.grid_eta = ext ? evaluate_grid<DD>(cert, pts) : evaluate_grid<double>(cert, pts);

    // (4) identically-one detection over the whole grid
    double max_dev = 0.0;
    for (double e : v.grid_eta) max_dev = std::max(max_dev, std::fabs(e - 1.0));
    v.max_abs_eta_minus_one = max_dev;
    if (!is_signed && max_dev <= policy.identically_one_tol) {
        v.valid = false;
        v.failure_reason = FailureReason::IdenticallyOne;
        v.global_margin = 0.0;
        return v;
    }

    // (5) curvature verdict: anchors in the positive set need eta'' < 0,
    // negative-target anchors of the signed variant need eta'' > 0
    bool curvature_ok = true;
    for (std::size_t i = 0; i < v.curvature.size(); ++i) {
        double target = is_signed ? cert.targets[i] : 1.0;
        if (!(target * v.curvature[i] < -curvature_tol)) curvature_ok = false;
    }

    // (6) global margin outside the exclusion balls
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double dmin = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < cert.anchors.size(); ++a)
            dmin = std::min(dmin, std::fabs(pts[i] - cert.anchors[a]) / std::max(v.excl_radii[a], 1e-300));
        if (dmin < 1.0) continue;
        double e = v.grid_eta[i];
        margin = std::min(margin, is_signed ? 1.0 - std::fabs(e) : 1.0 - e);
    }
    v.global_margin = margin;
    bool global_ok = margin > policy.margin_tol;

    // (7) near field: inside each ball the deficit must follow the local
    // curvature model, checked at the ball edges and refinement points
    bool near_ok = true;
    const double slack = std::max(1e-12, 4.0 * cert.constraint_residual);
    auto near_model_ok = [&](std::size_t anchor, double t, double e) {
        double d = t - cert.anchors[anchor];
        double target = is_signed ? cert.targets[anchor] : 1.0;
        double q = std::fabs(v.curvature[std::min(anchor, v.curvature.size() - 1)]);
        double deficit;
        if (is_w) {
            int m = cert.num_spikes;
            double fact = 1.0;
            for (int j = 2; j <= 2 * m; ++j) fact *= double(j);
            deficit = q / (2.0 * fact) * std::pow(std::fabs(d), double(2 * m));
        } else {
            deficit = 0.25 * q * d * d;
        }
        return target * e <= 1.0 - deficit + slack;
    };
    for (std::size_t a = 0; a < cert.anchors.size(); ++a) {
        double r = v.excl_radii[a];
        for (double edge : {cert.anchors[a] - r, cert.anchors[a] + r}) {
            double t = window_clamp(fw, lo, hi, edge);
            double e = ext ? eval_one<DD>(cert, 0, t) : eval_one<double>(cert, 0, t);
            if (!near_model_ok(a, t, e)) near_ok = false;
        }
    }
    for (std::size_t i = std::size_t(policy.grid_points); i < pts.size(); ++i) {
        std::size_t a = (i - std::size_t(policy.grid_points)) / std::size_t(policy.refine_points);
        if (std::fabs(pts[i] - cert.anchors[a]) < v.excl_radii[a]) {
            if (!near_model_ok(a, pts[i], v.grid_eta[i])) near_ok = false;
        }
    }

    if (!curvature_ok) {
        v.valid = false;
        v.failure_reason = FailureReason::CurvatureNonNegative;
    } else if (!global_ok || !near_ok) {
        v.valid = false;
        v.failure_reason = FailureReason::ExceedsOne;
    } else {
        v.valid = true;
        v.failure_reason = FailureReason::None;
    }
    return v;
}

namespace {

CertificateVerdict rank_deficient_verdict(double condition) {
    CertificateVerdict v;
    v.valid = false;
    v.failure_reason = FailureReason::RankDeficient;
    v.gram_condition = condition;
    return v;
}

} // namespace

CertificateVerdict certify_spikes(const Framework& fw, const SpikeConfiguration& spikes, const ScanPolicy& policy,
                                  const SolveOptions& solve) {
    try {
        return certify(compute_eta_V(fw, spikes, solve), policy);
    } catch (const RankDeficient&) {
        return rank_deficient_verdict(std::numeric_limits<double>::infinity());
    }
}

CertificateVerdict certify_signed_spikes(const Framework& fw, const SpikeConfiguration& spikes,
                                         const ScanPolicy& policy, const SolveOptions& solve) {
    try {
        return certify(compute_eta_signed(fw, spikes, solve), policy);
    } catch (const RankDeficient&) {
        return rank_deficient_verdict(std::numeric_limits<double>::infinity());
    }
}

CertificateVerdict certify_point(const Framework& fw, double x0, int M, const ScanPolicy& policy,
                                 const SolveOptions& solve) {
    try {
        return certify(compute_eta_W(fw, x0, M, solve), policy);
    } catch (const RankDeficient&) {
        return rank_deficient_verdict(std::numeric_limits<double>::infinity());
    }
}

} // namespace spikecert
