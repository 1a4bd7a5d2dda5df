#include "spikecert/certificate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace spikecert {

namespace {

Eigen::MatrixXd to_eigen(const SmallMat<double>& m) {
    Eigen::MatrixXd out(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) out(i, j) = m(i, j);
    return out;
}

struct GramSolve {
    std::vector<double> coeffs;
    std::vector<DD> coeffs_dd;
    bool extended = false;
    double condition = 1.0;
};

// Rank-revealing solve: SVD in double; when the condition estimate crosses
// the threshold, reassemble and resolve in double-double with full-pivot
// rank detection.
GramSolve solve_gram(const SmallMat<double>& gram_d, const std::function<SmallMat<DD>()>& gram_dd_builder,
                     const std::vector<double>& rhs, const SolveOptions& opts) {
    GramSolve out;
    const int n = gram_d.rows;
    Eigen::MatrixXd g = to_eigen(gram_d);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) b(i) = rhs[std::size_t(i)];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(n - 1);
    out.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    const bool extended = opts.force_extended || !(out.condition < opts.dd_condition_threshold);
    if (!extended) {
        if (!(smin > opts.rank_tol * smax)) throw RankDeficient("gram matrix numerically rank deficient");
        Eigen::VectorXd x = svd.solve(b);
        out.coeffs.assign(x.data(), x.data() + n);
        return out;
    }
    SmallMat<DD> gd = gram_dd_builder();
    std::vector<DD> bd(rhs.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) bd[i] = DD(rhs[i]);
    std::vector<DD> xd;
    PivotInfo<DD> info;
    bool ok = solve_full_pivot<DD>(gd, bd, xd, &info);
    if (!ok || !(to_double(info.min_pivot) > opts.extended_rank_tol * to_double(info.max_pivot)))
        throw RankDeficient("gram matrix rank deficient in extended precision");
    // one refinement pass tightens the forward error toward kappa*eps with a
    // unit constant; the cross-identity residuals notice the difference
    for (int pass = 0; pass < 2; ++pass) {
        std::vector<DD> resid(bd.size());
        for (int i = 0; i < n; ++i) {
            DD acc = bd[static_cast<std::size_t>(i)];
            for (int j = 0; j < n; ++j) acc -= gd(i, j) * xd[static_cast<std::size_t>(j)];
            resid[static_cast<std::size_t>(i)] = acc;
        }
        std::vector<DD> corr;
        if (!solve_full_pivot<DD>(gd, resid, corr)) break;
        for (int i = 0; i < n; ++i) xd[static_cast<std::size_t>(i)] += corr[static_cast<std::size_t>(i)];
    }
    out.extended = true;
    out.coeffs_dd = std::move(xd);
    out.coeffs.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.coeffs[std::size_t(i)] = to_double(out.coeffs_dd[std::size_t(i)]);
    return out;
}

void check_interior(const Framework& fw, double x) {
    const Kernel& k = fw.kernel();
    if (!k.x_in_domain(x) || (k.family == KernelFamily::Laplace && !(x > k.c)))
        throw DomainViolation("anchor position must lie in the interior of the source domain");
}

double measure_residual(const Certificate& cert) {
    double worst = 0.0;
    if (cert.extended_precision) {
        CertificateEvaluator<DD> eval(cert);
        for (std::size_t i = 0; i < cert.anchors.size(); ++i) {
            DD t(cert.anchors[i]);
            if (cert.kind == CertificateKind::W) {
                int vanish = 2 * cert.num_spikes - 1;
                worst = std::max(worst, std::fabs(to_double(eval(0, t) - DD(1.0))));
                for (int d = 1; d <= vanish; ++d) worst = std::max(worst, std::fabs(to_double(eval(d, t))));
            } else {
                worst = std::max(worst, std::fabs(to_double(eval(0, t) - DD(cert.targets[i]))));
                worst = std::max(worst, std::fabs(to_double(eval(1, t))));
            }
        }
    } else {
        CertificateEvaluator<double> eval(cert);
        for (std::size_t i = 0; i < cert.anchors.size(); ++i) {
            double t = cert.anchors[i];
            if (cert.kind == CertificateKind::W) {
                int vanish = 2 * cert.num_spikes - 1;
                worst = std::max(worst, std::fabs(eval(0, t) - 1.0));
                for (int d = 1; d <= vanish; ++d) worst = std::max(worst, std::fabs(eval(d, t)));
            } else {
                worst = std::max(worst, std::fabs(eval(0, t) - cert.targets[i]));
                worst = std::max(worst, std::fabs(eval(1, t)));
            }
        }
    }
    return worst;
}

Certificate build_gamma_certificate(const Framework& fw, const SpikeConfiguration& spikes,
                                    std::vector<double> targets, CertificateKind kind, const SolveOptions& opts) {
    const int m = int(spikes.count());
    for (double x : spikes.positions) check_interior(fw, x);
    if (fw.measure().is_discrete() && int(fw.measure().size()) < 2 * m)
        throw RankDeficient("need at least 2M sample atoms for the gamma gram to have full rank");
    SmallMat<double> gram = fw.gram_gamma(spikes.positions);
    std::vector<double> rhs(std::size_t(2 * m), 0.0);
    for (int i = 0; i < m; ++i) rhs[std::size_t(2 * i)] = targets[std::size_t(i)];
    auto dd_builder = [&fw, &spikes]() {
        std::vector<DD> pos(spikes.positions.begin(), spikes.positions.end());
        return fw.gram_gamma_t<DD>(pos);
    };
    GramSolve sol = solve_gram(gram, dd_builder, rhs, opts);
    Certificate cert{kind,
                     spikes.positions,
                     std::move(targets),
                     m,
                     std::move(sol.coeffs),
                     std::move(sol.coeffs_dd),
                     sol.extended,
                     sol.condition,
                     0.0,
                     fw};
    cert.constraint_residual = measure_residual(cert);
    return cert;
}

} // namespace

Certificate compute_eta_V(const Framework& fw, const SpikeConfiguration& spikes, const SolveOptions& opts) {
    spikes.validate(true);
    return build_gamma_certificate(fw, spikes, std::vector<double>(spikes.count(), 1.0), CertificateKind::V, opts);
}

Certificate compute_eta_signed(const Framework& fw, const SpikeConfiguration& spikes, const SolveOptions& opts) {
    spikes.validate(false);
    std::vector<double> targets(spikes.count());
    for (std::size_t i = 0; i < spikes.count(); ++i) {
        if (spikes.amplitudes[i] == 0.0) throw DomainViolation("signed certificate requires nonzero amplitudes");
        targets[i] = spikes.amplitudes[i] > 0.0 ? 1.0 : -1.0;
    }
    return build_gamma_certificate(fw, spikes, std::move(targets), CertificateKind::Signed, opts);
}

Certificate compute_eta_W(const Framework& fw, double x0, int M, const SolveOptions& opts) {
    if (M < 1) throw Error("eta_W needs M >= 1");
    check_interior(fw, x0);
    if (fw.kernel().max_deriv_order < 2 * M)
        throw DerivOrderUnsupported("eta_W requires kernel regularity of order 2M");
    if (fw.measure().is_discrete() && int(fw.measure().size()) < 2 * M)
        throw RankDeficient("need at least 2M sample atoms for F_{2M-1} to have full rank");
    SmallMat<double> gram = fw.gram_F(x0, 2 * M - 1);
    std::vector<double> rhs(std::size_t(2 * M), 0.0);
    rhs[0] = 1.0;
    auto dd_builder = [&fw, x0, M]() { return fw.gram_F_t<DD>(DD(x0), 2 * M - 1); };
    GramSolve sol = solve_gram(gram, dd_builder, rhs, opts);
    Certificate cert{CertificateKind::W,
                     {x0},
                     {1.0},
                     M,
                     std::move(sol.coeffs),
                     std::move(sol.coeffs_dd),
                     sol.extended,
                     sol.condition,
                     0.0,
                     fw};
    cert.constraint_residual = measure_residual(cert);
    return cert;
}

template <class R>
CertificateEvaluator<R>::CertificateEvaluator(const Certificate& cert) : cert_(&cert) {
    coeffs_.reserve(cert.coeffs.size());
    if constexpr (std::is_same_v<R, DD>) {
        if (cert.extended_precision)
            coeffs_.assign(cert.coeffs_dd.begin(), cert.coeffs_dd.end());
        else
            for (double c : cert.coeffs) coeffs_.push_back(DD(c));
    } else {
        coeffs_.assign(cert.coeffs.begin(), cert.coeffs.end());
    }
    anchor_order_ = cert.kind == CertificateKind::W ? 2 * cert.num_spikes - 1 : 1;
    const Framework& fw = cert.framework;
    if (fw.measure().is_discrete()) {
        for (double x : cert.anchors)
            anchor_tables_.push_back(detail::build_atom_table<R>(fw.kernel(), fw.measure(), R(x), anchor_order_));
    }
}

template <class R>
R CertificateEvaluator<R>::operator()(int deriv, R t) const {
    const Framework& fw = cert_->framework;
    R acc(0.0);
    if (fw.measure().is_discrete()) {
        auto tt = detail::build_atom_table<R>(fw.kernel(), fw.measure(), t, deriv);
        if (cert_->kind == CertificateKind::W) {
            for (std::size_t k = 0; k < coeffs_.size(); ++k)
                acc += coeffs_[k] * fw.correlation_tables<R>(deriv, int(k), tt, anchor_tables_[0]);
        } else {
            for (std::size_t i = 0; i < cert_->anchors.size(); ++i) {
                acc += coeffs_[2 * i] * fw.correlation_tables<R>(deriv, 0, tt, anchor_tables_[i]);
                acc += coeffs_[2 * i + 1] * fw.correlation_tables<R>(deriv, 1, tt, anchor_tables_[i]);
            }
        }
    } else {
        if (cert_->kind == CertificateKind::W) {
            for (std::size_t k = 0; k < coeffs_.size(); ++k)
                acc += coeffs_[k] * fw.correlation_t<R>(deriv, int(k), t, R(cert_->anchors[0]));
        } else {
            for (std::size_t i = 0; i < cert_->anchors.size(); ++i) {
                R xi(cert_->anchors[i]);
                acc += coeffs_[2 * i] * fw.correlation_t<R>(deriv, 0, t, xi);
                acc += coeffs_[2 * i + 1] * fw.correlation_t<R>(deriv, 1, t, xi);
            }
        }
    }
    return acc;
}

template class CertificateEvaluator<double>;
template class CertificateEvaluator<DD>;

double eval_certificate(const Certificate& cert, int deriv, double t) {
    if (deriv < 0 || deriv > cert.framework.kernel().max_deriv_order)
        throw DerivOrderUnsupported("certificate derivative order exceeds kernel class");
    if (!cert.framework.kernel().x_in_domain(t)) throw DomainViolation("evaluation point outside source domain");
    if (cert.extended_precision) {
        CertificateEvaluator<DD> eval(cert);
        return to_double(eval(deriv, DD(t)));
    }
    CertificateEvaluator<double> eval(cert);
    return eval(deriv, t);
}

} // namespace spikecert
