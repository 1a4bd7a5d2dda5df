// Acceptance suite: one check per advertised guarantee, each printed as a
// single pass/fail line. Exits with the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "spikecert/determinant.hpp"
#include "spikecert/normalization.hpp"
#include "spikecert/scan.hpp"
#include "spikecert/solver.hpp"

using namespace spikecert;

namespace {

int g_failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(int criterion, bool pass, const std::string& detail, double seconds) {
    std::printf("[%s] criterion %d: %s (%.1fs)\n", pass ? "PASS" : "FAIL", criterion, detail.c_str(), seconds);
    if (!pass) ++g_failures;
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2e", v);
    return buf;
}

std::vector<double> draw_increasing(std::mt19937_64& rng, int n, double lo, double hi, double min_gap) {
    std::uniform_real_distribution<double> u(lo, hi);
    while (true) {
        std::vector<double> v(static_cast<std::size_t>(n));
        for (auto& x : v) x = u(rng);
        std::sort(v.begin(), v.end());
        bool ok = true;
        for (int i = 0; i + 1 < n; ++i)
            if (v[std::size_t(i + 1)] - v[std::size_t(i)] < min_gap) ok = false;
        if (ok) return v;
    }
}

struct LaplaceConfig {
    Framework fw;
    SpikeConfiguration spikes;
};

// Criterion-1 corpus: M in {1,2,3}, K = 2M samples in (0.2,5), positions in
// (0.3,4). Draws are separation-rejected (gap >= 0.15 for spikes, 0.1 for
// samples) to keep the margins meaningfully testable at margin_tol.
std::vector<LaplaceConfig> laplace_corpus(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<LaplaceConfig> out;
    for (int i = 0; i < count; ++i) {
        int m = 1 + i % 3;
        auto xs = draw_increasing(rng, m, 0.3, 4.0, 0.15);
        auto ss = draw_increasing(rng, 2 * m, 0.2, 5.0, 0.1);
        out.push_back({Framework(Kernel::laplace(), SamplingMeasure::discrete_locations(ss)),
                       SpikeConfiguration::make(xs, std::vector<double>(std::size_t(m), 1.0))});
    }
    return out;
}

struct GaussConfig {
    Framework fw;
    SpikeConfiguration spikes;
};

std::vector<GaussConfig> gaussian_corpus(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<GaussConfig> out;
    while (int(out.size()) < count) {
        int m = 2;
        auto xs = draw_increasing(rng, m, -1.5, 1.5, 0.3);
        auto ss = draw_increasing(rng, 4 + int(out.size()) % 3, -3.0, 3.0, 0.08);
        Framework fw(Kernel::gaussian(), SamplingMeasure::discrete_locations(ss));
        out.push_back({fw, SpikeConfiguration::make(xs, std::vector<double>(std::size_t(m), 1.0))});
    }
    return out;
}

void criterion_1_and_2_and_3() {
    Timer t1;
    auto corpus = laplace_corpus(50, 20260809);
    int valid = 0;
    bool margins_ok = true, curvature_ok = true;
    std::vector<Certificate> certs;
    certs.reserve(corpus.size());
    for (auto& cfg : corpus) {
        Certificate cert = compute_eta_V(cfg.fw, cfg.spikes);
        CertificateVerdict v = certify(cert);
        if (v.valid) ++valid;
        if (!(v.global_margin > 0.0)) margins_ok = false;
        for (double q : v.curvature)
            if (!(q < 0.0)) curvature_ok = false;
        certs.push_back(std::move(cert));
    }
    double sec1 = t1.seconds();
    report(1, valid == 50 && margins_ok && curvature_ok && sec1 < 30.0,
           "Laplace certification valid " + std::to_string(valid) + "/50, margins > 0, curvatures < 0", sec1);

    // criterion 2: sign equivalence + Cramer residuals on the same corpus
    // plus a mixed-validity Gaussian corpus
    Timer t2;
    auto gauss = gaussian_corpus(20, 777);
    long checked = 0, violations = 0;
    double worst_cramer = 0.0;
    int gauss_valid = 0, gauss_invalid = 0;
    bool laplace_positive = true;
    auto sign_test = [&](const Framework& fw, const SpikeConfiguration& spikes, const Certificate& cert) {
        CertificateEvaluator<DD> eval(cert);
        auto [lo, hi] = scan_interval(cert);
        std::vector<double> dvals;
        double scale = 0.0;
        const int n = 401;
        for (int i = 0; i < n; ++i) {
            double tt = lo + (hi - lo) * double(i) / double(n - 1);
            double d = det_V(fw, spikes.positions, tt);
            dvals.push_back(d);
            scale = std::max(scale, std::fabs(d));
        }
        for (int i = 0; i < n; ++i) {
            double tt = lo + (hi - lo) * double(i) / double(n - 1);
            double eta = to_double(eval(0, DD(tt)));
            if (std::fabs(dvals[std::size_t(i)]) <= 1e-9 * scale) continue;
            if (std::fabs(1.0 - eta) <= 1e-9) continue;
            ++checked;
            if ((dvals[std::size_t(i)] > 0.0) != (eta < 1.0)) ++violations;
            if (fw.kernel().family == KernelFamily::Laplace && !(dvals[std::size_t(i)] > 0.0))
                laplace_positive = false;
        }
        for (int i = 0; i < int(spikes.positions.size()); ++i)
            worst_cramer = std::max(worst_cramer, cramer_residual(fw, spikes.positions, i));
    };
    for (std::size_t i = 0; i < corpus.size(); ++i) sign_test(corpus[i].fw, corpus[i].spikes, certs[i]);
    for (auto& cfg : gauss) {
        Certificate cert = compute_eta_V(cfg.fw, cfg.spikes);
        CertificateVerdict v = certify(cert);
        (v.valid ? gauss_valid : gauss_invalid)++;
        sign_test(cfg.fw, cfg.spikes, cert);
    }
    double sec2 = t2.seconds();
    report(2,
           violations == 0 && checked > 10000 && worst_cramer <= 1e-8 && gauss_invalid > 0 && gauss_valid > 0 &&
               laplace_positive && sec2 < 60.0,
           "sign(D_V) = sign(1-eta) at " + std::to_string(checked) + " grid points, " +
               std::to_string(violations) + " violations, cramer <= " + sci(worst_cramer) + ", gaussian mix " +
               std::to_string(gauss_valid) + "v/" + std::to_string(gauss_invalid) + "i",
           sec2);

    // criterion 3: Cauchy-Binet exactness over the discrete corpus with
    // K <= 10, M <= 2, plus the closed-form M=1 Laplace case
    Timer t3;
    std::mt19937_64 rng(4242);
    double worst_gram = 0.0, worst_d = 0.0;
    int frameworks = 0;
    auto cb_all = [&](const Framework& fw, const std::vector<double>& xs) {
        if (int(fw.measure().size()) > 10 || int(xs.size()) > 2) return;
        ++frameworks;
        auto base = cauchy_binet_check(fw, xs);
        worst_gram = std::max(worst_gram, base.gram_residual);
        std::uniform_real_distribution<double> u(-2.5, 4.5);
        int done = 0;
        while (done < 10) {
            double tt = u(rng);
            bool clear = true;
            for (double x : xs)
                if (std::fabs(tt - x) < 0.05) clear = false;
            if (fw.kernel().family == KernelFamily::Laplace && tt < 0.05) clear = false;
            if (!clear) continue;
            auto res = cauchy_binet_check(fw, xs, tt);
            worst_d = std::max(worst_d, res.d_residual);
            ++done;
        }
    };
    for (auto& cfg : corpus)
        if (cfg.spikes.count() <= 2) cb_all(cfg.fw, cfg.spikes.positions);
    for (auto& cfg : gauss) cb_all(cfg.fw, cfg.spikes.positions);
    // a 10-sample weighted framework
    {
        std::vector<SampleAtom> atoms;
        std::mt19937_64 r2(5);
        double s = -2.0;
        for (int i = 0; i < 10; ++i) {
            s += 0.2 + std::uniform_real_distribution<double>(0.0, 0.4)(r2);
            atoms.push_back({s, std::uniform_real_distribution<double>(0.3, 2.0)(r2)});
        }
        Framework fw(Kernel::gaussian(), SamplingMeasure::discrete(atoms));
        cb_all(fw, {-0.4, 0.8});
    }
    Framework lap1(Kernel::laplace(), SamplingMeasure::discrete_locations({1.0, 2.0}));
    auto exact = cauchy_binet_check(lap1, std::vector<double>{1.0});
    bool laplace_exact = std::fabs(exact.gram_tuple - std::exp(-6.0)) <= 1e-12 &&
                         std::fabs(exact.gram_direct - std::exp(-6.0)) <= 1e-12;
    double sec3 = t3.seconds();
    report(3, worst_gram <= 1e-10 && worst_d <= 1e-9 && laplace_exact && frameworks >= 40,
           "tuple sums: gram residual <= " + sci(worst_gram) + ", D residual <= " + sci(worst_d) + " over " +
               std::to_string(frameworks) + " frameworks, e^-6 exact",
           sec3);
}

void criterion_4() {
    Timer t;
    Framework fw(Kernel::gaussian(), SamplingMeasure::lebesgue_line());
    std::mt19937_64 rng(99);
    bool all_valid = true;
    for (int m = 1; m <= 3; ++m) {
        auto xs = draw_increasing(rng, m, -2.0, 2.0, 0.25);
        std::vector<double> amps(static_cast<std::size_t>(m));
        for (auto& a : amps) a = std::uniform_real_distribution<double>(0.4, 2.0)(rng);
        CertificateVerdict v = certify_spikes(fw, SpikeConfiguration::make(xs, amps));
        if (!v.valid) all_valid = false;
        double x0 = std::uniform_real_distribution<double>(-1.5, 1.5)(rng);
        CertificateVerdict w = certify_point(fw, x0, m);
        if (!w.valid) all_valid = false;
    }
    // closed-form correlation vs quadrature
    double worst = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
        double x = std::uniform_real_distribution<double>(-1.5, 1.5)(rng);
        double xp = std::uniform_real_distribution<double>(-1.5, 1.5)(rng);
        for (int k = 0; k <= 2; ++k) {
            for (int l = 0; l + k <= 4 && l <= 2; ++l) {
                double v = fw.correlation(k, l, x, xp);
                double mid = 0.5 * (x + xp);
                double q = oracles::integrate(
                    [&](double s) {
                        return eval_kernel_deriv(fw.kernel(), k, x, s) * eval_kernel_deriv(fw.kernel(), l, xp, s);
                    },
                    mid - 14.0, mid + 14.0, 1e-13);
                worst = std::max(worst, std::fabs(v - q));
            }
        }
    }
    double sec = t.seconds();
    report(4, all_valid && worst <= 1e-10,
           "fully sampled gaussian valid for M in {1,2,3}, closed form vs quadrature " + sci(worst), sec);
}

void criterion_5() {
    Timer t;
    // width 0.25: a unit-width gaussian is integrated to machine precision by
    // every sampling in the ladder, which would leave nothing to converge
    Framework leb(Kernel::gaussian(0.25), SamplingMeasure::lebesgue_line());
    auto spikes = SpikeConfiguration::make({-0.5, 0.7}, {1.0, 1.0});
    Certificate ref = compute_eta_V(leb, spikes);
    double prev_sup = std::numeric_limits<double>::infinity();
    bool monotone = true, final_valid = true;
    std::string sups;
    bool became_valid = false;
    for (int n : {33, 65, 129}) {
        std::vector<SampleAtom> atoms;
        double w = 16.0 / double(n - 1);
        for (int i = 0; i < n; ++i) atoms.push_back({-8.0 + 16.0 * double(i) / double(n - 1), w});
        Framework fw(Kernel::gaussian(0.25), SamplingMeasure::discrete(atoms));
        Certificate cert = compute_eta_V(fw, spikes);
        CertificateVerdict v = certify(cert);
        if (v.valid) became_valid = true;
        if (became_valid && !v.valid) final_valid = false;
        double sup = 0.0;
        for (int i = 0; i <= 200; ++i) {
            double u = -4.0 + 8.0 * double(i) / 200.0;
            sup = std::max(sup, std::fabs(eval_certificate(cert, 0, u) - eval_certificate(ref, 0, u)));
        }
        if (!(sup < prev_sup)) monotone = false;
        prev_sup = sup;
        sups += sci(sup) + " ";
    }
    double sec = t.seconds();
    report(5, became_valid && final_valid && monotone, "refinement sups decrease: " + sups, sec);
}

void criterion_6() {
    Timer t;
    std::mt19937_64 rng(31415);
    auto spikes = SpikeConfiguration::make({0.0, 1.0}, {1.0, 1.0});
    std::string detail = "all-valid below r = ";
    double threshold = -1.0;
    bool below_all_valid = true;
    for (double r : {2.0, 1.0, 0.5, 0.25, 0.1}) {
        int ok = 0;
        for (int trial = 0; trial < 20; ++trial) {
            auto ss = draw_increasing(rng, 4, 0.5 - r, 0.5 + r, 1e-3 * r);
            Framework fw(Kernel::gaussian(), SamplingMeasure::discrete_locations(ss));
            CertificateVerdict v = certify_spikes(fw, spikes);
            if (v.valid) ++ok;
        }
        if (ok == 20 && threshold < 0.0) threshold = r;
        if (threshold > 0.0 && r <= threshold && ok != 20) below_all_valid = false;
    }
    double sec = t.seconds();
    report(6, threshold > 0.0 && below_all_valid, detail + std::to_string(threshold), sec);
}

void criterion_7() {
    Timer t;
    std::mt19937_64 rng(2718);
    bool identically_one_ok = true, gaussian_valid_ok = true, laplace_valid_ok = true;
    for (int trial = 0; trial < 20; ++trial) {
        int m = 1 + trial % 2;
        auto xs = draw_increasing(rng, m, -1.2, 1.2, 0.3);
        auto ss = draw_increasing(rng, 2 * m, -2.5, 2.5, 0.15);
        Framework nfw = normalize(Framework(Kernel::gaussian(), SamplingMeasure::discrete_locations(ss)));
        CertificateVerdict v = normalized_degeneracy_check(nfw, xs);
        if (v.failure_reason != FailureReason::IdenticallyOne || v.max_abs_eta_minus_one > 1e-9)
            identically_one_ok = false;
    }
    // one sample beyond 2M carries the entire deficit from identically-one,
    // so the K = 2M+1 corpora keep their samples well spread
    std::mt19937_64 rg(444);
    for (int trial = 0; trial < 20; ++trial) {
        int m = 1 + trial % 2;
        auto xs = draw_increasing(rg, m, -1.2, 1.2, 0.3);
        auto ss = draw_increasing(rg, 2 * m + 1, -2.5, 2.5, 0.5);
        Framework nfw = normalize(Framework(Kernel::gaussian(), SamplingMeasure::discrete_locations(ss)));
        CertificateVerdict v = normalized_degeneracy_check(nfw, xs);
        if (!v.valid) gaussian_valid_ok = false;
    }
    std::mt19937_64 rl(999);
    for (int trial = 0; trial < 20; ++trial) {
        int m = 1 + trial % 2;
        auto xs = draw_increasing(rl, m, 0.4, 2.0, 0.3);
        auto ss = draw_increasing(rl, 2 * m + 1, 0.2, 5.0, 0.8);
        Framework nfw = normalize(Framework(Kernel::laplace(), SamplingMeasure::discrete_locations(ss)));
        CertificateVerdict v = normalized_degeneracy_check(nfw, xs);
        if (!v.valid) laplace_valid_ok = false;
    }
    double sec = t.seconds();
    report(7, identically_one_ok && gaussian_valid_ok && laplace_valid_ok,
           std::string("K=2M identically one, K=2M+1 valid (gaussian ") +
               (gaussian_valid_ok ? "20/20" : "fail") + ", laplace " + (laplace_valid_ok ? "20/20" : "fail") +
               ")",
           sec);
}

void criterion_8() {
    Timer t;
    Framework fw(Kernel::laplace(), SamplingMeasure::discrete_locations({0.2, 0.8, 2.0, 5.0}));
    auto truth = SpikeConfiguration::make({0.5, 2.5}, {1.0, 1.0});
    CertificateVerdict pre = certify_spikes(fw, truth);
    ExperimentConfig cfg;
    cfg.noise_scales = {1e-6, 1e-5, 1e-4};
    cfg.alpha = 0.5; // lambda = 2 ||w||
    cfg.trials = 20;
    cfg.seed = 1234;
    ExperimentReport rep = support_stability_experiment(fw, truth, cfg);
    bool success_ok = true;
    for (const auto& s : rep.scales)
        if (s.success_rate < 0.95) success_ok = false;
    bool gaps_ok = true;
    for (const auto& r : rep.trials)
        if (!(r.dual_gap <= 1e-6)) gaps_ok = false;
    bool slope_ok = rep.slope_defined && rep.loglog_slope >= 0.7 && rep.loglog_slope <= 1.3;
    double sec = t.seconds();
    report(8, pre.valid && success_ok && gaps_ok && slope_ok && sec < 300.0,
           "support stability: slope " + sci(rep.loglog_slope) + ", success rates ok, gaps <= 1e-6",
           sec);
}

void criterion_9() {
    Timer t;
    Framework fw(Kernel::laplace(), SamplingMeasure::discrete_locations({0.5, 1.0, 2.0, 3.0}));
    double x0 = 1.0;
    Certificate w = compute_eta_W(fw, x0, 2);
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    std::string sups;
    for (double tt : {0.2, 0.1, 0.05}) {
        Certificate v = compute_eta_V(fw, SpikeConfiguration::make({x0 - tt, x0 + tt}, {1.0, 1.0}));
        double sup = 0.0;
        for (int i = 0; i <= 400; ++i) {
            double u = 0.05 + 7.95 * double(i) / 400.0;
            sup = std::max(sup, std::fabs(eval_certificate(v, 0, u) - eval_certificate(w, 0, u)));
        }
        if (!(sup < prev)) monotone = false;
        prev = sup;
        sups += sci(sup) + " ";
    }
    double sec = t.seconds();
    report(9, monotone && prev < 0.05, "clustered eta_V -> eta_W sups: " + sups, sec);
}

} // namespace

int main() {
    criterion_1_and_2_and_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (g_failures == 0) std::printf("all acceptance criteria passed\n");
    else std::printf("%d acceptance criteria FAILED\n", g_failures);
    return g_failures;
}
