#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spikecert/determinant.hpp"
#include "spikecert/normalization.hpp"

using namespace spikecert;

namespace {

Framework gaussian_fw(const std::vector<double>& locs) {
    return Framework(Kernel::gaussian(), SamplingMeasure::discrete_locations(locs));
}

std::vector<double> random_increasing(std::mt19937_64& g, int n, double lo, double hi, double min_gap) {
    while (true) {
        std::vector<double> v;
        for (int i = 0; i < n; ++i) v.push_back(oracles::uniform(g, lo, hi));
        std::sort(v.begin(), v.end());
        bool ok = true;
        for (int i = 0; i + 1 < n; ++i)
            if (v[std::size_t(i) + 1] - v[std::size_t(i)] < min_gap) ok = false;
        if (ok) return v;
    }
}

} // namespace

TEST_CASE("normalize validates its inputs") {
    CHECK_THROWS_AS(normalize(Framework(Kernel::gaussian(), SamplingMeasure::lebesgue_line())), InfiniteMass);
    Framework nfw = normalize(gaussian_fw({-1.0, 0.5, 2.0}));
    CHECK(nfw.normalized());
}

TEST_CASE("normalized atoms integrate to one against the measure") {
    Framework nfw = normalize(gaussian_fw({-1.0, 0.3, 1.2, 2.5}));
    auto g = oracles::rng(3);
    for (int i = 0; i < 10; ++i) {
        double x = oracles::uniform(g, -2.0, 3.0);
        double acc = 0.0;
        for (const auto& a : nfw.measure().atoms) acc += a.weight * nfw.atom_deriv<double>(0, x, a.location);
        CHECK(acc == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("normalized correlation is the quotient of the raw one") {
    Framework raw = gaussian_fw({-1.0, 0.3, 1.2, 2.5});
    Framework nfw = normalize(raw);
    auto g = oracles::rng(5);
    for (int i = 0; i < 20; ++i) {
        double x = oracles::uniform(g, -2.0, 3.0);
        CHECK(nfw.correlation(0, 0, x, x) * nfw.normalizer(0, x) * nfw.normalizer(0, x) ==
              doctest::Approx(raw.correlation(0, 0, x, x)).epsilon(1e-13));
    }
    // quotient-rule partials against finite differences of the quotient
    for (int i = 0; i < 10; ++i) {
        double x = oracles::uniform(g, -1.5, 2.0), y = oracles::uniform(g, -1.5, 2.0);
        auto f = [&](double u) { return nfw.correlation(0, 0, u, y); };
        double exact = nfw.correlation(1, 0, x, y);
        double e3 = std::fabs(oracles::central_diff(f, x, 1e-3) - exact);
        double e4 = std::fabs(oracles::central_diff(f, x, 1e-4) - exact);
        CHECK(e3 <= 1e-4);
        CHECK(e4 <= e3 / 20.0 + 1e-11);
        auto fy = [&](double u) { return nfw.correlation(2, 0, x, u); };
        double exact21 = nfw.correlation(2, 1, x, y);
        CHECK(std::fabs(oracles::central_diff(fy, y, 1e-4) - exact21) <= 2e-6);
    }
}

TEST_CASE("rank decisions transfer between raw and normalized grams") {
    auto g = oracles::rng(17);
    for (int cfg = 0; cfg < 8; ++cfg) {
        auto locs = random_increasing(g, 4, -2.5, 2.5, 0.15);
        Framework raw = gaussian_fw(locs);
        Framework nfw = normalize(raw);
        auto xs = random_increasing(g, 2, -1.5, 1.5, 0.3);
        double draw = det_gram_gamma(raw, xs);
        double dnorm = det_gram_gamma(nfw, xs);
        CHECK(draw > 0.0);
        CHECK(dnorm > 0.0);
    }
    // K = 2M-1 kills both (true rank deficiency)
    Framework raw = gaussian_fw({-0.5, 0.4, 1.3});
    Framework nfw = normalize(raw);
    std::vector<double> xs{0.0, 1.0};
    CHECK(std::fabs(det_gram_gamma(raw, xs)) <= 1e-20);
    CHECK(std::fabs(det_gram_gamma(nfw, xs)) <= 1e-20);
}

TEST_CASE("K = 2M normalized gaussian is identically one") {
    Framework nfw = normalize(gaussian_fw({-0.8, 1.4}));
    CertificateVerdict v = normalized_degeneracy_check(nfw, {0.3});
    CHECK_FALSE(v.valid);
    CHECK(v.failure_reason == FailureReason::IdenticallyOne);
    CHECK(v.max_abs_eta_minus_one <= 1e-9);

    // M=2 with K=4
    Framework nfw2 = normalize(gaussian_fw({-1.2, -0.2, 0.9, 2.0}));
    CertificateVerdict v2 = normalized_degeneracy_check(nfw2, {-0.4, 1.1});
    CHECK(v2.failure_reason == FailureReason::IdenticallyOne);
}

TEST_CASE("K = 2M+1 normalized frameworks certify") {
    Framework gfw = normalize(gaussian_fw({-1.5, -0.4, 0.6, 1.7, 2.8}));
    CertificateVerdict v = normalized_degeneracy_check(gfw, {-0.2, 1.0});
    CHECK(v.valid);

    Framework lfw = normalize(Framework(Kernel::laplace(), SamplingMeasure::discrete_locations({0.4, 0.9, 1.6, 2.4, 3.3})));
    CertificateVerdict vl = normalized_degeneracy_check(lfw, {0.8, 1.9});
    CHECK(vl.valid);
}

TEST_CASE("normalized laplace admits a sample at zero") {
    Framework raw(Kernel::laplace(), SamplingMeasure::discrete_locations({0.5, 1.0, 2.0}));
    CHECK_THROWS_AS(Framework(Kernel::laplace(), SamplingMeasure::discrete_locations({0.0, 1.0, 2.0})),
                    DomainViolation);
    Framework withzero(Kernel::laplace(), SamplingMeasure::discrete_locations({0.0, 1.0, 2.0}), true);
    CHECK(withzero.normalized());
    CertificateVerdict v = normalized_degeneracy_check(withzero, {0.8});
    CHECK(v.valid);
}

TEST_CASE("confluent certificate works on normalized frameworks") {
    Framework nfw = normalize(Framework(Kernel::laplace(), SamplingMeasure::discrete_locations({0.3, 1.1, 2.2, 3.4, 4.7})));
    CertificateVerdict v = certify_point(nfw, 1.0, 2);
    CHECK(v.valid);
    REQUIRE(v.curvature.size() == 1);
    CHECK(v.curvature[0] < 0.0);
}

TEST_CASE("bordered determinant chain: normalized vs N-weighted") {
    Framework raw = gaussian_fw({-1.0, 0.2, 0.9, 1.8, 2.6});
    Framework nfw = normalize(raw);
    std::vector<double> xs{-0.2, 1.1};
    DeterminantOptions opts;
    opts.force_extended = true;
    double ref = 0.0;
    bool first = true;
    for (double t : {-1.7, -0.6, 0.5, 1.6, 2.3, 3.1}) {
        double dv = det_V(nfw, xs, t, opts);
        double ubar = dv * (t - xs[0]) * (t - xs[0]) * (t - xs[1]) * (t - xs[1]) / 2.0;
        double q = normalized_border_det(raw, xs, t);
        double ratio = ubar * nfw.normalizer(0, t) / q;
        CHECK(ratio > 0.0);
        if (first) {
            ref = ratio;
            first = false;
        } else {
            CHECK(ratio == doctest::Approx(ref).epsilon(1e-9));
        }
    }
    // the constant is 1 / prod N(x_j)^4
    double expect = 1.0;
    for (double x : xs) expect /= std::pow(nfw.normalizer(0, x), 4);
    CHECK(ref == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("normalizer derivatives match finite differences") {
    Framework raw = gaussian_fw({-1.0, 0.2, 0.9});
    auto g = oracles::rng(29);
    for (int i = 0; i < 10; ++i) {
        double x = oracles::uniform(g, -1.5, 1.5);
        auto f = [&](double u) { return raw.normalizer(0, u); };
        double exact = raw.normalizer(1, x);
        CHECK(std::fabs(oracles::central_diff(f, x, 1e-4) - exact) <= 1e-7);
        auto f1 = [&](double u) { return raw.normalizer(1, u); };
        CHECK(std::fabs(oracles::central_diff(f1, x, 1e-4) - raw.normalizer(2, x)) <= 1e-6);
    }
}
