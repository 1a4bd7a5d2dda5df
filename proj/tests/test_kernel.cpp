#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spikecert/kernel.hpp"

using namespace spikecert;

TEST_CASE("hermite auxiliary polynomials") {
    CHECK(hermite_aux(0, 0.37) == 1.0);
    CHECK(hermite_aux(2, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(hermite_aux(3, 0.0) == 0.0);
    // tH_3 = -8u^3 + 12u
    const auto& c3 = hermite_aux_coeffs(3);
    REQUIRE(c3.size() == 4);
    CHECK(c3[0] == 0);
    CHECK(c3[1] == 12);
    CHECK(c3[2] == 0);
    CHECK(c3[3] == -8);
}

TEST_CASE("hermite recurrence closes in integer coefficients") {
    // tH_{k+1} + 2u tH_k - tH_k' = 0, exactly
    for (int k = 0; k <= 8; ++k) {
        const auto& cur = hermite_aux_coeffs(k);
        const auto& next = hermite_aux_coeffs(k + 1);
        for (std::size_t i = 0; i < next.size(); ++i) {
            std::int64_t shift = i >= 1 && i - 1 < cur.size() ? 2 * cur[i - 1] : 0;
            std::int64_t deriv = i + 1 < cur.size() ? std::int64_t(i + 1) * cur[i + 1] : 0;
            CHECK(next[i] + shift - deriv == 0);
        }
    }
}

TEST_CASE("kernel derivative closed forms") {
    Kernel g = Kernel::gaussian();
    CHECK(eval_kernel_deriv(g, 0, 0.0, 0.0) == 1.0);
    CHECK(eval_kernel_deriv(g, 1, 1.0, 0.0) == doctest::Approx(-2.0 * std::exp(-1.0)).epsilon(1e-14));
    Kernel l = Kernel::laplace();
    CHECK(eval_kernel_deriv(l, 2, 1.0, 2.0) == doctest::Approx(4.0 * std::exp(-2.0)).epsilon(1e-14));
    // width scaling: psi = exp(-((x-s)/sigma)^2)
    Kernel g2 = Kernel::gaussian(2.0);
    CHECK(eval_kernel_deriv(g2, 0, 1.0, 0.0) == doctest::Approx(std::exp(-0.25)).epsilon(1e-14));
}

TEST_CASE("derivatives match finite differences with quadratic decay") {
    auto check_fd = [](const Kernel& kernel, double x, double s) {
        for (int k = 1; k <= 4; ++k) {
            auto f = [&](double t) { return eval_kernel_deriv(kernel, k - 1, t, s); };
            double exact = eval_kernel_deriv(kernel, k, x, s);
            double scale = std::max(1.0, std::fabs(exact));
            double e3 = std::fabs(oracles::central_diff(f, x, 1e-3) - exact);
            double e4 = std::fabs(oracles::central_diff(f, x, 1e-4) - exact);
            CHECK(e3 <= 1e-4 * scale);
            CHECK(e4 <= e3 / 20.0 + 1e-11 * scale);
        }
    };
    auto g = oracles::rng(5);
    for (int i = 0; i < 10; ++i) {
        check_fd(Kernel::gaussian(), oracles::uniform(g, -2, 2), oracles::uniform(g, -2, 2));
        check_fd(Kernel::laplace(), oracles::uniform(g, 0.3, 3), oracles::uniform(g, 0.3, 3));
    }
}

TEST_CASE("gaussian reflection symmetry") {
    Kernel g = Kernel::gaussian(1.3);
    auto rg = oracles::rng(17);
    for (int i = 0; i < 20; ++i) {
        double x = oracles::uniform(rg, -3, 3), s = oracles::uniform(rg, -3, 3);
        for (int k = 0; k <= 4; ++k) {
            double lhs = eval_kernel_deriv(g, k, x, s);
            double rhs = (k % 2 == 0 ? 1.0 : -1.0) * eval_kernel_deriv(g, k, 2.0 * s - x, s);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
        }
    }
}

TEST_CASE("domain and order errors") {
    Kernel l = Kernel::laplace(0.5, 6);
    CHECK_THROWS_AS(eval_kernel_deriv(l, 7, 1.0, 1.0), DerivOrderUnsupported);
    CHECK_THROWS_AS(eval_kernel_deriv(l, 0, 0.2, 1.0), DomainViolation);
    CHECK_THROWS_AS(eval_kernel_deriv(l, 0, 1.0, 0.0), DomainViolation);
    CHECK_THROWS_AS(eval_kernel_deriv(l, 0, 1.0, -1.0), DomainViolation);
    Kernel g = Kernel::gaussian();
    CHECK_NOTHROW(eval_kernel_deriv(g, 0, -100.0, 50.0));
    CHECK_THROWS_AS(Kernel::gaussian(-1.0), DomainViolation);
    CHECK_THROWS_AS(Kernel::laplace(-0.1), DomainViolation);
    CHECK_THROWS_AS(Kernel::gaussian(1.0, 1), DerivOrderUnsupported);
}

TEST_CASE("double-double kernel path agrees with double") {
    Kernel g = Kernel::gaussian();
    Kernel l = Kernel::laplace();
    auto rg = oracles::rng(23);
    for (int i = 0; i < 50; ++i) {
        double x = oracles::uniform(rg, 0.2, 3), s = oracles::uniform(rg, 0.2, 3);
        for (int k = 0; k <= 3; ++k) {
            double dg = eval_kernel_deriv(g, k, x, s);
            double lg = eval_kernel_deriv(l, k, x, s);
            CHECK(to_double(kernel_deriv<DD>(g, k, DD(x), DD(s))) == doctest::Approx(dg).epsilon(1e-14));
            CHECK(to_double(kernel_deriv<DD>(l, k, DD(x), DD(s))) == doctest::Approx(lg).epsilon(1e-14));
        }
    }
}
