#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "spikecert/dd.hpp"

using namespace spikecert;

TEST_CASE("error-free transforms") {
    std::mt19937_64 g(11);
    std::uniform_real_distribution<double> u(-1e8, 1e8);
    for (int i = 0; i < 2000; ++i) {
        double a = u(g), b = u(g);
        DD s = detail::two_sum(a, b);
        CHECK(s.hi == a + b);
        // reconstruct exactly in long double
        long double exact = (long double)a + (long double)b;
        CHECK((long double)s.hi + (long double)s.lo == exact);
        DD p = detail::two_prod(a, b);
        long double pexact = (long double)a * (long double)b;
        CHECK(std::fabs((double)(((long double)p.hi + (long double)p.lo) - pexact)) <=
              std::fabs((double)pexact) * 1e-25);
    }
}

TEST_CASE("dd arithmetic identities") {
    std::mt19937_64 g(7);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 500; ++i) {
        DD a(u(g), 1e-18 * u(g));
        DD b(u(g), 1e-18 * u(g));
        if (std::fabs(b.hi) < 1e-3) continue;
        DD q = a / b;
        DD r = q * b - a;
        CHECK(std::fabs(r.hi) <= 1e-29 * std::max(1.0, std::fabs(a.hi)));
        DD d = (a + b) - b - a;
        CHECK(std::fabs(d.hi) <= 1e-29 * std::max(1.0, std::fabs(a.hi) + std::fabs(b.hi)));
    }
}

TEST_CASE("dd sqrt") {
    DD r = sqrt(DD(2.0));
    DD back = r * r - DD(2.0);
    CHECK(std::fabs(back.hi) <= 1e-30);
    CHECK(to_double(sqrt(DD(0.0))) == 0.0);
}

TEST_CASE("dd exp basics") {
    CHECK(to_double(exp(DD(0.0))) == 1.0);
    // e to double-double accuracy
    DD e_ref(2.7182818284590452354, 1.4456468917292501580e-16);
    DD err = exp(DD(1.0)) - e_ref;
    CHECK(std::fabs(err.hi) <= 1e-29);
    // agreement with long double exp on a range
    for (double x : {-30.0, -3.0, -0.7, 0.2, 1.3, 8.0, 40.0}) {
        long double ref = expl((long double)x);
        DD v = exp(DD(x));
        long double got = (long double)v.hi + (long double)v.lo;
        CHECK(std::fabs((double)((got - ref) / ref)) <= 5e-19);
    }
}

TEST_CASE("dd exp functional equations") {
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int i = 0; i < 200; ++i) {
        DD x(u(g));
        DD lhs = exp(x) * exp(-x) - DD(1.0);
        CHECK(std::fabs(lhs.hi) <= 5e-29);
        DD sq = exp(x) * exp(x);
        DD dbl = exp(x + x);
        DD rel = (sq - dbl) / dbl;
        CHECK(std::fabs(rel.hi) <= 5e-29);
    }
    CHECK(to_double(exp(DD(-800.0))) == 0.0);
    CHECK(std::isinf(to_double(exp(DD(800.0)))));
}

TEST_CASE("powi and ldexp") {
    CHECK(to_double(powi(DD(3.0), 0)) == 1.0);
    CHECK(to_double(powi(DD(2.0), 10)) == 1024.0);
    DD p = powi(DD(10.0), -3);
    CHECK(std::fabs(to_double(p) - 1e-3) <= 1e-19);
    CHECK(to_double(ldexp(DD(3.0, 1e-20), 4)) == 48.0);
    CHECK(powi(2.0, 6) == 64.0);
}

TEST_CASE("dd pi constant") {
    // sin(pi) via Taylor is overkill; check against long double pi
    long double pi_l = 3.14159265358979323846264338327950288L;
    long double got = (long double)dd_const::pi.hi + (long double)dd_const::pi.lo;
    CHECK(std::fabs((double)(got - pi_l)) <= 1e-30);
}

TEST_CASE("dd comparisons and abs") {
    CHECK(DD(1.0, -1e-20) < DD(1.0, 0.0));
    CHECK(DD(2.0) > DD(1.0));
    CHECK(to_double(abs(DD(-3.0, 1e-17))) == 3.0);
}
