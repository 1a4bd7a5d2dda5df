#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "spikecert/linalg.hpp"

using namespace spikecert;

namespace {

SmallMat<double> random_mat(std::mt19937_64& g, int n) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    SmallMat<double> m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = u(g);
    return m;
}

Eigen::MatrixXd to_eigen(const SmallMat<double>& m) {
    Eigen::MatrixXd out(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) out(i, j) = m(i, j);
    return out;
}

} // namespace

TEST_CASE("full-pivot determinant matches Eigen") {
    std::mt19937_64 g(17);
    for (int n : {1, 2, 3, 5, 7}) {
        for (int rep = 0; rep < 30; ++rep) {
            SmallMat<double> m = random_mat(g, n);
            double ref = to_eigen(m).determinant();
            double got = det_full_pivot<double>(m);
            CHECK(got == doctest::Approx(ref).epsilon(1e-11));
            SmallMat<DD> md(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) md(i, j) = DD(m(i, j));
            CHECK(to_double(det_full_pivot<DD>(md)) == doctest::Approx(ref).epsilon(1e-11));
        }
    }
}

TEST_CASE("singular matrices report zero determinant and pivot info") {
    SmallMat<double> m(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = double(i + 1); // rank 1
    PivotInfo<double> info;
    CHECK(det_full_pivot<double>(m, &info) == 0.0);
    CHECK(info.singular);
}

TEST_CASE("full-pivot solve matches Eigen and tracks pivots") {
    std::mt19937_64 g(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int n : {2, 4, 6}) {
        for (int rep = 0; rep < 20; ++rep) {
            SmallMat<double> m = random_mat(g, n);
            std::vector<double> b(static_cast<std::size_t>(n));
            for (auto& v : b) v = u(g);
            Eigen::VectorXd be(n);
            for (int i = 0; i < n; ++i) be(i) = b[std::size_t(i)];
            Eigen::VectorXd ref = to_eigen(m).fullPivLu().solve(be);
            std::vector<double> x;
            PivotInfo<double> info;
            REQUIRE(solve_full_pivot<double>(m, b, x, &info));
            CHECK(to_double(info.max_pivot) >= to_double(info.min_pivot));
            for (int i = 0; i < n; ++i) CHECK(x[std::size_t(i)] == doctest::Approx(ref(i)).epsilon(1e-9));
        }
    }
}

TEST_CASE("dd solve reaches far below double roundoff") {
    // Hilbert-like matrix, condition ~ 1e8 at n = 6
    const int n = 6;
    SmallMat<DD> m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = DD(1.0) / DD(double(i + j + 1));
    std::vector<DD> b(std::size_t(n), DD(1.0));
    std::vector<DD> x;
    REQUIRE(solve_full_pivot<DD>(m, b, x));
    // residual in exact arithmetic of the dd inputs
    for (int i = 0; i < n; ++i) {
        DD acc = DD(1.0);
        for (int j = 0; j < n; ++j) acc -= m(i, j) * x[std::size_t(j)];
        CHECK(std::fabs(to_double(acc)) <= 1e-22);
    }
}

TEST_CASE("pairwise sum is deterministic and accurate") {
    std::mt19937_64 g(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<DD> terms;
    long double ref = 0.0L;
    for (int i = 0; i < 1000; ++i) {
        double v = u(g);
        terms.push_back(DD(v));
        ref += (long double)v;
    }
    DD s1 = pairwise_sum<DD>(terms);
    DD s2 = pairwise_sum<DD>(terms);
    CHECK(s1 == s2);
    CHECK(std::fabs((double)((long double)s1.hi + (long double)s1.lo - ref)) <= 1e-17);
    CHECK(to_double(pairwise_sum<DD>(std::vector<DD>{})) == 0.0);
}
