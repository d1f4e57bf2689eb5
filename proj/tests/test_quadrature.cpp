#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "ocad/quadrature.hpp"

using ocad::gauss;
using ocad::gauss_lobatto;

namespace {

double rule_moment(const ocad::QuadRule1D& r, int m) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], m);
    return s;
}

}  // namespace

TEST_CASE("small Gauss rules") {
    const auto g1 = gauss(1);
    CHECK(g1.nodes == std::vector<double>{0.0});
    CHECK(g1.weights == std::vector<double>{1.0});

    const auto g2 = gauss(2);
    CHECK(g2.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(g2.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(g2.weights[0] == doctest::Approx(0.5).epsilon(1e-15));

    // Q=3 weights derived by imposing exactness on 1, x^2, x^4 with nodes
    // 0, +-sqrt(3/5): w0 + 2w1 = 1, 2w1 (3/5) = 1/3 -> w1 = 5/18, w0 = 8/18.
    const auto g3 = gauss(3);
    CHECK(g3.weights[0] == doctest::Approx(5.0 / 18).epsilon(1e-15));
    CHECK(g3.weights[1] == doctest::Approx(8.0 / 18).epsilon(1e-15));
    CHECK(g3.weights[2] == doctest::Approx(5.0 / 18).epsilon(1e-15));
    CHECK_THROWS_AS(gauss(0), std::invalid_argument);
}

TEST_CASE("small Lobatto rules") {
    const auto l2 = gauss_lobatto(2);
    CHECK(l2.nodes == std::vector<double>{-1.0, 1.0});
    CHECK(l2.weights[0] == doctest::Approx(0.5));
    const auto l3 = gauss_lobatto(3);
    CHECK(l3.weights[0] == doctest::Approx(1.0 / 6).epsilon(1e-15));
    CHECK(l3.weights[1] == doctest::Approx(2.0 / 3).epsilon(1e-15));
    const auto l4 = gauss_lobatto(4);
    CHECK(l4.weights[0] == doctest::Approx(1.0 / 12).epsilon(1e-15));
    CHECK(l4.nodes[2] == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-15));
    CHECK_THROWS_AS(gauss_lobatto(1), std::invalid_argument);
}

TEST_CASE("L for degree") {
    CHECK(ocad::lobatto_L_for_degree(2) == 3);
    CHECK(ocad::lobatto_L_for_degree(3) == 3);
    CHECK(ocad::lobatto_L_for_degree(9) == 6);
    for (int k = 1; k <= 30; ++k) CHECK(ocad::lobatto_L_for_degree(k) == static_cast<int>(std::ceil((k + 3) / 2.0)));
}

TEST_CASE("Gauss rules match Golub-Welsch") {
    for (int Q = 1; Q <= 24; ++Q) {
        const auto r = gauss(Q);
        const auto o = oracle::golub_welsch(Q);
        REQUIRE(r.size() == static_cast<std::size_t>(Q));
        for (int i = 0; i < Q; ++i) {
            CHECK(std::abs(r.nodes[i] - o.x[i]) <= 1e-14);
            CHECK(std::abs(r.weights[i] - o.w[i]) <= 1e-14);
        }
    }
}

TEST_CASE("Lobatto rules match the Jacobi eigen-route") {
    for (int L = 2; L <= 20; ++L) {
        const auto r = gauss_lobatto(L);
        const auto o = oracle::lobatto(L);
        for (int i = 0; i < L; ++i) {
            CHECK(std::abs(r.nodes[i] - o.x[i]) <= 1e-14);
            CHECK(std::abs(r.weights[i] - o.w[i]) <= 1e-14);
        }
        CHECK(r.weights.front() == doctest::Approx(1.0 / (L * (L - 1.0))).epsilon(1e-15));
    }
}

TEST_CASE("exactness, positivity, symmetry") {
    for (int n = 1; n <= 20; ++n) {
        for (const auto& r : {gauss(n), gauss_lobatto(n + 1)}) {
            double sum = 0.0;
            for (double w : r.weights) {
                CHECK(w > 0.0);
                sum += w;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
            for (int m = 0; m <= r.exact_degree; ++m) CHECK(std::abs(rule_moment(r, m) - oracle::mean_power(m)) <= 1e-13);
            const std::size_t N = r.size();
            for (std::size_t i = 0; i < N; ++i) {
                CHECK(r.nodes[i] == -r.nodes[N - 1 - i]);
                CHECK(r.weights[i] == r.weights[N - 1 - i]);
                if (i > 0) CHECK(r.nodes[i] > r.nodes[i - 1]);
            }
        }
        CHECK(gauss(n).exact_degree == 2 * n - 1);
        CHECK(gauss_lobatto(n + 1).exact_degree == 2 * (n + 1) - 3);
    }
}
