#include <doctest.h>

#include "ocad/simplex.hpp"

using ocad::LPStatus;
using ocad::simplex_max;

TEST_CASE("textbook maximum") {
    // max 3x + 5y  s.t.  x + s1 = 4, 2y + s2 = 12, 3x + 2y + s3 = 18
    Eigen::MatrixXd A(3, 5);
    A << 1, 0, 1, 0, 0,
         0, 2, 0, 1, 0,
         3, 2, 0, 0, 1;
    Eigen::VectorXd b(3), c(5);
    b << 4, 12, 18;
    c << 3, 5, 0, 0, 0;
    const auto r = simplex_max(A, b, c);
    REQUIRE(r.status == LPStatus::optimal);
    CHECK(r.objective == doctest::Approx(36.0));
    CHECK(r.x(0) == doctest::Approx(2.0));
    CHECK(r.x(1) == doctest::Approx(6.0));
    CHECK((A * r.x - b).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("infeasible and unbounded") {
    Eigen::MatrixXd A(2, 2);
    A << 1, 1,
         1, 1;
    Eigen::VectorXd b(2), c(2);
    b << 1, 2;
    c << 1, 0;
    CHECK(simplex_max(A, b, c).status == LPStatus::infeasible);

    Eigen::MatrixXd A2(1, 2);
    A2 << 1, -1;
    Eigen::VectorXd b2(1), c2(2);
    b2 << 0;
    c2 << 1, 0;
    CHECK(simplex_max(A2, b2, c2).status == LPStatus::unbounded);
}

TEST_CASE("negative right-hand side and redundant rows") {
    // -x - y = -2 (i.e. x + y = 2) repeated; max x - y -> x = 2.
    Eigen::MatrixXd A(2, 2);
    A << -1, -1,
         1, 1;
    Eigen::VectorXd b(2), c(2);
    b << -2, 2;
    c << 1, -1;
    const auto r = simplex_max(A, b, c);
    REQUIRE(r.status == LPStatus::optimal);
    CHECK(r.objective == doctest::Approx(2.0));
}

TEST_CASE("degenerate vertex terminates") {
    // Klee-Minty style cube in 3 variables with slacks.
    Eigen::MatrixXd A(3, 6);
    A << 1, 0, 0, 1, 0, 0,
         4, 1, 0, 0, 1, 0,
         8, 4, 1, 0, 0, 1;
    Eigen::VectorXd b(3), c(6);
    b << 5, 25, 125;
    c << 4, 2, 1, 0, 0, 0;
    const auto r = simplex_max(A, b, c);
    REQUIRE(r.status == LPStatus::optimal);
    CHECK(r.objective == doctest::Approx(125.0));
}
