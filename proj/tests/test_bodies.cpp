#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "slicebound/bodies.hpp"
#include "slicebound/errors.hpp"
#include "slicebound/oracle.hpp"

using namespace slicebound;

TEST_CASE("Sylvester Hadamard matrices are orthogonal") {
    for (int order : {1, 2, 4, 8, 16}) {
        Matrix h = sylvester_hadamard(order);
        CHECK((h * h.transpose() - order * Matrix::Identity(order, order)).norm() == 0.0);
        CHECK((h.array().abs() == 1.0).all());
    }
    CHECK_THROWS_AS(sylvester_hadamard(3), DomainError);
    CHECK_THROWS_AS(sylvester_hadamard(12), DomainError);
}

TEST_CASE("Hadamard decompositions validate tightly") {
    for (auto [k, n] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {2, 2}, {2, 3}, {2, 4}, {4, 4}, {4, 6}, {4, 8}, {8, 12}}) {
        JohnDecomposition d = hadamard_decomposition(k, n);
        ValidationReport r = validate(d);
        CHECK(r.passed());
        CHECK(r.identity_residual <= 1e-10);
        CHECK(d.size() == static_cast<std::size_t>(2 * k));
    }
    CHECK_THROWS_AS(hadamard_decomposition(3, 4), PreconditionError);
    CHECK_THROWS_AS(hadamard_decomposition(2, 5), PreconditionError);
    CHECK_THROWS_AS(hadamard_decomposition(4, 3), PreconditionError);
}

TEST_CASE("Hadamard section closed form and determinant route") {
    for (auto [k, n] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {2, 4}, {4, 4}, {4, 6}, {4, 8}}) {
        HadamardSection s = hadamard_section_exact(k, n);
        const double want = std::pow(static_cast<double>(n) / k, 0.5 * k) * std::pow(2.0, k);
        CHECK(s.value == doctest::Approx(want).epsilon(1e-12));
        CHECK(s.determinant_route == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("simplex directions have Gram entries -1/n") {
    for (int n = 1; n <= 7; ++n) {
        JohnDecomposition s = simplex_decomposition(n);
        CHECK(s.centered());
        Matrix g = s.vectors().transpose() * s.vectors();
        for (Eigen::Index i = 0; i < g.rows(); ++i)
            for (Eigen::Index j = 0; j < g.cols(); ++j)
                CHECK(std::abs(g(i, j) - (i == j ? 1.0 : -1.0 / n)) <= 1e-12);
        CHECK(s.weights().sum() == doctest::Approx(n));
    }
}

TEST_CASE("cube and cross-polytope fixtures") {
    JohnDecomposition c = cube_decomposition(3);
    CHECK(c.centered());
    CHECK(c.size() == 6);
    KpBall b = cross_polytope_ball(4);
    CHECK(b.p() == 1.0);
    Vector x(4);
    x << 0.5, -0.25, 0.125, 0.0;
    CHECK(b.norm(x) == doctest::Approx(x.lpNorm<1>()));
    CHECK_THROWS_AS(kp_ball(cube_decomposition(2), 3.0, Vector::Ones(4)), DomainError);
    CHECK_THROWS_AS(kp_ball(cube_decomposition(2), 1.5, Vector::Ones(3)), StructuralError);
}

TEST_CASE("section polytope lies between the unit ball and the envelope") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + trial % 4;
        const int k = 1 + trial % std::min(n, 3);
        JohnDecomposition d = (trial % 2 ? simplex_decomposition(n) : cube_decomposition(n))
                                  .rotated(testutil::gaussian_rotation(n, rng));
        Subspace h = Subspace::from_basis(testutil::gaussian_orthonormal_rows(k, n, rng));
        ProjectedDecomposition p = project(d, h);
        HPolytopeSection poly = section_polytope(p);
        for (Eigen::Index i = 0; i < p.thresholds.size(); ++i) CHECK(p.thresholds(i) >= 1.0 - 1e-12);
        double sum_c = 0.0;
        for (Eigen::Index i = 0; i < p.weights.size(); ++i) sum_c += p.weights(i);
        const double r = std::sqrt(sum_c);
        for (const Vector& v : polytope_vertices(poly)) CHECK(v.norm() <= r + 1e-9);
        for (int dir = 0; dir < 20; ++dir) {
            Vector u = Vector::NullaryExpr(k, [&] { return std::normal_distribution<double>()(rng); }).normalized();
            CHECK(poly.contains(u * (1.0 - 1e-12)));
        }
    }
}

TEST_CASE("nonsymmetric section polytope of the full simplex") {
    JohnDecomposition s = simplex_decomposition(2);
    NonsymLift nl = lift_nonsymmetric(s, Subspace::full(2));
    HPolytopeSection poly = nonsym_section_polytope(nl);
    CHECK_FALSE(poly.symmetric);
    CHECK(exact_volume_smallk(poly) == doctest::Approx(3.0 * std::sqrt(3.0)).epsilon(1e-12));
}
