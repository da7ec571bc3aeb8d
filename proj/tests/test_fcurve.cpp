#include <doctest.h>

#include "funbench/errors.hpp"
#include "funbench/fcurve.hpp"
#include "support.hpp"

using namespace funbench;

TEST_SUITE("fcurve") {

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(Grid({0.5}), InvalidArgument);
    CHECK_THROWS_AS(Grid({0.0, 0.0, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(Grid({0.0, 0.7, 0.6}), InvalidArgument);
    CHECK_THROWS_AS(Grid({-0.1, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(Grid({0.0, 1.5}), InvalidArgument);
    CHECK_NOTHROW(Grid({0.0, 0.3, 1.0}));
}

TEST_CASE("uniform grid spans [0,1] and trapezoid weights sum to 1") {
    const Grid g = Grid::uniform(11);
    CHECK(g.size() == 11);
    CHECK(g[0] == 0.0);
    CHECK(g[10] == 1.0);
    CHECK(g.weights().sum() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g.weights()[0] == doctest::Approx(0.05));
    CHECK(g.weights()[5] == doctest::Approx(0.1));
}

TEST_CASE("rescaled grid maps raw abscissae affinely") {
    const Grid g = Grid::rescaled({850.0, 900.0, 1050.0});
    CHECK(g[0] == 0.0);
    CHECK(g[1] == doctest::Approx(0.25));
    CHECK(g[2] == 1.0);
}

TEST_CASE("dataset and sample validation") {
    const Grid g = Grid::uniform(3);
    CHECK_THROWS_AS(FunctionalDataset(g, Matrix::Zero(2, 4)), DimensionError);
    CHECK_THROWS_AS(FunctionalDataset(g, Matrix::Zero(0, 3)), EmptyInputError);
    Matrix bad = Matrix::Zero(2, 3);
    bad(1, 2) = std::nan("");
    CHECK_THROWS(FunctionalDataset(g, bad));
    Vector v(2);
    v << 1.0, INFINITY;
    CHECK_THROWS(FunctionalSample(v));
    Vector labels(3);
    labels << 0.0, 1.0, 0.5;
    CHECK_THROWS(ScalarResponses(labels, ResponseKind::Binary));
}

TEST_CASE("inner product of constants is the domain length") {
    for (std::size_t T : {2u, 7u, 101u}) {
        const Grid g = Grid::uniform(T);
        const FunctionalSample one(Vector::Ones(static_cast<Eigen::Index>(T)));
        CHECK(inner_product(one, one, g) == doctest::Approx(1.0).epsilon(1e-14));
    }
    const Grid irregular({0.0, 0.1, 0.5, 0.55, 1.0});
    const FunctionalSample one(Vector::Ones(5));
    CHECK(inner_product(one, one, irregular) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Fourier orthonormality under trapezoid quadrature") {
    const Grid g = Grid::uniform(1001);
    const Matrix phi = testing::fourier_matrix(3, g);
    const FunctionalSample p2(phi.col(1));
    const FunctionalSample p3(phi.col(2));
    CHECK(std::abs(inner_product(p2, p3, g)) < 1e-8);
    CHECK(std::abs(inner_product(p2, p2, g) - 1.0) < 1e-6);
}

TEST_CASE("Gram matrix of the first 9 Fourier functions is the identity") {
    const Grid g = Grid::uniform(1001);
    const Matrix phi = testing::fourier_matrix(9, g);
    for (Eigen::Index a = 0; a < 9; ++a) {
        for (Eigen::Index b = 0; b < 9; ++b) {
            const double ip = inner_product(phi.col(a), phi.col(b), g);
            CHECK(std::abs(ip - (a == b ? 1.0 : 0.0)) < 1e-6);
        }
    }
}

TEST_CASE("inner product is bilinear and rejects mismatched lengths") {
    const Grid g = Grid::uniform(50);
    const Vector f = testing::random_vector(50, 1);
    const Vector h = testing::random_vector(50, 2);
    for (double a : {-3.0, 0.0, 0.25, 7.0}) {
        const double lhs = inner_product(a * f, h, g);
        const double rhs = a * inner_product(f, h, g);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13).scale(1.0));
    }
    CHECK_THROWS_AS(inner_product(FunctionalSample(Vector::Ones(4)), FunctionalSample(Vector::Ones(5)), g),
                    DimensionError);
}

TEST_CASE("l2 distance examples") {
    const Grid g = Grid::uniform(17);
    const FunctionalSample f(testing::random_vector(17, 3));
    CHECK(l2_distance(f, f, g) == 0.0);
    const FunctionalSample one(Vector::Ones(17));
    const FunctionalSample zero(Vector::Zero(17));
    CHECK(l2_distance(one, zero, g) == doctest::Approx(1.0).epsilon(1e-14));
    const FunctionalSample three(Vector::Constant(17, 3.0));
    CHECK(l2_distance(three, one, g) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(l2_distance(one, FunctionalSample(Vector::Ones(3)), g), DimensionError);
}

TEST_CASE("l2 distance is symmetric and satisfies the triangle inequality") {
    const Grid g = Grid({0.0, 0.05, 0.2, 0.35, 0.5, 0.8, 0.9, 1.0});
    for (std::uint64_t s = 0; s < 200; ++s) {
        const Vector a = testing::random_vector(8, 3 * s);
        const Vector b = testing::random_vector(8, 3 * s + 1);
        const Vector c = testing::random_vector(8, 3 * s + 2);
        const double ab = l2_distance(a, b, g);
        CHECK(ab == l2_distance(b, a, g));
        CHECK(ab <= l2_distance(a, c, g) + l2_distance(c, b, g) + 1e-10);
        CHECK(ab >= 0.0);
    }
}

TEST_CASE("mean curve") {
    const Grid g2 = Grid::uniform(2);
    Matrix rows(2, 2);
    rows << 1, 2, 3, 4;
    const FunctionalSample m = mean_curve(FunctionalDataset(g2, rows));
    CHECK(m[0] == 2.0);
    CHECK(m[1] == 3.0);

    const Grid g = Grid::uniform(9);
    const Vector c = testing::random_vector(9, 11);
    Matrix single = c.transpose();
    CHECK(mean_curve(FunctionalDataset(g, single)).values() == c);
    Matrix pair(2, 9);
    pair.row(0) = c.transpose();
    pair.row(1) = -c.transpose();
    CHECK(mean_curve(FunctionalDataset(g, pair)).values().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("subset keeps the grid and selected rows") {
    const Grid g = Grid::uniform(4);
    const Matrix m = testing::random_matrix(5, 4, 8);
    const FunctionalDataset ds(g, m);
    const FunctionalDataset sub = ds.subset({4, 1});
    CHECK(sub.n() == 2);
    CHECK(sub.curves().row(0) == m.row(4));
    CHECK(sub.curves().row(1) == m.row(1));
    CHECK_THROWS(ds.subset({5}));
}

}  // TEST_SUITE
