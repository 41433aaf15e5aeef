#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "ebm/errors.hpp"
#include "ebm/numerics.hpp"
#include "ebm/sampling.hpp"

using namespace ebm;

namespace {

DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    DenseMatrix m(static_cast<int>(rows.size()));
    int i = 0;
    for (const auto& row : rows) {
        int j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

// reference 2x2: [[-4,2],[2,-2]] has eigenvalues -3 +- sqrt(5) and first
// eigenvector components (5 -+ sqrt(5))/10 squared
const double kSqrt5 = std::sqrt(5.0);

} // namespace

TEST_CASE("jacobi on a diagonal matrix sorts and permutes") {
    EighResult eig = jacobi_eigh(from_rows({{3, 0, 0}, {0, 1, 0}, {0, 0, 2}}));
    CHECK(eig.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(eig.eigenvalues[1] == doctest::Approx(2.0));
    CHECK(eig.eigenvalues[2] == doctest::Approx(3.0));
    // column 0 picks out the (1,1) axis
    CHECK(std::abs(eig.eigenvectors(1, 0)) == doctest::Approx(1.0));
}

TEST_CASE("jacobi on the reference 2x2") {
    EighResult eig = jacobi_eigh(from_rows({{-4, 2}, {2, -2}}));
    CHECK(eig.eigenvalues[0] == doctest::Approx(-3.0 - kSqrt5).epsilon(1e-14));
    CHECK(eig.eigenvalues[1] == doctest::Approx(-3.0 + kSqrt5).epsilon(1e-14));
}

TEST_CASE("jacobi on the identity") {
    EighResult eig = jacobi_eigh(DenseMatrix::identity(5));
    for (int i = 0; i < 5; ++i) CHECK(eig.eigenvalues[i] == doctest::Approx(1.0));
    CHECK((eig.eigenvectors - DenseMatrix::identity(5)).max_abs() == 0.0);
}

TEST_CASE("jacobi rejects non-symmetric input") {
    CHECK_THROWS_WITH_AS(jacobi_eigh(from_rows({{1, 2}, {0, 1}})), doctest::Contains("symmetry"),
                         Error);
}

TEST_CASE("expm at t = 0 is the identity") {
    DenseMatrix m = from_rows({{-4, 2}, {2, -2}});
    CHECK((expm(m, 0.0) - DenseMatrix::identity(2)).max_abs() <= 1e-15);
}

TEST_CASE("expm of a diagonal matrix") {
    DenseMatrix e = expm(from_rows({{-1, 0}, {0, -2}}), 1.0);
    CHECK(e(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
    CHECK(e(1, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-13));
    CHECK(std::abs(e(0, 1)) <= 1e-15);
}

TEST_CASE("expm (1,1) entry matches the 2x2 eigendecomposition") {
    DenseMatrix m = from_rows({{-4, 2}, {2, -2}});
    double w0 = (5.0 - kSqrt5) / 10.0;
    double w1 = (5.0 + kSqrt5) / 10.0;
    for (double t : {0.1, 0.5, 1.0, 3.0}) {
        double expected = w0 * std::exp(-(3.0 - kSqrt5) * t) + w1 * std::exp(-(3.0 + kSqrt5) * t);
        CHECK(expm(m, t)(0, 0) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("poly_roots on small factorable polynomials") {
    auto roots = poly_roots(Poly({2.0, -3.0, 1.0})); // z^2 - 3z + 2
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(roots[1].real() == doctest::Approx(2.0).epsilon(1e-12));

    roots = poly_roots(Poly({1.0, 0.0, 1.0})); // z^2 + 1
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].real() == doctest::Approx(0.0));
    CHECK(std::abs(roots[0].imag()) == doctest::Approx(1.0).epsilon(1e-12));

    roots = poly_roots(Poly({0.0, 16.0, 4.0})); // 4z^2 + 16z = 4z(z+4)
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].real() == doctest::Approx(-4.0).epsilon(1e-12));
    CHECK(roots[1].real() == doctest::Approx(0.0));
}

TEST_CASE("poly_roots rejects constants") {
    CHECK_THROWS_AS((void)poly_roots(Poly({3.0})), Error);
    try {
        (void)poly_roots(Poly({3.0}));
    } catch (const Error& e) {
        CHECK(e.code() == errc::degenerate_leading_coefficient);
    }
}

TEST_CASE("deflation divides out a root") {
    Poly p = Poly::from_roots(std::vector<double>{1.0, 2.0, -3.0});
    Poly q = p.deflated(2.0);
    CHECK(q.degree() == 2);
    CHECK(std::abs(q.eval(1.0)) <= 1e-12);
    CHECK(std::abs(q.eval(-3.0)) <= 1e-12);
}

TEST_CASE("brent finds pi from sin") {
    double r = brent_root([](double x) { return std::sin(x); }, 3.0, 3.3);
    CHECK(r == doctest::Approx(std::numbers::pi).epsilon(1e-13));
}

TEST_CASE("brent finds sqrt(2)") {
    double r = brent_root([](double x) { return x * x - 2.0; }, 1.0, 2.0);
    CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("brent requires a sign change") {
    CHECK_THROWS_AS((void)brent_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), Error);
}

TEST_CASE("char_poly of small matrices") {
    Poly p = char_poly_of_matrix(from_rows({{1, 0}, {0, 2}}));
    CHECK(p.coeff(0) == doctest::Approx(2.0));
    CHECK(p.coeff(1) == doctest::Approx(-3.0));
    CHECK(p.coeff(2) == doctest::Approx(1.0));

    p = char_poly_of_matrix(DenseMatrix(3)); // zero matrix -> z^3
    CHECK(p.degree() == 3);
    CHECK(p.coeff(0) == 0.0);
    CHECK(p.coeff(1) == 0.0);
    CHECK(p.coeff(2) == 0.0);

    p = char_poly_of_matrix(from_rows({{-4, 2}, {2, -2}})); // z^2 + 6z + 4
    CHECK(p.coeff(0) == doctest::Approx(4.0));
    CHECK(p.coeff(1) == doctest::Approx(6.0));
}

TEST_CASE("expm semigroup property on random symmetric matrices") {
    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        int order = rng.uniform_int(1, 6);
        DenseMatrix m(order);
        for (int i = 0; i < order; ++i)
            for (int j = i; j < order; ++j) m(i, j) = m(j, i) = rng.uniform(-2.0, 2.0);
        double s = rng.uniform(0.0, 1.0), t = rng.uniform(0.0, 1.0);
        DenseMatrix lhs = expm(m, s + t);
        DenseMatrix rhs = expm(m, s) * expm(m, t);
        CHECK((lhs - rhs).max_abs() <= 1e-10 * std::max(1.0, lhs.max_abs()));
    }
}
