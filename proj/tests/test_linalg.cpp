#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "cslfa/errors.hpp"
#include "cslfa/kgrid.hpp"
#include "cslfa/linalg.hpp"
#include "oracles/charpoly.hpp"

using namespace cslfa;

namespace {

CMatrix random_matrix(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    CMatrix m(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) m(i, j) = Complex(d(rng), d(rng));
    return m;
}

}  // namespace

TEST_CASE("identity spectrum") {
    const auto s = eigenvalues(CMatrix::Identity(4, 4));
    REQUIRE(s.eigenvalues.size() == 4);
    for (const auto& z : s.eigenvalues) CHECK(std::abs(z - 1.0) < 1e-12);
    CHECK(s.radius == doctest::Approx(1.0));
}

TEST_CASE("diagonal spectrum") {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = 2.0;
    m(1, 1) = Complex(0.0, -3.0);
    const auto s = eigenvalues(m);
    CHECK(s.radius == doctest::Approx(3.0));
    bool has2 = false, has3i = false;
    for (const auto& z : s.eigenvalues) {
        has2 |= std::abs(z - 2.0) < 1e-12;
        has3i |= std::abs(z - Complex(0, -3)) < 1e-12;
    }
    CHECK(has2);
    CHECK(has3i);
}

TEST_CASE("zero matrix and small diagonal") {
    CHECK(spectral_radius(CMatrix::Zero(3, 3)) == 0.0);
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = 0.5;
    m(1, 1) = 1.2;
    CHECK(spectral_radius(m) == doctest::Approx(1.2).epsilon(1e-12));
}

TEST_CASE("radius matches the eigenvalue list") {
    std::mt19937_64 rng(7);
    for (int n : {1, 3, 8, 17, 64}) {
        const auto s = eigenvalues(random_matrix(n, rng));
        double r = 0.0;
        for (const auto& z : s.eigenvalues) r = std::max(r, std::abs(z));
        CHECK(std::abs(s.radius - r) <= 1e-12 * r);
    }
}

TEST_CASE("random 8x8 radius agrees with characteristic polynomial roots") {
    std::mt19937_64 rng(20240101);
    for (int trial = 0; trial < 20; ++trial) {
        const CMatrix m = random_matrix(8, rng);
        const double expected = oracle::root_spectral_radius(m);
        CHECK(std::abs(spectral_radius(m) - expected) <= 1e-6 * expected);
    }
}

TEST_CASE("every eigenvalue is a root of the characteristic polynomial") {
    std::mt19937_64 rng(99);
    const CMatrix m = random_matrix(6, rng);
    const auto c = oracle::characteristic_polynomial(m);
    const auto roots = oracle::polynomial_roots(c);
    for (const auto& z : eigenvalues(m).eigenvalues) {
        double nearest = 1e300;
        for (const auto& r : roots) nearest = std::min(nearest, std::abs(z - r));
        CHECK(nearest < 1e-8 * std::max(1.0, std::abs(z)));
    }
}

TEST_CASE("similarity invariance and scaling") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const CMatrix a = random_matrix(8, rng);
        const CMatrix p = random_matrix(8, rng) + 4.0 * CMatrix::Identity(8, 8);
        const CMatrix b = p * a * p.inverse();
        const double ra = spectral_radius(a);
        CHECK(std::abs(spectral_radius(b) - ra) <= 1e-6 * ra);
        const Complex c(0.3, -1.7);
        CHECK(std::abs(spectral_radius(c * a) - std::abs(c) * ra) <= 1e-10 * ra);
    }
}

TEST_CASE("upper triangular eigenvalues are the diagonal") {
    std::mt19937_64 rng(11);
    CMatrix m = random_matrix(10, rng).triangularView<Eigen::Upper>();
    const auto s = eigenvalues(m);
    for (int i = 0; i < 10; ++i) {
        double nearest = 1e300;
        for (const auto& z : s.eigenvalues) nearest = std::min(nearest, std::abs(z - m(i, i)));
        CHECK(nearest < 1e-10 * std::max(1.0, std::abs(m(i, i))));
    }
}

TEST_CASE("two-grid eigenmatrix radius matches the 2x2 closed form") {
    KGridPlan plan;
    plan.intervals = 64;
    plan.sigma = -1e-6;
    plan.beta = 0.0;
    const auto m = assemble_eigenmatrix(plan, Frequency::of(kPi / 4));
    REQUIRE(m);
    double expected = 0.0;
    for (const auto& z : oracle::eigenvalues_2x2(*m)) expected = std::max(expected, std::abs(z));
    CHECK(spectral_radius(*m) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("input errors") {
    CHECK_THROWS_AS(eigenvalues(CMatrix::Zero(2, 3)), DimensionError);
    CHECK_THROWS_AS(eigenvalues(CMatrix::Zero(300, 300)), DimensionError);
    CMatrix m = CMatrix::Identity(2, 2);
    m(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(eigenvalues(m), InputError);
    m(0, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(spectral_radius(m), InputError);
}

TEST_CASE("matrix power") {
    std::mt19937_64 rng(5);
    const CMatrix a = random_matrix(4, rng);
    CHECK((matrix_power(a, 0) - CMatrix::Identity(4, 4)).norm() == 0.0);
    CHECK((matrix_power(a, 5) - a * a * a * a * a).norm() < 1e-10 * (a * a * a * a * a).norm());
}
