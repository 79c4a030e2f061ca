// Dense linear algebra tests: LU solves against known solutions, transpose
// solves, iterative refinement on ill-conditioned systems, singularity
// detection, and the 1-norm condition estimate against a brute-force
// inverse norm.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "bkm/linalg.hpp"

using bkm::LuDecomposition;
using bkm::Matrix;

namespace {

// ||A^{-1}||_1 by solving for every unit vector (exact up to solve error).
double inverse_one_norm(const LuDecomposition& lu) {
    const std::size_t n = lu.size();
    double best = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> e(n, 0.0);
        e[j] = 1.0;
        const std::vector<double> col = lu.solve(e);
        double s = 0.0;
        for (double v : col) s += std::fabs(v);
        best = std::max(best, s);
    }
    return best;
}

Matrix random_matrix(std::size_t n, std::uint64_t seed, double diag_boost) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = u(rng) + (i == j ? diag_boost : 0.0);
    return a;
}

}  // namespace

TEST_CASE("solves a known 3x3 system", "[linalg]") {
    Matrix a(3, 3);
    a(0, 0) = 2.0; a(0, 1) = 1.0; a(0, 2) = -1.0;
    a(1, 0) = -3.0; a(1, 1) = -1.0; a(1, 2) = 2.0;
    a(2, 0) = -2.0; a(2, 1) = 1.0; a(2, 2) = 2.0;
    const std::vector<double> b{8.0, -11.0, -3.0};
    const std::vector<double> x = LuDecomposition(a).solve(b);
    // Known solution x = (2, 3, -1).
    CHECK(std::fabs(x[0] - 2.0) <= 1e-13);
    CHECK(std::fabs(x[1] - 3.0) <= 1e-13);
    CHECK(std::fabs(x[2] + 1.0) <= 1e-13);
}

TEST_CASE("recovers a planted solution on random matrices", "[linalg]") {
    for (std::uint64_t seed : {11u, 22u, 33u}) {
        const std::size_t n = 24;
        Matrix a = random_matrix(n, seed, 4.0);
        std::mt19937_64 rng(seed + 1000);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        std::vector<double> want(n);
        for (double& v : want) v = u(rng);
        std::vector<double> b(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) b[i] += a(i, j) * want[j];
        const std::vector<double> x = LuDecomposition(a).solve(b);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(x[i] - want[i]) <= 1e-12);
    }
}

TEST_CASE("transpose solve", "[linalg]") {
    const std::size_t n = 9;
    Matrix a = random_matrix(n, 5u, 3.0);
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = std::sin(double(i) + 1.0);
    const std::vector<double> x = LuDecomposition(a).solve_transposed(b);
    // Verify A^T x = b directly.
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += a(j, i) * x[j];
        CHECK(std::fabs(s - b[i]) <= 1e-12);
    }
}

TEST_CASE("ill-conditioned solve stays backward stable", "[linalg]") {
    // Hilbert matrix of size 10, condition ~1e13. Storing the entries
    // 1/(i+j+1) and accumulating b in doubles already perturbs the true
    // solution of the *stored* system by ~condition * epsilon ~ 1e-3, so no
    // solver can return the planted vector much more accurately than that.
    // What the refined solve does guarantee is a machine-level residual.
    const std::size_t n = 10;
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 1.0 / double(i + j + 1);
    std::vector<double> want(n, 1.0);
    std::vector<double> b(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b[i] += a(i, j) * want[j];
    const std::vector<double> x = LuDecomposition(a).solve(b);
    for (std::size_t i = 0; i < n; ++i) {
        double r = -b[i];
        for (std::size_t j = 0; j < n; ++j) r += a(i, j) * x[j];
        CHECK(std::fabs(r) <= 1e-13);
    }
    for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(x[i] - 1.0) <= 1e-2);
}

TEST_CASE("singular matrices are rejected", "[linalg]") {
    Matrix a(3, 3);
    a(0, 0) = 1.0; a(0, 1) = 2.0; a(0, 2) = 3.0;
    a(1, 0) = 2.0; a(1, 1) = 4.0; a(1, 2) = 6.0;  // duplicate direction
    a(2, 0) = 0.0; a(2, 1) = 1.0; a(2, 2) = 1.0;
    CHECK_THROWS_AS(LuDecomposition(a), bkm::SingularMatrixError);

    Matrix z(2, 2);  // all zeros
    CHECK_THROWS_AS(LuDecomposition(z), bkm::SingularMatrixError);

    Matrix rect(2, 3);
    CHECK_THROWS_AS(LuDecomposition(rect), std::invalid_argument);
}

TEST_CASE("rhs length mismatch", "[linalg]") {
    Matrix a = random_matrix(4, 9u, 3.0);
    LuDecomposition lu(a);
    CHECK_THROWS_AS(lu.solve(std::vector<double>(5, 1.0)), std::invalid_argument);
    CHECK_THROWS_AS(lu.solve_transposed(std::vector<double>(3, 1.0)), std::invalid_argument);
}

TEST_CASE("condition estimate is exact for diagonal matrices", "[linalg]") {
    Matrix d(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = 10.0;
    d(2, 2) = 1e-4;
    const double est = LuDecomposition(d).condition_estimate();
    CHECK(std::fabs(est - 1e5) <= 1e-6 * 1e5);
}

TEST_CASE("condition estimate tracks the brute-force inverse norm", "[linalg]") {
    for (std::uint64_t seed : {2u, 7u, 19u, 23u}) {
        Matrix a = random_matrix(7, seed, 2.0);
        LuDecomposition lu(a);
        const double truth = a.one_norm() * inverse_one_norm(lu);
        const double est = lu.condition_estimate();
        INFO("seed " << seed << ": estimate " << est << " vs brute force " << truth);
        // Hager's method produces a lower bound that is usually tight;
        // accept a modest underestimate and tiny rounding overshoot.
        CHECK(est <= truth * 1.000001);
        CHECK(est >= truth / 10.0);
    }
}

TEST_CASE("matrix norms", "[linalg]") {
    Matrix a(2, 3);
    a(0, 0) = 1.0; a(0, 1) = -5.0; a(0, 2) = 2.0;
    a(1, 0) = -2.0; a(1, 1) = 3.0; a(1, 2) = 0.5;
    CHECK(a.max_abs() == 5.0);
    CHECK(a.one_norm() == 8.0);  // column 1: |-5| + |3|
}
