#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>

#include "bnls/banded.hpp"
#include "bnls/operators.hpp"
#include "test_util.hpp"

using namespace bnls;
namespace tt = bnls::testing;

namespace {

BandedOperator random_band_matrix(std::mt19937& gen, std::size_t n, bool diag_dominant) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    BandedOperator op(n, 3, 3);
    for (std::size_t i = 0; i < n; ++i) {
        const long jlo = std::max<long>(0, static_cast<long>(i) - 3);
        const long jhi = std::min<long>(static_cast<long>(n) - 1, static_cast<long>(i) + 3);
        double offdiag = 0.0;
        for (long j = jlo; j <= jhi; ++j) {
            if (static_cast<std::size_t>(j) == i) continue;
            const Complex v(u(gen), u(gen));
            offdiag += std::abs(v);
            op.set(i, static_cast<std::size_t>(j), v);
        }
        const Complex d(u(gen), u(gen));
        const Complex diag = diag_dominant ? d + Complex(offdiag + 1.0, 0.0) : d;
        op.set(i, i, diag);
    }
    return op;
}

std::vector<std::vector<Complex>> to_dense(const BandedOperator& op) {
    const std::size_t n = op.size();
    std::vector<std::vector<Complex>> a(n, std::vector<Complex>(n, Complex(0, 0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = op.at(i, j);
    return a;
}

}  // namespace

TEST_CASE("identity operator applies and solves trivially") {
    const std::size_t n = 17;
    BandedOperator id(n, 3, 3);
    for (std::size_t i = 0; i < n; ++i) id.set(i, i, 1.0);
    std::vector<Complex> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = Complex(std::sin(1.0 + i), std::cos(2.0 * i));
    const auto y = id.apply(x);
    for (std::size_t i = 0; i < n; ++i) CHECK(y[i] == x[i]);
    const auto s = solve_banded(id, x);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(s[i] - x[i]) < 1e-15);
}

TEST_CASE("zero operator maps to zero") {
    BandedOperator z(9, 3, 3);
    std::vector<Complex> x(9, Complex(1.0, -2.0));
    for (const auto& v : z.apply(x)) CHECK(v == Complex(0.0, 0.0));
}

TEST_CASE("banded apply matches a dense multiply oracle") {
    auto gen = tt::rng(12345);
    const std::size_t n = 50;
    const auto op = random_band_matrix(gen, n, false);
    const auto dense = to_dense(op);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Complex> x(n);
    for (auto& v : x) v = Complex(u(gen), u(gen));
    const auto y = op.apply(x);
    for (std::size_t i = 0; i < n; ++i) {
        Complex acc(0, 0);
        for (std::size_t j = 0; j < n; ++j) acc += dense[i][j] * x[j];
        CHECK(std::abs(y[i] - acc) < 1e-13);
    }
}

TEST_CASE("tridiagonal Toeplitz solve reproduces the known solution") {
    // {-1, 2, -1} with rhs of ones: x = {2.5, 4, 4.5, 4, 2.5}.
    const std::size_t n = 5;
    BandedOperator op(n, 1, 1);
    for (std::size_t i = 0; i < n; ++i) {
        op.set(i, i, 2.0);
        if (i > 0) op.set(i, i - 1, -1.0);
        if (i + 1 < n) op.set(i, i + 1, -1.0);
    }
    const std::vector<Complex> rhs(n, Complex(1.0, 0.0));
    const auto x = solve_banded(op, rhs);
    const double expect[5] = {2.5, 4.0, 4.5, 4.0, 2.5};
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(x[i].real() - expect[i]) < 1e-13);
        CHECK(std::abs(x[i].imag()) < 1e-13);
    }
}

TEST_CASE("solve then apply returns the right-hand side (property)") {
    auto gen = tt::rng(777);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 16 + static_cast<std::size_t>(trial) * 7;
        const auto op = random_band_matrix(gen, n, true);
        std::vector<Complex> rhs(n);
        for (auto& v : rhs) v = Complex(u(gen), u(gen));
        const auto x = solve_banded(op, rhs);
        const auto back = op.apply(x);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            num = std::max(num, std::abs(back[i] - rhs[i]));
            den = std::max(den, std::abs(rhs[i]));
        }
        CHECK(num / den < 1e-10);
    }
}

TEST_CASE("banded solve matches the dense LU oracle") {
    auto gen = tt::rng(424242);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t n : {20u, 50u, 121u}) {
        const auto op = random_band_matrix(gen, n, true);
        std::vector<Complex> rhs(n);
        for (auto& v : rhs) v = Complex(u(gen), u(gen));
        const auto x = solve_banded(op, rhs);
        const auto y = tt::dense_solve(to_dense(op), rhs);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(x[i] - y[i]) < 1e-11);
    }
}

TEST_CASE("Crank-Nicolson system matches the dense oracle at small dt") {
    auto gen = tt::rng(9);
    const auto grid = tt::random_grid(gen, 120, 10.0);
    const auto biharm = biharmonic_operator(grid, 2);
    const auto sys = identity_plus_scaled(biharm, Complex(0.0, 0.5e-6));
    std::vector<Complex> rhs(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        rhs[i] = Complex(std::exp(-grid[i] * grid[i]), 0.1 * std::sin(grid[i]));
    const auto x = solve_banded(sys, rhs);
    const auto y = tt::dense_solve(to_dense(sys), rhs);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        num = std::max(num, std::abs(x[i] - y[i]));
        den = std::max(den, std::abs(y[i]));
    }
    CHECK(num / den < 1e-10);
}

TEST_CASE("singular pivot raises a condition report") {
    BandedOperator op(9, 3, 3);
    for (std::size_t i = 0; i + 1 < 9; ++i) op.set(i, i, 1.0);
    // last row identically zero
    std::vector<Complex> rhs(9, Complex(1.0, 0.0));
    CHECK_THROWS_WITH_AS(solve_banded(op, rhs), doctest::Contains("pivot"), std::runtime_error);
}

TEST_CASE("length mismatches are rejected") {
    BandedOperator op(9, 3, 3);
    for (std::size_t i = 0; i < 9; ++i) op.set(i, i, 1.0);
    std::vector<Complex> x(8);
    CHECK_THROWS_AS(op.apply(x), std::invalid_argument);
    CHECK_THROWS_AS(solve_banded(op, x), std::invalid_argument);
}

TEST_CASE("entries outside the band are rejected") {
    BandedOperator op(9, 3, 3);
    CHECK_THROWS_AS(op.set(0, 4, 1.0), std::out_of_range);
    CHECK_THROWS_AS(op.set(8, 2, 1.0), std::out_of_range);
    CHECK(op.at(0, 4) == Complex(0.0, 0.0));
}
