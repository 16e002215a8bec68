#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "bnls/fd_weights.hpp"
#include "bnls/norms.hpp"
#include "bnls/operators.hpp"
#include "test_util.hpp"

using namespace bnls;
namespace tt = bnls::testing;

namespace {

std::vector<Complex> sample(const RadialGrid& grid, double (*f)(double)) {
    std::vector<Complex> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = Complex(f(grid[i]), 0.0);
    return v;
}

// Row scale for relative roundoff comparisons: sum_j |w_ij| |psi_j|.
double row_scale(const BandedOperator& op, const std::vector<Complex>& v, std::size_t i) {
    double s = 0.0;
    const long jlo = std::max<long>(0, static_cast<long>(i) - op.lower_bands());
    const long jhi =
        std::min<long>(static_cast<long>(op.size()) - 1, static_cast<long>(i) + op.upper_bands());
    for (long j = jlo; j <= jhi; ++j)
        s += std::abs(op.at(i, static_cast<std::size_t>(j))) * std::abs(v[static_cast<std::size_t>(j)]);
    return s;
}

}  // namespace

TEST_CASE("Fornberg weights reproduce the classic uniform stencils") {
    std::vector<double> xs(7);
    const double h = 0.1;
    for (int k = 0; k < 7; ++k) xs[k] = (k - 3) * h;
    const auto w = fd_weights_all(0.0, xs, 4);

    const double d1[7] = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
    const double d2[7] = {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};
    const double d4[7] = {-1.0 / 6, 2.0, -13.0 / 2, 28.0 / 3, -13.0 / 2, 2.0, -1.0 / 6};
    for (int k = 0; k < 7; ++k) {
        CHECK(w[1][k] * h == doctest::Approx(d1[k]).epsilon(1e-12));
        CHECK(w[2][k] * h * h == doctest::Approx(d2[k]).epsilon(1e-12));
        CHECK(w[4][k] * h * h * h * h == doctest::Approx(d4[k]).epsilon(1e-12));
    }
}

TEST_CASE("biharmonic annihilates quadratics on non-uniform grids") {
    auto gen = tt::rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const auto grid = tt::random_grid(gen, 64, 7.0);
        const auto op = biharmonic_operator(grid, 2);
        std::vector<Complex> v(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) v[i] = Complex(grid[i] * grid[i], 0.0);
        const auto out = op.apply(v);
        for (std::size_t i = 3; i + 3 < grid.size(); ++i)
            CHECK(std::abs(out[i]) <= 1e-9 * row_scale(op, v, i));
    }
}

TEST_CASE("biharmonic of r^4 is the constant 8 d (d+2)") {
    auto gen = tt::rng(59);
    for (int d : {1, 2, 3, 4}) {
        const auto grid = tt::random_grid(gen, 80, 6.0);
        const auto op = biharmonic_operator(grid, d);
        std::vector<Complex> v(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double r = grid[i];
            v[i] = Complex(r * r * r * r, 0.0);
        }
        const auto out = op.apply(v);
        const double expect = 8.0 * d * (d + 2);  // 64 in d = 2
        for (std::size_t i = 0; i + 3 < grid.size(); ++i) {
            const double scale = std::max(row_scale(op, v, i), std::abs(expect));
            CHECK(std::abs(out[i].real() - expect) <= 1e-9 * scale);
            CHECK(std::abs(out[i].imag()) <= 1e-9 * scale);
        }
    }
}

TEST_CASE("polynomial exactness r^k, k = 0..6, away from the origin") {
    auto gen = tt::rng(101);
    for (int trial = 0; trial < 8; ++trial) {
        const auto grid = tt::random_grid(gen, 72, 9.0);
        const int d = 2 + trial % 3;
        const auto op = biharmonic_operator(grid, d);
        for (int k = 0; k <= 6; ++k) {
            std::vector<Complex> v(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) v[i] = Complex(std::pow(grid[i], k), 0.0);
            const auto out = op.apply(v);
            for (std::size_t i = 3; i + 3 < grid.size(); ++i) {
                const double r = grid[i];
                // exact radial calculus for f = r^k
                const double f1 = k >= 1 ? k * std::pow(r, k - 1) : 0.0;
                const double f2 = k >= 2 ? k * (k - 1) * std::pow(r, k - 2) : 0.0;
                const double f3 = k >= 3 ? k * (k - 1) * (k - 2) * std::pow(r, k - 3) : 0.0;
                const double f4 = k >= 4 ? k * (k - 1) * (k - 2) * (k - 3) * std::pow(r, k - 4) : 0.0;
                const double expect =
                    tt::exact_biharmonic({std::pow(r, k), f1, f2, f3, f4}, r, d);
                const double scale = std::max(row_scale(op, v, i), 1.0);
                CHECK(std::abs(out[i].real() - expect) <= 1e-9 * scale);
            }
        }
    }
}

namespace {

// L-inf error of the discrete biharmonic against the analytic one for
// f = exp(-r^2), over rows [row_lo, n - 4].
double gaussian_biharmonic_error(std::size_t n, int d, double outer, std::size_t row_lo) {
    const auto grid = RadialGrid::uniform(n, outer);
    const auto op = biharmonic_operator(grid, d);
    std::vector<Complex> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = Complex(std::exp(-grid[i] * grid[i]), 0.0);
    const auto out = op.apply(v);
    double err = 0.0;
    for (std::size_t i = row_lo; i + 3 < n; ++i) {
        const double exact = tt::exact_biharmonic(tt::gaussian_derivatives(grid[i]), grid[i], d);
        err = std::max(err, std::abs(out[i].real() - exact));
    }
    return err;
}

}  // namespace

TEST_CASE("third-order convergence on a smooth compactly-supported field") {
    // Uniform refinement keeps the exponent measurable before roundoff bites.
    double prev = gaussian_biharmonic_error(256, 2, 24.0, 3);
    for (std::size_t n : {512u, 1024u}) {
        const double cur = gaussian_biharmonic_error(n, 2, 24.0, 3);
        const double order = std::log2(prev / cur);
        CHECK(order >= 3.0);
        prev = cur;
    }
}

TEST_CASE("origin closure keeps order >= 3 at the three innermost rows") {
    auto origin_error = [](std::size_t n) {
        const auto grid = RadialGrid::uniform(n, 24.0);
        const auto op = biharmonic_operator(grid, 2);
        std::vector<Complex> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = Complex(std::exp(-grid[i] * grid[i]), 0.0);
        const auto out = op.apply(v);
        double err = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            double exact;
            if (i == 0) {
                // even limit: d(d+2)/3 * f''''(0) with f''''(0) = 12
                exact = 2.0 * 4.0 / 3.0 * 12.0;
            } else {
                exact = tt::exact_biharmonic(tt::gaussian_derivatives(grid[i]), grid[i], 2);
            }
            err = std::max(err, std::abs(out[i].real() - exact));
        }
        return err;
    };
    double prev = origin_error(128);
    for (std::size_t n : {256u, 512u}) {
        const double cur = origin_error(n);
        CHECK(std::log2(prev / cur) >= 3.0);
        prev = cur;
    }
}

TEST_CASE("spherical eigenfunction sin(kr)/r in d=3 converges at order >= 3") {
    const double k = 2.0;
    auto eigen_error = [k](std::size_t n) {
        const auto grid = RadialGrid::uniform(n, 20.0);
        const auto op = biharmonic_operator(grid, 3);
        std::vector<Complex> v(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double r = grid[i];
            v[i] = Complex(r == 0.0 ? k : std::sin(k * r) / r, 0.0);
        }
        const auto out = op.apply(v);
        const double k4 = k * k * k * k;
        double err = 0.0;
        // Lap psi = -k^2 psi, so Lap^2 psi = k^4 psi; skip the clamped tail
        // where sin(kr)/r is not small.
        for (std::size_t i = 0; i + 6 < n; ++i)
            err = std::max(err, std::abs(out[i].real() - k4 * v[i].real()));
        return err;
    };
    double prev = eigen_error(256);
    for (std::size_t n : {512u, 1024u}) {
        const double cur = eigen_error(n);
        CHECK(std::log2(prev / cur) >= 2.9);
        prev = cur;
    }
}

TEST_CASE("small grids are rejected") {
    CHECK_THROWS_AS(biharmonic_operator(RadialGrid::uniform(7, 1.0), 2), std::invalid_argument);
}

TEST_CASE("weighted norms: zero field") {
    const auto grid = RadialGrid::uniform(64, 5.0);
    WaveField f;
    f.values.assign(64, Complex(0.0, 0.0));
    const auto norms = weighted_norms(f, grid, 2, 4.0);
    CHECK(norms.power == 0.0);
    CHECK(norms.hamiltonian == 0.0);
}

TEST_CASE("weighted norms: Gaussian power in d=2 is 1/4") {
    const auto grid = RadialGrid::uniform(4096, 10.0);
    WaveField f;
    f.values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        f.values[i] = Complex(std::exp(-grid[i] * grid[i]), 0.0);
    const auto norms = weighted_norms(f, grid, 2, 4.0);
    CHECK(norms.power == doctest::Approx(0.25).epsilon(1e-5));
    CHECK(norms.sup == doctest::Approx(1.0));
}

TEST_CASE("Hamiltonian terms scale as eps^2 and eps^{2 sigma + 2}") {
    const auto grid = RadialGrid::uniform(512, 8.0);
    const double sigma = 2.0;
    auto norms_at = [&](double eps) {
        WaveField f;
        f.values.resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            f.values[i] = Complex(eps * std::exp(-grid[i] * grid[i]), 0.0);
        return weighted_norms(f, grid, 2, sigma);
    };
    const auto a = norms_at(1e-3);
    const auto b = norms_at(2e-3);
    CHECK(b.kinetic / a.kinetic == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(b.potential / a.potential == doctest::Approx(std::pow(2.0, 2 * sigma + 2)).epsilon(1e-10));
    // linear regime: H is dominated by the kinetic term
    CHECK(a.hamiltonian == doctest::Approx(a.kinetic).epsilon(1e-9));
}

TEST_CASE("radial integral matches closed forms") {
    const auto grid = RadialGrid::uniform(2048, 6.0);
    std::vector<double> f(grid.size(), 1.0);
    // integral r^{d-1} dr = R^d / d
    for (int d : {1, 2, 3}) {
        const double got = radial_integral(f, grid, d);
        CHECK(got == doctest::Approx(std::pow(6.0, d) / d).epsilon(1e-6));
    }
}
