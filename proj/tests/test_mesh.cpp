#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "bnls/mesh.hpp"
#include "bnls/norms.hpp"
#include "test_util.hpp"

using namespace bnls;
namespace tt = bnls::testing;

TEST_CASE("constant weight forces uniform spacing") {
    const auto src = RadialGrid::uniform(101, 1.0);
    const std::vector<double> w(101, 1.0);
    const auto grid = equidistribute(w, src, 11);
    REQUIRE(grid.size() == 11);
    for (std::size_t i = 0; i < 11; ++i)
        CHECK(grid[i] == doctest::Approx(0.1 * static_cast<double>(i)).epsilon(1e-12));
}

TEST_CASE("linear weight places nodes at sqrt(m/4)") {
    // weight(r) = r (plus a tiny floor) has cumulative r^2/2, so the
    // 5-node equidistribution sits at sqrt(m/4). Cross-checked against a
    // brute-force inversion of the cumulative integral on a dense grid.
    const std::size_t m = 20001;
    const auto src = RadialGrid::uniform(m, 1.0);
    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = std::max(src[i], 1e-12);
    const auto grid = equidistribute(w, src, 8);  // smallest admissible node count

    // brute-force oracle on a 10^6-point reference grid
    const std::size_t dense_n = 1000001;
    std::vector<double> cum(dense_n, 0.0);
    const double h = 1.0 / static_cast<double>(dense_n - 1);
    for (std::size_t i = 1; i < dense_n; ++i) {
        const double r0 = h * static_cast<double>(i - 1);
        const double r1 = h * static_cast<double>(i);
        cum[i] = cum[i - 1] + 0.5 * (std::max(r0, 1e-12) + std::max(r1, 1e-12)) * h;
    }
    for (std::size_t j = 0; j < 8; ++j) {
        const double target = cum.back() * static_cast<double>(j) / 7.0;
        std::size_t k = 0;
        while (k + 1 < dense_n && cum[k + 1] < target) ++k;
        const double frac = (target - cum[k]) / std::max(cum[k + 1] - cum[k], 1e-300);
        const double oracle = h * (static_cast<double>(k) + frac);
        CHECK(grid[j] == doctest::Approx(oracle).epsilon(1e-6));
        CHECK(grid[j] == doctest::Approx(std::sqrt(static_cast<double>(j) / 7.0)).epsilon(1e-6));
    }
}

TEST_CASE("Gaussian bump weight concentrates at least half the nodes") {
    const std::size_t m = 4001;
    const auto src = RadialGrid::uniform(m, 10.0);
    const double bump_width = 0.5;
    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double u = (src[i] - 5.0) / bump_width;
        w[i] = 1.0 + 50.0 * std::exp(-u * u);
    }
    const auto grid = equidistribute(w, src, 101);
    std::size_t inside = 0;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i)
        if (std::abs(grid[i] - 5.0) <= 2.0 * bump_width) ++inside;
    CHECK(inside * 2 >= grid.size() - 2);
}

TEST_CASE("equidistribution residual against an analytic cumulative (property)") {
    // w = 2 + sin(kr) has the closed-form cumulative 2r + (1 - cos(kr))/k.
    const double k = 3.0;
    const std::size_t m = 50001;
    const auto src = RadialGrid::uniform(m, 1.0);
    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = 2.0 + std::sin(k * src[i]);
    const auto grid = equidistribute(w, src, 64);
    auto cumulative = [k](double r) { return 2.0 * r + (1.0 - std::cos(k * r)) / k; };
    const double mean = cumulative(1.0) / 63.0;
    for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
        const double cell = cumulative(grid[j + 1]) - cumulative(grid[j]);
        CHECK(std::abs(cell - mean) / mean < 1e-8);
    }
}

TEST_CASE("equidistribute output is strictly increasing for rough weights (property)") {
    auto gen = tt::rng(5150);
    std::uniform_real_distribution<double> u(1e-3, 1e3);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t m = 300 + 17 * static_cast<std::size_t>(trial);
        const auto src = tt::random_grid(gen, m, 3.0);
        std::vector<double> w(m);
        for (auto& v : w) v = u(gen);
        const auto grid = equidistribute(w, src, 128);
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) CHECK(grid[i + 1] > grid[i]);
        CHECK(grid[0] == 0.0);
        CHECK(grid.outer_radius() == 3.0);
    }
}

TEST_CASE("invalid equidistribution inputs are rejected") {
    const auto src = RadialGrid::uniform(64, 1.0);
    std::vector<double> w(64, 1.0);
    CHECK_THROWS_AS(equidistribute(w, src, 7), std::invalid_argument);
    w[10] = 0.0;
    CHECK_THROWS_AS(equidistribute(w, src, 16), std::invalid_argument);
    w[10] = -1.0;
    CHECK_THROWS_AS(equidistribute(w, src, 16), std::invalid_argument);
    w[10] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(equidistribute(w, src, 16), std::invalid_argument);
}

TEST_CASE("w3 is 1 on uniform grids and sqrt(2) at a spacing doubling") {
    const auto uniform = RadialGrid::uniform(32, 1.0);
    WaveField f;
    f.values.assign(32, Complex(1.0, 0.0));
    const auto mw = build_monitor(f, uniform, {});
    for (std::size_t i = 0; i + 2 < 32; ++i) CHECK(mw.w3[i] == doctest::Approx(1.0).epsilon(1e-12));

    // spacings {h, h, 2h, 2h}: at the node where dr jumps, w3 = sqrt(2)
    const double h = 0.1;
    std::vector<double> nodes = {0.0, h, 2 * h, 4 * h, 6 * h};
    for (double r = 8 * h; nodes.size() < 12; r += 2 * h) nodes.push_back(r);
    RadialGrid jump(std::move(nodes));
    WaveField g;
    g.values.assign(jump.size(), Complex(1.0, 0.0));
    const auto mj = build_monitor(g, jump, {});
    CHECK(mj.w3[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("constant amplitude gives w1 identically 1") {
    auto gen = tt::rng(21);
    const auto grid = tt::random_grid(gen, 64, 4.0);
    WaveField f;
    f.values.assign(64, Complex(0.3, -0.4));  // |psi| = 0.5 everywhere
    const auto mw = build_monitor(f, grid, {});
    for (double v : mw.w1) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("monitor components stay >= 1 and compose by product (property)") {
    auto gen = tt::rng(88);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const auto grid = tt::random_grid(gen, 200, 8.0);
        WaveField f;
        f.values.resize(200);
        for (auto& v : f.values) v = Complex(u(gen), u(gen));
        const auto mw = build_monitor(f, grid, {});
        for (std::size_t i = 0; i < 200; ++i) {
            CHECK(mw.w1[i] >= 1.0);
            CHECK(mw.w2[i] >= 1.0);
            CHECK(mw.w3[i] >= 1.0);
            CHECK(mw.composite[i] ==
                  doctest::Approx(mw.w1[i] * mw.w2[i] * mw.w3[i]).epsilon(1e-14));
            CHECK(mw.composite[i] > 0.0);
        }
    }
}

TEST_CASE("needs_regrid counts nodes in the core window") {
    RegridPolicy policy;  // min 40 points in |r - r_max| <= 4 L
    WaveField f;

    // 200 interior nodes inside the window -> no regrid
    const auto dense = RadialGrid::uniform(401, 2.0);  // spacing 0.005
    f.values.assign(dense.size(), Complex(1.0, 0.0));
    CHECK_FALSE(needs_regrid(f, dense, 0.25, 1.0, policy));  // window 1.0 +- 1.0, 400 nodes

    // 39 nodes inside the window -> regrid
    std::vector<double> nodes;
    for (int i = 0; i < 39; ++i) nodes.push_back(0.9 + 0.2 * i / 38.0);
    // pad the exterior so the grid spans [0, 4]
    std::vector<double> full = {0.0, 0.2, 0.4, 0.6, 0.8};
    for (double r : nodes) full.push_back(r);
    for (double r = 1.3; r <= 4.01; r += 0.2) full.push_back(r);
    RadialGrid sparse{std::move(full)};
    f.values.assign(sparse.size(), Complex(1.0, 0.0));
    CHECK(needs_regrid(f, sparse, 0.025, 1.0, policy));  // window 1.0 +- 0.1 holds the 39
    CHECK_THROWS_AS(needs_regrid(f, sparse, 0.0, 1.0, policy), std::invalid_argument);
}

TEST_CASE("regrid between identical grids is bit-identical") {
    auto gen = tt::rng(3);
    const auto grid = tt::random_grid(gen, 128, 6.0);
    WaveField f;
    f.values.resize(128);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& v : f.values) v = Complex(u(gen), u(gen));
    const auto out = regrid(f, grid, grid);
    for (std::size_t i = 0; i < 128; ++i) {
        CHECK(out.values[i].real() == f.values[i].real());
        CHECK(out.values[i].imag() == f.values[i].imag());
    }
}

TEST_CASE("regrid of a Gaussian onto a clustered grid is 1e-8 accurate") {
    const std::size_t n = 512;
    const auto uniform = RadialGrid::uniform(n, 6.0);
    WaveField f;
    f.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        f.values[i] = Complex(std::exp(-uniform[i] * uniform[i]), 0.0);

    // clustered target grid from a bump monitor
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 1.0 + 8.0 * std::exp(-(uniform[i] - 2.0) * (uniform[i] - 2.0));
    const auto clustered = equidistribute(w, uniform, n);

    const auto moved = regrid(f, uniform, clustered);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        err = std::max(err, std::abs(moved.values[i].real() -
                                     std::exp(-clustered[i] * clustered[i])));
    CHECK(err < 1e-8);

    // round trip back to the uniform grid
    const auto back = regrid(moved, clustered, uniform);
    double rt = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        rt = std::max(rt, std::abs(back.values[i] - f.values[i]));
    CHECK(rt < 1e-6);
}

TEST_CASE("regrid rejects mismatched endpoints") {
    const auto a = RadialGrid::uniform(64, 1.0);
    const auto b = RadialGrid::uniform(64, 2.0);
    WaveField f;
    f.values.assign(64, Complex(1.0, 0.0));
    CHECK_THROWS_AS(regrid(f, a, b), std::invalid_argument);
}

TEST_CASE("w3 smooths the transition layer of a collapse-like monitor") {
    // Focused ring whose amplitude dwarfs the reference: the arclength
    // monitor drops from core scale to its floor over a short distance, so
    // without w3 the equidistributed spacing jumps abruptly; with w3 the
    // grading stays gentle.
    const std::size_t n = 512;
    auto gen = tt::rng(6);
    const auto pre = tt::random_grid(gen, n, 10.0);
    std::vector<double> bump(n);
    for (std::size_t i = 0; i < n; ++i)
        bump[i] = 1.0 + 2000.0 * std::exp(-(pre[i] - 5.0) * (pre[i] - 5.0) / (0.1 * 0.1));
    const auto src = equidistribute(bump, pre, n);  // clustered like a previous adapted grid

    WaveField f;
    f.values.resize(n);
    const double ell = 0.02;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = (src[i] - 5.0) / ell;
        f.values[i] = Complex(100.0 * std::exp(-u * u), 0.0);
    }
    MonitorParams with_w3;
    with_w3.amplitude_ref = 1.0;  // initial-amplitude reference
    MonitorParams without_w3 = with_w3;
    without_w3.use_w3 = false;

    const auto smooth = adapt_grid(f, src, with_w3);
    const auto sharp = adapt_grid(f, src, without_w3);
    CHECK(max_spacing_ratio(sharp) > 50.0);
    CHECK(max_spacing_ratio(smooth) < 50.0);
    CHECK(max_spacing_ratio(smooth) < max_spacing_ratio(sharp) / 10.0);
}
