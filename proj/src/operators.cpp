#include "bnls/operators.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "bnls/fd_weights.hpp"

namespace bnls {

namespace {

constexpr int kReach = 3;  // seven-point stencil

struct StencilPoint {
    double x;
    long col;  // -1 marks an outer ghost carrying the value zero
};

// Window of seven points around row i. Rows near the origin mirror nodes to
// negative radii (even closure: the ghost weight folds onto its image
// column); rows near the outer edge extend past R with zero-valued ghosts.
std::vector<StencilPoint> stencil_window(const RadialGrid& grid, long i) {
    const long n = static_cast<long>(grid.size());
    const double outer = grid.outer_radius();
    std::vector<StencilPoint> pts;
    pts.reserve(2 * kReach + 1);
    for (long m = i - kReach; m <= i + kReach; ++m) {
        if (m < 0) {
            pts.push_back({-grid[static_cast<std::size_t>(-m)], -m});
        } else if (m <= n - 1) {
            pts.push_back({grid[static_cast<std::size_t>(m)], m});
        } else {
            const long mirror = 2 * (n - 1) - m;
            pts.push_back({2.0 * outer - grid[static_cast<std::size_t>(mirror)], -1});
        }
    }
    return pts;
}

// Radial operator assembly from per-order coefficient callbacks evaluated at
// r > 0 plus an even-limit rule for the origin row.
template <typename CoeffFn, typename OriginFn>
BandedOperator assemble(const RadialGrid& grid, int max_order, CoeffFn coeff,
                        OriginFn origin_row) {
    const std::size_t n = grid.size();
    if (n < 8) throw std::invalid_argument("operator assembly needs at least 8 nodes");
    BandedOperator op(n, kReach, kReach);

    std::vector<double> xs(2 * kReach + 1);
    for (long i = 0; i < static_cast<long>(n) - 1; ++i) {
        const auto pts = stencil_window(grid, i);
        for (std::size_t k = 0; k < pts.size(); ++k) xs[k] = pts[k].x;
        const double r = grid[static_cast<std::size_t>(i)];
        const auto w = fd_weights_all(r, xs, max_order);
        for (std::size_t k = 0; k < pts.size(); ++k) {
            if (pts[k].col < 0) continue;  // clamped outer ghost, value zero
            double weight = 0.0;
            if (i == 0) {
                weight = origin_row(w, k);
            } else {
                for (int m = 1; m <= max_order; ++m) weight += coeff(m, r) * w[m][k];
            }
            if (weight != 0.0)
                op.add(static_cast<std::size_t>(i), static_cast<std::size_t>(pts[k].col), weight);
        }
    }
    // Outer row stays zero: the boundary value is pinned by the clamp.
    return op;
}

}  // namespace

BandedOperator biharmonic_operator(const RadialGrid& grid, int dim, BoundarySpec bc) {
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    if (!bc.even_at_origin || !bc.clamped_outer)
        throw std::invalid_argument("unsupported boundary closure");
    const double d = dim;
    auto coeff = [d](int order, double r) -> double {
        switch (order) {
            case 4: return 1.0;
            case 3: return 2.0 * (d - 1.0) / r;
            case 2: return (d - 1.0) * (d - 3.0) / (r * r);
            case 1: return -(d - 1.0) * (d - 3.0) / (r * r * r);
            default: return 0.0;
        }
    };
    // Even limit at the origin: Lap^2 psi(0) = d(d+2)/3 psi''''(0).
    auto origin = [d](const std::vector<std::vector<double>>& w, std::size_t k) {
        return d * (d + 2.0) / 3.0 * w[4][k];
    };
    return assemble(grid, 4, coeff, origin);
}

BandedOperator laplacian_operator(const RadialGrid& grid, int dim, BoundarySpec bc) {
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    if (!bc.even_at_origin || !bc.clamped_outer)
        throw std::invalid_argument("unsupported boundary closure");
    const double d = dim;
    auto coeff = [d](int order, double r) -> double {
        switch (order) {
            case 2: return 1.0;
            case 1: return (d - 1.0) / r;
            default: return 0.0;
        }
    };
    // Even limit: Lap psi(0) = d psi''(0).
    auto origin = [d](const std::vector<std::vector<double>>& w, std::size_t k) {
        return d * w[2][k];
    };
    return assemble(grid, 2, coeff, origin);
}

}  // namespace bnls
