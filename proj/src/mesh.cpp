#include "bnls/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bnls/interp.hpp"

namespace bnls {

namespace {

double monitor_scale(const MonitorParams& p, const RadialGrid& grid) {
    return p.scale_length > 0.0 ? p.scale_length : grid.outer_radius() / 8.0;
}

double monitor_cap(const MonitorParams& p, const RadialGrid& grid) {
    return p.dr_cap > 0.0 ? p.dr_cap
                          : grid.outer_radius() / (static_cast<double>(grid.size()) / 4.0);
}

// w2 and w3 depend on the grid only.
void grid_weights(const RadialGrid& grid, const MonitorParams& params, double cap,
                  std::vector<double>& w2, std::vector<double>& w3) {
    const std::size_t n = grid.size();
    w2.assign(n, 1.0);
    w3.assign(n, 1.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double dr = grid.spacing(i);
        if (!(dr > 0.0)) throw std::logic_error("degenerate grid spacing");
        w2[i] = 1.0 + dr / cap;
    }
    w2[n - 1] = w2[n - 2];
    if (params.use_w3) {
        for (std::size_t i = 0; i + 2 < n; ++i) {
            const double dr = grid.spacing(i);
            const double d2r = grid.spacing(i + 1) - dr;
            w3[i] = std::sqrt(1.0 + std::abs(d2r) / dr);
        }
    }
}

}  // namespace

RadialGrid equidistribute(std::span<const double> weight, const RadialGrid& grid_old,
                          std::size_t n_new) {
    const std::size_t m = grid_old.size();
    if (n_new < 8) throw std::invalid_argument("equidistribute: need at least 8 nodes");
    if (weight.size() != m) throw std::invalid_argument("equidistribute: weight length mismatch");
    for (double w : weight) {
        if (!(w > 0.0) || !std::isfinite(w))
            throw std::invalid_argument("equidistribute: weight must be positive and finite");
    }

    std::vector<double> cum(m, 0.0);
    for (std::size_t i = 0; i + 1 < m; ++i)
        cum[i + 1] = cum[i] + 0.5 * (weight[i] + weight[i + 1]) * grid_old.spacing(i);
    const double total = cum[m - 1];

    std::vector<double> nodes(n_new);
    nodes.front() = grid_old[0];
    nodes.back() = grid_old[m - 1];
    std::size_t cell = 0;
    for (std::size_t j = 1; j + 1 < n_new; ++j) {
        const double target = total * static_cast<double>(j) / static_cast<double>(n_new - 1);
        while (cell + 2 < m && cum[cell + 1] < target) ++cell;
        const double excess = target - cum[cell];
        const double h = grid_old.spacing(cell);
        const double w0 = weight[cell];
        const double slope = (weight[cell + 1] - w0) / h;
        // Invert the quadratic cumulative of the linear weight; the
        // discriminant stays >= min(w)^2 > 0.
        const double disc = std::max(w0 * w0 + 2.0 * slope * excess, 0.0);
        double s = 2.0 * excess / (w0 + std::sqrt(disc));
        s = std::clamp(s, 0.0, h);
        nodes[j] = grid_old[cell] + s;
    }
    for (std::size_t j = 0; j + 1 < n_new; ++j) {
        if (!(nodes[j + 1] > nodes[j]))
            throw std::logic_error("equidistribute: produced non-increasing nodes");
    }
    return RadialGrid(std::move(nodes));
}

MonitorWeights build_monitor(const WaveField& field, const RadialGrid& grid,
                             const MonitorParams& params) {
    const std::size_t n = grid.size();
    if (field.size() != n) throw std::invalid_argument("build_monitor: field/grid mismatch");

    MonitorWeights mw;
    mw.w1.assign(n, 1.0);

    std::vector<double> amp(n);
    double amp_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        amp[i] = std::abs(field.values[i]);
        amp_max = std::max(amp_max, amp[i]);
    }
    const double s = monitor_scale(params, grid);
    const double amp_ref = params.amplitude_ref > 0.0 ? params.amplitude_ref : amp_max;
    if (amp_max > 0.0) {
        // centered difference of the complex field: phase winding needs
        // resolution just as much as amplitude structure does
        for (std::size_t i = 0; i < n; ++i) {
            double deriv;
            if (i == 0) {
                deriv = std::abs(field.values[1] - field.values[0]) / grid.spacing(0);
            } else if (i == n - 1) {
                deriv = std::abs(field.values[n - 1] - field.values[n - 2]) / grid.spacing(n - 2);
            } else {
                deriv = std::abs(field.values[i + 1] - field.values[i - 1]) /
                        (grid[i + 1] - grid[i - 1]);
            }
            const double g = s * deriv / amp_ref;
            mw.w1[i] = std::sqrt(1.0 + g * g);
        }
    }

    grid_weights(grid, params, monitor_cap(params, grid), mw.w2, mw.w3);

    mw.composite.resize(n);
    for (std::size_t i = 0; i < n; ++i) mw.composite[i] = mw.w1[i] * mw.w2[i] * mw.w3[i];
    return mw;
}

RadialGrid adapt_grid(const WaveField& field, const RadialGrid& grid,
                      const MonitorParams& params) {
    const std::size_t n = grid.size();
    const MonitorWeights base = build_monitor(field, grid, params);
    const double cap = monitor_cap(params, grid);

    RadialGrid current = equidistribute(base.composite, grid, n);
    std::vector<double> w2, w3;
    for (int sweep = 1; sweep < params.max_sweeps; ++sweep) {
        std::vector<double> w1 = interp_linear(grid.nodes(), base.w1, current.nodes());
        grid_weights(current, params, cap, w2, w3);
        for (std::size_t i = 0; i < n; ++i) w1[i] = std::max(w1[i], 1.0) * w2[i] * w3[i];
        RadialGrid next = equidistribute(w1, current, n);
        double movement = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double local = std::min(current.spacing(i - 1), current.spacing(i));
            movement = std::max(movement, std::abs(next[i] - current[i]) / local);
        }
        current = std::move(next);
        if (movement < params.movement_tol) break;
    }
    return current;
}

std::size_t count_core_points(const RadialGrid& grid, double ring_radius, double window) {
    const auto& r = grid.nodes();
    auto lo = std::lower_bound(r.begin(), r.end(), ring_radius - window);
    auto hi = std::upper_bound(r.begin(), r.end(), ring_radius + window);
    return static_cast<std::size_t>(hi - lo);
}

bool needs_regrid(const WaveField& field, const RadialGrid& grid, double width_scale,
                  double ring_radius, const RegridPolicy& policy) {
    if (field.size() != grid.size()) throw std::invalid_argument("needs_regrid: size mismatch");
    if (!(width_scale > 0.0)) throw std::invalid_argument("needs_regrid: width must be positive");
    const double window = policy.core_window_widths * width_scale;
    return count_core_points(grid, ring_radius, window) <
           static_cast<std::size_t>(policy.min_core_points);
}

WaveField regrid(const WaveField& field, const RadialGrid& grid_old,
                 const RadialGrid& grid_new) {
    if (field.size() != grid_old.size()) throw std::invalid_argument("regrid: size mismatch");
    if (grid_old[0] != grid_new[0] ||
        grid_old.outer_radius() != grid_new.outer_radius())
        throw std::invalid_argument("regrid: grids must share endpoints");
    if (!field.finite()) throw std::invalid_argument("regrid: field must be finite");

    WaveField out;
    out.time = field.time;
    out.values = interp_cubic(grid_old.nodes(), std::span<const Complex>(field.values),
                              grid_new.nodes());
    if (!out.finite()) throw std::runtime_error("regrid: interpolation produced non-finite values");
    return out;
}

double max_spacing_ratio(const RadialGrid& grid) {
    double worst = 1.0;
    for (std::size_t i = 0; i + 2 < grid.size(); ++i) {
        const double a = grid.spacing(i);
        const double b = grid.spacing(i + 1);
        worst = std::max(worst, std::max(a / b, b / a));
    }
    return worst;
}

double max_second_difference_ratio(const RadialGrid& grid) {
    double worst = 0.0;
    for (std::size_t i = 0; i + 2 < grid.size(); ++i) {
        const double dr = grid.spacing(i);
        worst = std::max(worst, std::abs(grid.spacing(i + 1) - dr) / dr);
    }
    return worst;
}

}  // namespace bnls
