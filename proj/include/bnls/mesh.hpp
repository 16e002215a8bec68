#pragma once

#include <cstddef>
#include <span>

#include "bnls/field.hpp"
#include "bnls/grid.hpp"

namespace bnls {

// Settings for the composite monitor w1 * w2 * w3.
//
//   w1 = sqrt(1 + (s |dA/dr| / A_ref)^2)   solution-resolution (arclength) term
//   w2 = 1 + dr / dr_cap                   maximum-spacing penalty
//   w3 = sqrt(1 + |d2r| / dr)              grid-smoothness penalty
//
// A_ref is a fixed amplitude reference (the initial sup of |psi| during a
// simulation). As the solution focuses, the core's share of the monitor mass
// grows with the amplitude, so nodes keep migrating into the singular region;
// w2 bounds the exterior spacing so roughly a quarter of the nodes stay
// outside, and w3 keeps the spacing transition between the two zones gradual.
struct MonitorParams {
    double scale_length = 0.0;   // s; 0 -> outer_radius / 8
    double amplitude_ref = 0.0;  // A_ref; 0 -> current max |psi|
    double dr_cap = 0.0;         // 0 -> outer_radius / (n/4)
    bool use_w3 = true;          // disabled only by tests probing the transition layer
    int max_sweeps = 10;
    double movement_tol = 1e-3;
};

struct MonitorWeights {
    std::vector<double> w1, w2, w3, composite;
};

struct RegridPolicy {
    int min_core_points = 40;
    double core_window_widths = 4.0;  // core window is |r - r_max| <= widths * L
};

// De Boor equidistribution: new nodes split the cumulative trapezoid integral
// of the weight into n_new - 1 equal parts (monotone inversion of the
// cumulative integral, exact for the piecewise-linear weight).
RadialGrid equidistribute(std::span<const double> weight, const RadialGrid& grid_old,
                          std::size_t n_new);

MonitorWeights build_monitor(const WaveField& field, const RadialGrid& grid,
                             const MonitorParams& params);

// Fixed-point iteration of equidistribute over the composite monitor: w1 is
// frozen on the old grid and transferred linearly, w2 and w3 follow the
// evolving grid. At most max_sweeps sweeps; stops once the largest node
// movement drops below movement_tol of the local spacing.
RadialGrid adapt_grid(const WaveField& field, const RadialGrid& grid,
                      const MonitorParams& params);

std::size_t count_core_points(const RadialGrid& grid, double ring_radius, double window);

// True when fewer than policy.min_core_points nodes remain inside
// |r - r_max| <= core_window_widths * width_scale.
bool needs_regrid(const WaveField& field, const RadialGrid& grid, double width_scale,
                  double ring_radius, const RegridPolicy& policy);

// Transfer the solution to a new grid sharing both endpoints; real and
// imaginary parts are interpolated independently by local piecewise cubics.
WaveField regrid(const WaveField& field, const RadialGrid& grid_old,
                 const RadialGrid& grid_new);

// Largest adjacent-cell spacing ratio (>= 1) and largest |d2r|/dr of a grid.
double max_spacing_ratio(const RadialGrid& grid);
double max_second_difference_ratio(const RadialGrid& grid);

}  // namespace bnls
