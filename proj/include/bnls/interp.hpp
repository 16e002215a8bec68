#pragma once

#include <span>
#include <vector>

#include "bnls/field.hpp"

namespace bnls {

// Local piecewise-cubic (4-point Lagrange) interpolation on sorted abscissae.
// Windows are clamped at the ends; evaluation at a source node reproduces the
// sample bit-exactly.
std::vector<double> interp_cubic(std::span<const double> x_old, std::span<const double> y_old,
                                 std::span<const double> x_new);
std::vector<Complex> interp_cubic(std::span<const double> x_old, std::span<const Complex> y_old,
                                  std::span<const double> x_new);
double interp_cubic_at(std::span<const double> x_old, std::span<const double> y_old, double x);

// Piecewise-linear interpolation (used for monitor transfer between grids).
std::vector<double> interp_linear(std::span<const double> x_old, std::span<const double> y_old,
                                  std::span<const double> x_new);

}  // namespace bnls
