#pragma once

#include <span>

#include "bnls/banded.hpp"
#include "bnls/field.hpp"
#include "bnls/grid.hpp"

namespace bnls {

struct NormReport {
    double power = 0.0;        // integral |psi|^2 r^{d-1} dr
    double hamiltonian = 0.0;  // kinetic - potential
    double kinetic = 0.0;      // integral |Lap psi|^2 r^{d-1} dr
    double potential = 0.0;    // integral |psi|^{2s+2} r^{d-1} dr / (1+s)
    double sup = 0.0;          // max |psi|
};

// Trapezoid of f(r) r^{d-1} dr over the non-uniform grid. Angular constants
// are omitted everywhere, consistently on both sides of every comparison.
double radial_integral(std::span<const double> f, const RadialGrid& grid, int dim);

double discrete_power(const WaveField& field, const RadialGrid& grid, int dim);

NormReport weighted_norms(const WaveField& field, const RadialGrid& grid, int dim,
                          double sigma);
// Variant reusing a previously assembled Laplacian (hot path in the run loop).
NormReport weighted_norms(const WaveField& field, const RadialGrid& grid, int dim,
                          double sigma, const BandedOperator& laplacian);

}  // namespace bnls
