#pragma once

#include "bnls/banded.hpp"
#include "bnls/grid.hpp"

namespace bnls {

// Boundary closure for the radial operators. At the origin the field is even
// (psi_r(0) = psi_rrr(0) = 0), realized by folding mirror ghost nodes back
// onto their images. At the outer edge the field is clamped
// (psi = psi_r = 0 at R), realized by ghost nodes carrying the value zero;
// the last row itself is left empty so implicit schemes reduce to the
// identity there.
struct BoundarySpec {
    bool even_at_origin = true;
    bool clamped_outer = true;
};

// Banded seven-point discretization of the radial biharmonic operator
//   d^4/dr^4 + 2(d-1)/r d^3/dr^3 + (d-1)(d-3)/r^2 d^2/dr^2 - (d-1)(d-3)/r^3 d/dr
// on a non-uniform grid. Every row carries the image of the local degree-6
// interpolating polynomial evaluated at the row's node, so rows are exact for
// polynomials of degree <= 6 away from the boundaries (and for even fields at
// the origin-adjacent rows). Coefficient singularities are never evaluated at
// r = 0; the origin row uses the even limit  d(d+2)/3 * psi''''(0).
BandedOperator biharmonic_operator(const RadialGrid& grid, int dim, BoundarySpec bc = {});

// Companion radial Laplacian  d^2/dr^2 + (d-1)/r d/dr  with the same windows
// and closures (origin limit d * psi''(0)). Used for the Hamiltonian.
BandedOperator laplacian_operator(const RadialGrid& grid, int dim, BoundarySpec bc = {});

}  // namespace bnls
