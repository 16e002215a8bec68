#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace bnls {

// Real standing-wave ground-state profile. dim == 1 holds the line problem
//   -R'''' - R + |R|^{2s} R = 0   on a symmetric interval,
// dim >= 2 the radial problem
//   -Lap_rho^2 R - R + |R|^{2s} R = 0   on [0, radius].
struct GroundStateProfile {
    std::vector<double> xs;
    std::vector<double> values;
    double sigma = 0.0;
    int dim = 1;
    double peak = 0.0;
    double norm_sq = 0.0;   // ||R||_2^2 with the dimension's radial weight
    double residual = 0.0;  // L-inf discrete residual of the defining equation
    int iterations = 0;
};

struct GroundStateOptions {
    double tol = 1e-12;  // L-inf difference between successive iterates
    int max_iter = 800;
};

// Power-renormalized fixed point R <- M^gamma (1 + D^4)^{-1} |R|^{2s} R with
// the stabilizing exponent gamma = (2s+1)/(2s), solved spectrally on a
// periodic box [-half_width, half_width). Gaussian initial guess.
GroundStateProfile solve_ground_state_1d(double sigma, double half_width = 25.0,
                                         std::size_t n = 4096,
                                         GroundStateOptions opts = {});

// Same iteration with the banded radial biharmonic operator (even closure at
// the origin, clamped outer edge) in place of the Fourier symbol.
GroundStateProfile solve_ground_state_radial(double sigma, int dim, double radius = 30.0,
                                             std::size_t n = 2000,
                                             GroundStateOptions opts = {});

// ||R_B||_2^2 at the critical exponent sigma = 4/d. Memoized per dimension.
double critical_power(int dim);

// Text rows "x R(x)" with a header carrying sigma, d, norm_sq, residual.
void write_profile(std::ostream& os, const GroundStateProfile& profile);
GroundStateProfile read_profile(std::istream& is);

}  // namespace bnls
