#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "bnls/field.hpp"
#include "bnls/grid.hpp"

namespace bnls::testing {

// Deterministic RNG for property tests.
inline std::mt19937 rng(unsigned seed) { return std::mt19937(seed); }

// Random strictly-increasing grid on [0, outer] with spacing jitter.
inline RadialGrid random_grid(std::mt19937& gen, std::size_t n, double outer) {
    std::uniform_real_distribution<double> jitter(0.2, 1.8);
    std::vector<double> gaps(n - 1);
    double total = 0.0;
    for (auto& g : gaps) {
        g = jitter(gen);
        total += g;
    }
    std::vector<double> nodes(n);
    nodes[0] = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        acc += gaps[i];
        nodes[i + 1] = outer * acc / total;
    }
    nodes.back() = outer;
    return RadialGrid(std::move(nodes));
}

// Dense complex Gaussian elimination with partial pivoting (test oracle,
// independent of the banded path).
inline std::vector<Complex> dense_solve(std::vector<std::vector<Complex>> a,
                                        std::vector<Complex> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
        if (std::abs(a[p][k]) == 0.0) throw std::runtime_error("dense oracle: singular");
        std::swap(a[p], a[k]);
        std::swap(b[p], b[k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex m = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= m * a[k][j];
            b[i] -= m * b[k];
        }
    }
    std::vector<Complex> x(n);
    for (std::size_t k = n; k-- > 0;) {
        Complex acc = b[k];
        for (std::size_t j = k + 1; j < n; ++j) acc -= a[k][j] * x[j];
        x[k] = acc / a[k][k];
    }
    return x;
}

// Exact radial biharmonic of a function given its first four derivatives.
struct RadialDerivatives {
    double f, f1, f2, f3, f4;
};

inline double exact_biharmonic(const RadialDerivatives& d, double r, int dim) {
    const double dd = dim;
    return d.f4 + 2.0 * (dd - 1.0) / r * d.f3 + (dd - 1.0) * (dd - 3.0) / (r * r) * d.f2 -
           (dd - 1.0) * (dd - 3.0) / (r * r * r) * d.f1;
}

inline RadialDerivatives gaussian_derivatives(double r) {
    const double f = std::exp(-r * r);
    return {f, -2.0 * r * f, (4.0 * r * r - 2.0) * f, (12.0 * r - 8.0 * r * r * r) * f,
            (16.0 * r * r * r * r - 48.0 * r * r + 12.0) * f};
}

inline double linf(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace bnls::testing
