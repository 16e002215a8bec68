#pragma once

#include <span>
#include <vector>

namespace bnls {

// Finite-difference weights on arbitrary distinct nodes (Fornberg's
// recurrence). fd_weights(x0, xs, m)[j] is the weight of f(xs[j]) in the
// approximation of f^(m)(x0); the rule is exact for polynomials of degree
// <= xs.size() - 1.
std::vector<double> fd_weights(double x0, std::span<const double> xs, int order);

// Weights for all orders 0..max_order at once; result[k][j] is the weight of
// node j for the k-th derivative.
std::vector<std::vector<double>> fd_weights_all(double x0, std::span<const double> xs,
                                                int max_order);

}  // namespace bnls
