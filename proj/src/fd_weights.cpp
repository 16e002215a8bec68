#include "bnls/fd_weights.hpp"

#include <algorithm>
#include <stdexcept>

namespace bnls {

// Fornberg's recurrence over nested node sets.
std::vector<std::vector<double>> fd_weights_all(double x0, std::span<const double> xs,
                                                int max_order) {
    const int n = static_cast<int>(xs.size());
    if (n == 0) throw std::invalid_argument("fd_weights: empty node set");
    if (max_order < 0 || max_order >= n)
        throw std::invalid_argument("fd_weights: derivative order needs order+1 nodes");

    const int m = max_order;
    // c[j][k]: weight of node j for derivative order k
    std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }

    std::vector<std::vector<double>> out(m + 1, std::vector<double>(n));
    for (int k = 0; k <= m; ++k)
        for (int j = 0; j < n; ++j) out[k][j] = c[j][k];
    return out;
}

std::vector<double> fd_weights(double x0, std::span<const double> xs, int order) {
    return fd_weights_all(x0, xs, order)[order];
}

}  // namespace bnls
