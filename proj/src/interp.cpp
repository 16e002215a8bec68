#include "bnls/interp.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace bnls {

namespace {

std::size_t locate_cell(std::span<const double> x, double v) {
    auto it = std::upper_bound(x.begin(), x.end(), v);
    if (it == x.begin()) return 0;
    std::size_t cell = static_cast<std::size_t>(it - x.begin()) - 1;
    return std::min(cell, x.size() - 2);
}

// Lagrange basis over the 4-point window starting at `base`.
std::array<double, 4> cubic_basis(std::span<const double> x, std::size_t base, double v) {
    std::array<double, 4> l{};
    for (int a = 0; a < 4; ++a) {
        double num = 1.0, den = 1.0;
        for (int b = 0; b < 4; ++b) {
            if (a == b) continue;
            num *= v - x[base + b];
            den *= x[base + a] - x[base + b];
        }
        l[a] = num / den;
    }
    return l;
}

template <typename T>
std::vector<T> interp_cubic_impl(std::span<const double> x_old, std::span<const T> y_old,
                                 std::span<const double> x_new) {
    if (x_old.size() != y_old.size()) throw std::invalid_argument("interp: size mismatch");
    if (x_old.size() < 4) throw std::invalid_argument("interp: needs at least 4 source nodes");
    std::vector<T> out(x_new.size());
    for (std::size_t i = 0; i < x_new.size(); ++i) {
        const double v = x_new[i];
        const std::size_t cell = locate_cell(x_old, v);
        const std::size_t base =
            std::min(x_old.size() - 4, cell == 0 ? 0 : cell - 1);
        const auto l = cubic_basis(x_old, base, v);
        T acc{};
        for (int a = 0; a < 4; ++a) acc += l[a] * y_old[base + a];
        out[i] = acc;
    }
    return out;
}

}  // namespace

std::vector<double> interp_cubic(std::span<const double> x_old, std::span<const double> y_old,
                                 std::span<const double> x_new) {
    return interp_cubic_impl<double>(x_old, y_old, x_new);
}

std::vector<Complex> interp_cubic(std::span<const double> x_old, std::span<const Complex> y_old,
                                  std::span<const double> x_new) {
    return interp_cubic_impl<Complex>(x_old, y_old, x_new);
}

double interp_cubic_at(std::span<const double> x_old, std::span<const double> y_old, double x) {
    const double xs[1] = {x};
    return interp_cubic_impl<double>(x_old, y_old, xs)[0];
}

std::vector<double> interp_linear(std::span<const double> x_old, std::span<const double> y_old,
                                  std::span<const double> x_new) {
    if (x_old.size() != y_old.size()) throw std::invalid_argument("interp: size mismatch");
    if (x_old.size() < 2) throw std::invalid_argument("interp: needs at least 2 source nodes");
    std::vector<double> out(x_new.size());
    for (std::size_t i = 0; i < x_new.size(); ++i) {
        const double v = x_new[i];
        const std::size_t c = locate_cell(x_old, v);
        const double t = (v - x_old[c]) / (x_old[c + 1] - x_old[c]);
        out[i] = (1.0 - t) * y_old[c] + t * y_old[c + 1];
    }
    return out;
}

}  // namespace bnls
