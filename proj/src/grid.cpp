#include "bnls/grid.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "bnls/textio.hpp"

namespace bnls {

RadialGrid::RadialGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) { validate(); }

void RadialGrid::validate() const {
    if (nodes_.size() < 2) throw std::invalid_argument("grid needs at least 2 nodes");
    if (nodes_.front() != 0.0) throw std::invalid_argument("grid must start at r = 0");
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
        if (!(nodes_[i + 1] > nodes_[i]))
            throw std::invalid_argument("grid nodes must be strictly increasing");
    }
    if (!std::isfinite(nodes_.back())) throw std::invalid_argument("grid nodes must be finite");
}

RadialGrid RadialGrid::uniform(std::size_t n, double outer_radius) {
    if (n < 2) throw std::invalid_argument("grid needs at least 2 nodes");
    if (!(outer_radius > 0.0)) throw std::invalid_argument("outer_radius must be positive");
    std::vector<double> nodes(n);
    for (std::size_t i = 0; i < n; ++i)
        nodes[i] = outer_radius * static_cast<double>(i) / static_cast<double>(n - 1);
    nodes.front() = 0.0;
    nodes.back() = outer_radius;
    return RadialGrid(std::move(nodes));
}

std::size_t RadialGrid::locate(double r) const {
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
    if (it == nodes_.begin()) return 0;
    std::size_t cell = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    return std::min(cell, nodes_.size() - 2);
}

void RadialGrid::dump(std::ostream& os) const {
    for (double r : nodes_) os << fmt_g17(r) << '\n';
}

RadialGrid RadialGrid::load(std::istream& is) {
    std::vector<double> nodes;
    double v;
    while (is >> v) nodes.push_back(v);
    return RadialGrid(std::move(nodes));
}

}  // namespace bnls
