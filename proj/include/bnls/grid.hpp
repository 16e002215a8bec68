#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace bnls {

// Non-uniform radial grid on [0, outer_radius]. Nodes are strictly increasing,
// start at r = 0 and end at the outer radius. The node count stays fixed for
// the lifetime of a simulation; regridding replaces the node positions only.
class RadialGrid {
public:
    RadialGrid() = default;
    explicit RadialGrid(std::vector<double> nodes);

    static RadialGrid uniform(std::size_t n, double outer_radius);

    std::size_t size() const { return nodes_.size(); }
    double operator[](std::size_t i) const { return nodes_[i]; }
    const std::vector<double>& nodes() const { return nodes_; }
    double outer_radius() const { return nodes_.back(); }
    bool origin_included() const { return !nodes_.empty() && nodes_.front() == 0.0; }

    // Width of cell [r_i, r_{i+1}].
    double spacing(std::size_t cell) const { return nodes_[cell + 1] - nodes_[cell]; }

    // Index of the cell containing r, clamped to [0, size()-2].
    std::size_t locate(double r) const;

    bool same_nodes(const RadialGrid& other) const { return nodes_ == other.nodes_; }

    // One radius per line, 17 significant digits.
    void dump(std::ostream& os) const;
    static RadialGrid load(std::istream& is);

private:
    void validate() const;

    std::vector<double> nodes_;
};

}  // namespace bnls
