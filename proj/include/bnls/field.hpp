#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace bnls {

using Complex = std::complex<double>;

// Complex solution samples on a RadialGrid at a simulation time.
struct WaveField {
    std::vector<Complex> values;
    double time = 0.0;

    std::size_t size() const { return values.size(); }
    bool finite() const;
};

struct DimensionParams {
    int dim = 2;
    double sigma = 4.0;

    // sigma*d vs 4 decides subcritical / critical / supercritical.
    double criticality_index() const { return sigma * dim; }
};

}  // namespace bnls
