#include <pybind11/pybind11.h>

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
    m.doc() = "radial biharmonic NLS ring-collapse toolkit";
}
