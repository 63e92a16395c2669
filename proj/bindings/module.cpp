#include <pybind11/pybind11.h>
PYBIND11_MODULE(pyspconf, m) { m.doc() = "placeholder"; }
