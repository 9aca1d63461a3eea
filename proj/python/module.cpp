#include <pybind11/pybind11.h>
PYBIND11_MODULE(_cxrpq, m) { m.doc() = "placeholder"; }
