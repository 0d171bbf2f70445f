#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "clrlab/bounds.hpp"
#include "clrlab/kernels.hpp"
#include "clrlab/operators.hpp"
#include "clrlab/spectra.hpp"
#include "clrlab/witnesses.hpp"

namespace py = pybind11;
using namespace clr;

namespace {

using Entries = std::vector<std::pair<std::pair<int, int>, double>>;

Potential make_potential(const Entries& entries) {
    std::vector<std::pair<Site, double>> v;
    for (const auto& [s, a] : entries) v.push_back({{s.first, s.second}, a});
    return Potential::from_entries(std::move(v));
}

py::dict report_dict(const bounds::BoundReport& b) {
    py::dict d;
    d["name"] = b.name;
    d["value"] = b.value;
    d["certified"] = b.certified;
    py::dict comp;
    for (const auto& [k, v] : b.components) comp[py::str(k)] = v;
    d["components"] = comp;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "spectral counting laboratory core";

    m.def(
        "lattice_count",
        [](const Entries& entries, int half_width, int dim) {
            OperatorSpec spec;
            spec.family = dim == 2 ? Family::Lattice2D : Family::Lattice1D;
            auto A = assemble_lattice(spec, LatticeBox(dim, half_width),
                                      make_potential(entries));
            return spectra::count_nonpositive(A);
        },
        py::arg("entries"), py::arg("half_width"), py::arg("dim") = 1,
        "nonpositive eigenvalue count of the discrete operator on a box");

    m.def(
        "bargmann_1d",
        [](const Entries& entries) {
            return report_dict(bounds::bargmann_1d(make_potential(entries)));
        },
        py::arg("entries"));

    m.def(
        "refined_bargmann_1d",
        [](const Entries& entries, double sigma) {
            return report_dict(
                bounds::refined_bargmann_1d(make_potential(entries), sigma));
        },
        py::arg("entries"), py::arg("sigma") = 1.0);

    m.def("p0_lattice",
          [](double t, std::pair<int, int> x, std::pair<int, int> y, int d) {
              return kernels::p0_lattice(t, {x.first, x.second},
                                         {y.first, y.second}, d);
          },
          py::arg("t"), py::arg("x"), py::arg("y"), py::arg("d") = 1);

    m.def("p1_lattice_1d", &kernels::p1_lattice_1d, py::arg("t"),
          py::arg("x"), py::arg("y"));

    m.def("p_alpha", &kernels::p_alpha, py::arg("t"), py::arg("k"),
          py::arg("alpha"));

    m.def("resolvent_lattice_1d", &kernels::resolvent_lattice_1d,
          py::arg("lam"), py::arg("x"), py::arg("y"));

    m.def(
        "regularized_resolvent_1d",
        [](int x) {
            return kernels::regularized_resolvent(Family::Lattice1D, {x, 0},
                                                  {0, 0});
        },
        py::arg("x"));

    m.def(
        "sparse_delta_witnesses",
        [](const std::vector<double>& alphas, double gamma,
           int max_half_width) {
            auto r = witnesses::sparse_delta_construction(alphas, gamma,
                                                          max_half_width);
            py::dict d;
            d["certified_count"] = r.certificate.certified_count;
            d["gamma_sum"] = r.gamma_sum;
            d["centers"] = r.centers;
            d["radii"] = r.radii;
            return d;
        },
        py::arg("alphas"), py::arg("gamma"), py::arg("max_half_width"));

    m.def(
        "dyadic_witness_count",
        [](const std::function<double(int)>& f, int k_min, int k_max) {
            auto V = Potential::family(
                "py", [f](Site s) { return f(s.x); });
            return witnesses::dyadic_witnesses_1d(V, k_min, k_max)
                .certified_count;
        },
        py::arg("potential"), py::arg("k_min"), py::arg("k_max"));
}
