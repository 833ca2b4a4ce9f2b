#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ksep/criteria.hpp"
#include "ksep/noise.hpp"
#include "ksep/observables.hpp"
#include "ksep/partitions.hpp"
#include "ksep/state.hpp"

namespace py = pybind11;
using namespace ksep;

namespace {

DensityMatrix from_numpy(py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast> a, int n,
                         int d) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw std::invalid_argument("expected a square matrix");
    if (static_cast<Index>(a.shape(0)) != basis_dimension(n, d)) throw std::invalid_argument("matrix size is not d^n");
    std::vector<Complex> buf(a.data(), a.data() + a.size());
    return DensityMatrix::from_dense(n, d, buf);
}

py::array_t<std::complex<double>> to_numpy(const DensityMatrix& rho) {
    const auto dense = rho.to_dense();
    const auto dim = static_cast<py::ssize_t>(rho.dim());
    py::array_t<std::complex<double>> out({dim, dim});
    std::copy(dense.begin(), dense.end(), out.mutable_data());
    return out;
}

py::list terms_of(const ObservableSet& set) {
    py::list out;
    for (const auto& t : set.terms) {
        std::vector<std::string> labels;
        for (const auto& f : t.factors) labels.push_back(f.label());
        out.append(py::make_tuple(t.coefficient, labels));
    }
    return out;
}

py::list pairs_of(const std::vector<IndexPair>& v) {
    py::list out;
    for (const auto& p : v) out.append(py::make_tuple(p.row, p.col));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "k-separability criteria for Dicke-class and qudit W-class states";

    py::register_exception<MalformedState>(m, "MalformedState", PyExc_ValueError);

    py::class_<DensityMatrix>(m, "DensityMatrix")
        .def_property_readonly("n", &DensityMatrix::n)
        .def_property_readonly("d", &DensityMatrix::d)
        .def_property_readonly("dim", &DensityMatrix::dim)
        .def("element", &DensityMatrix::element, py::arg("row"), py::arg("col"))
        .def("trace", &DensityMatrix::trace)
        .def("to_numpy", &to_numpy)
        .def_static("from_numpy", &from_numpy, py::arg("matrix"), py::arg("n"), py::arg("d"));

    py::class_<CriterionReport>(m, "CriterionReport")
        .def_readonly("lhs", &CriterionReport::lhs)
        .def_readonly("rhs", &CriterionReport::rhs)
        .def_readonly("margin", &CriterionReport::margin)
        .def_readonly("violated", &CriterionReport::violated)
        .def_readonly("k", &CriterionReport::k)
        .def_readonly("tolerance", &CriterionReport::tolerance)
        .def_readonly("note", &CriterionReport::note)
        .def("__repr__", [](const CriterionReport& r) {
            return "CriterionReport(lhs=" + std::to_string(r.lhs) + ", rhs=" + std::to_string(r.rhs) +
                   ", violated=" + (r.violated ? "True" : "False") + ")";
        });

    m.def("dicke_mixture", [](int n, int mm, double p) { return white_noise_mixture(dicke_state(n, mm), p); },
          py::arg("n"), py::arg("m"), py::arg("p") = 0.0, "(1-p)|D_m^n><D_m^n| + p I/2^n");
    m.def("w_mixture", [](int n, double p) { return white_noise_mixture(qudit_w_state(n), p); }, py::arg("n"),
          py::arg("p") = 0.0, "(1-p)|W_n^n><W_n^n| + p I/n^n");
    m.def("random_k_separable_state", &random_k_separable_state, py::arg("n"), py::arg("k"), py::arg("d"),
          py::arg("terms"), py::arg("seed"));

    m.def("index_sets_criterion1", [](int n, int mm) {
        const auto s = index_sets_criterion1(n, mm);
        return py::dict(py::arg("lhs_pairs") = pairs_of(s.lhs_pairs), py::arg("sqrt_pairs") = pairs_of(s.sqrt_pairs),
                        py::arg("diag_indices") = s.diag_indices, py::arg("degenerate") = s.degenerate);
    }, py::arg("n"), py::arg("m"));
    m.def("index_sets_criterion2", [](int n) {
        const auto s = index_sets_criterion2(n);
        return py::dict(py::arg("lhs_pairs") = pairs_of(s.lhs_pairs), py::arg("sqrt_pairs") = pairs_of(s.sqrt_pairs),
                        py::arg("diag_indices") = s.diag_indices);
    }, py::arg("n"));
    m.def("evaluate_criterion1", &evaluate_criterion1, py::arg("rho"), py::arg("n"), py::arg("m"), py::arg("k"),
          py::arg("tolerance") = kViolationTolerance);
    m.def("evaluate_criterion2", &evaluate_criterion2, py::arg("rho"), py::arg("n"), py::arg("k"),
          py::arg("tolerance") = kViolationTolerance);

    m.def("gamma", static_cast<double (*)(int, int, int, double)>(&ksep::gamma), py::arg("n"), py::arg("m"),
          py::arg("k"), py::arg("p"));
    m.def("delta", &ksep::delta, py::arg("n"), py::arg("d"), py::arg("k"), py::arg("p"));
    m.def("noise_threshold_dicke", &noise_threshold_dicke, py::arg("n"), py::arg("m"), py::arg("k"));
    m.def("noise_threshold_qudit_w", &noise_threshold_qudit_w, py::arg("n"), py::arg("d"), py::arg("k"));

    m.def("count_partitions", &count_partitions_formula, py::arg("n"), py::arg("k"));
    m.def("enumerate_partitions", [](int n, int k) {
        std::vector<std::vector<std::vector<int>>> out;
        for (const auto& p : enumerate_partitions(n, k)) out.push_back(p.blocks());
        return out;
    }, py::arg("n"), py::arg("k"));

    m.def("pauli_diag_observable", [](int n, Index row) { return terms_of(pauli_diag_observable(n, row)); },
          py::arg("n"), py::arg("row"), "list of (coefficient, factor labels)");
    m.def("pauli_offdiag_observables", [](int n, Index row, Index col) {
        const auto [re, im] = pauli_offdiag_observables(n, row, col);
        return py::make_tuple(terms_of(re), terms_of(im));
    }, py::arg("n"), py::arg("row"), py::arg("col"));
    m.def("observable_count_dicke", &observable_count_dicke, py::arg("n"), py::arg("m"));
    m.def("observable_count_qudit", &observable_count_qudit, py::arg("n"), py::arg("d"));
    m.def("evaluate_criterion1_via_observables", &evaluate_criterion1_via_observables, py::arg("rho"), py::arg("n"),
          py::arg("m"), py::arg("k"), py::arg("tolerance") = kViolationTolerance);
    m.def("evaluate_criterion2_via_observables", &evaluate_criterion2_via_observables, py::arg("rho"), py::arg("n"),
          py::arg("k"), py::arg("tolerance") = kViolationTolerance);
}
