#include "isogk/complex_file.hpp"
#include "isogk/error.hpp"
#include "isogk/galerkin.hpp"
#include "isogk/gluing.hpp"
#include "isogk/gsmooth_space.hpp"
#include "isogk/isogeo.hpp"
#include "isogk/jet.hpp"
#include "isogk/tensor_patch.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace isogk;

namespace {

// lemma_check on every interior edge of a space carrying geometry.
std::vector<SmoothnessReport> lemma_reports(const GSmoothSpace& space, const Eigen::VectorXd& coeffs, int k,
                                            int n_samples, double tol) {
    const auto elems = make_elements(space, coeffs);
    std::vector<SmoothnessReport> out;
    for (const auto& e : space.complex.edges)
        out.push_back(lemma_check(elems[static_cast<std::size_t>(e.patch_a)], elems[static_cast<std::size_t>(e.patch_b)],
                                  e.rho, k, n_samples, tol));
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Geometrically smooth multipatch spaces around an extraordinary vertex";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
    py::register_exception<FormatError>(m, "FormatError", base.ptr());
    py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

    py::class_<Jet>(m, "Jet")
        .def(py::init<int, Eigen::VectorXd, Eigen::MatrixXd>(), py::arg("order"), py::arg("base_point"),
             py::arg("coefficients"))
        .def_static("identity", &Jet::identity, py::arg("order"), py::arg("base_point"))
        .def_property_readonly("order", &Jet::order)
        .def_property_readonly("base_point", &Jet::base_point)
        .def_property_readonly("coefficients", &Jet::coefficients)
        .def("coefficient", &Jet::coefficient, py::arg("component"), py::arg("alpha"));
    m.def("jet_compose", &jet_compose, py::arg("outer"), py::arg("inner"));
    m.def("jet_invert", &jet_invert, py::arg("jet"));
    m.def("jet_distance", &jet_distance, py::arg("a"), py::arg("b"));

    py::enum_<EdgeId>(m, "EdgeId")
        .value("U0", EdgeId::U0)
        .value("U1", EdgeId::U1)
        .value("V0", EdgeId::V0)
        .value("V1", EdgeId::V1);

    py::class_<TensorPatch>(m, "TensorPatch")
        .def(py::init<int, int, int, std::vector<double>>(), py::arg("degree_u"), py::arg("degree_v"),
             py::arg("out_dim"), py::arg("control"))
        .def_property_readonly("degree_u", &TensorPatch::degree_u)
        .def_property_readonly("degree_v", &TensorPatch::degree_v)
        .def_property_readonly("out_dim", &TensorPatch::out_dim)
        .def_property_readonly("control",
                               [](const TensorPatch& p) { return std::vector<double>(p.control().begin(), p.control().end()); })
        .def("eval", [](const TensorPatch& p, double u, double v) { return p.eval(Point2(u, v)); });
    m.def(
        "jet_extract", [](const TensorPatch& p, double u, double v, int k) { return jet_extract(p, Point2(u, v), k); },
        py::arg("patch"), py::arg("u"), py::arg("v"), py::arg("k"));

    py::class_<Reparameterization>(m, "Reparameterization")
        .def_readonly("edge_from", &Reparameterization::edge_from)
        .def_readonly("edge_to", &Reparameterization::edge_to)
        .def_readonly("shear_coeffs", &Reparameterization::shear_coeffs)
        .def_readonly("normal_scale", &Reparameterization::normal_scale);
    m.def("standard_repar", &standard_repar, py::arg("n"));

    py::class_<SmoothnessReport>(m, "SmoothnessReport")
        .def_readonly("k", &SmoothnessReport::k)
        .def_readonly("sample_params", &SmoothnessReport::sample_params)
        .def_readonly("per_sample_mismatch", &SmoothnessReport::per_sample_mismatch)
        .def_readonly("max_mismatch", &SmoothnessReport::max_mismatch)
        .def_readonly("tolerance", &SmoothnessReport::tolerance)
        .def_readonly("passed", &SmoothnessReport::pass)
        .def_readonly("min_abs_det_jacobian", &SmoothnessReport::min_abs_det_jacobian)
        .def_readonly("premise_holds", &SmoothnessReport::premise_holds)
        .def("__repr__", &report_summary);
    m.def("check_gk", &check_gk, py::arg("f1"), py::arg("f2"), py::arg("rho"), py::arg("k"), py::arg("n_samples"),
          py::arg("tol") = kDefaultCheckTolerance);

    py::class_<PatchComplex>(m, "PatchComplex")
        .def_readonly("n", &PatchComplex::n)
        .def_readonly("degree_u", &PatchComplex::degree_u)
        .def_readonly("degree_v", &PatchComplex::degree_v)
        .def_readonly("geometry", &PatchComplex::geometry)
        .def_property_readonly("has_geometry", &PatchComplex::has_geometry);
    m.def("build_complex", &build_complex, py::arg("n"), py::arg("degree_u") = 3, py::arg("degree_v") = 3);

    py::class_<GSmoothSpace>(m, "GSmoothSpace")
        .def_readonly("complex", &GSmoothSpace::complex)
        .def_readonly("k", &GSmoothSpace::k)
        .def_readonly("basis", &GSmoothSpace::basis)
        .def_readonly("constraint_residual", &GSmoothSpace::constraint_residual)
        .def_property_readonly("dimension", &GSmoothSpace::dimension);
    m.def("build_gsmooth_space", &build_gsmooth_space, py::arg("complex"), py::arg("k"));
    m.def(
        "with_layout_geometry", [](const GSmoothSpace& s) { return with_geometry(s, make_geometry(s)); },
        py::arg("space"), "The space with the regular n-gon layout fitted as its geometry.");
    m.def("constant_coeffs", &constant_coeffs, py::arg("space"), py::arg("c") = 1.0);
    m.def("sample_field", &sample_field, py::arg("space"), py::arg("coeffs"));
    m.def("lemma_check_edges", &lemma_reports, py::arg("space"), py::arg("coeffs"), py::arg("k") = 1,
          py::arg("n_samples") = 25, py::arg("tol") = kLemmaTolerance);

    py::class_<DiscreteProblem>(m, "DiscreteProblem")
        .def_readonly("quadrature_order", &DiscreteProblem::quadrature_order)
        .def_readonly("mass", &DiscreteProblem::mass)
        .def_readonly("stiffness", &DiscreteProblem::stiffness)
        .def_readonly("load", &DiscreteProblem::load)
        .def_property_readonly("area", &domain_area);
    m.def(
        "assemble",
        [](const GSmoothSpace& s, int g) { return assemble(s, g > 0 ? g : default_quadrature_order(s.complex)); },
        py::arg("space"), py::arg("quadrature_order") = 0);
    m.def(
        "solve_reaction",
        [](DiscreteProblem& p, const Eigen::VectorXd& exact) {
            return solve_poisson(p, manufactured_rhs(p.space, exact, 1.0), field_callback(p.space, exact), 1.0);
        },
        py::arg("problem"), py::arg("exact_coeffs"),
        "Solves (-Laplace + 1) u = f with f and the boundary data manufactured from a member of the space.");
    m.def(
        "l2_project",
        [](DiscreteProblem& p, const py::function& target) {
            return l2_project(p, [&](const QuadraturePoint& q) { return target(q.x[0], q.x[1]).cast<double>(); });
        },
        py::arg("problem"), py::arg("target"), "target(x, y) -> float");

    py::class_<ComplexFile>(m, "ComplexFile")
        .def_readonly("complex", &ComplexFile::complex)
        .def_property_readonly("field_names",
                               [](const ComplexFile& f) {
                                   std::vector<std::string> names;
                                   for (const auto& e : f.fields) names.push_back(e.name);
                                   return names;
                               })
        .def("space", &space_of)
        .def("field", [](const ComplexFile& f, const std::string& name) { return find_field(f, name).coeffs; })
        .def("__eq__", [](const ComplexFile& a, const ComplexFile& b) { return a == b; });
    m.def("read_complex_file", &read_complex_file, py::arg("path"));
    m.def("parse_complex_file", [](const std::string& text) { return parse_complex_file(text); }, py::arg("text"));
    m.def("serialize", &serialize, py::arg("file"));
    m.def("write_complex_file", &write_complex_file, py::arg("path"), py::arg("file"));
}
