#include "edgebrane/catalog.hpp"
#include "edgebrane/dynamics.hpp"
#include "edgebrane/errors.hpp"
#include "edgebrane/integrability.hpp"
#include "edgebrane/variation.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace edgebrane;

namespace {

/// K_ab^i as a (D, D, N-D) array.
py::array_t<double> to_numpy(const Array3& a) {
  py::array_t<double> out({a.dim(0), a.dim(1), a.dim(2)});
  auto v = out.mutable_unchecked<3>();
  for (int i = 0; i < a.dim(0); ++i)
    for (int j = 0; j < a.dim(1); ++j)
      for (int k = 0; k < a.dim(2); ++k) v(i, j, k) = a(i, j, k);
  return out;
}

py::dict residual_dict(const IntegrabilityResiduals& r) {
  py::dict d;
  d["gauss"] = r.gauss;
  d["codazzi"] = r.codazzi;
  d["ricci"] = r.ricci ? py::cast(*r.ricci) : py::none();
  return d;
}

const BoundaryEmbedding& boundary_at(const CatalogEntry& e, std::size_t b) {
  if (b >= e.boundaries.size()) throw py::index_error("no such boundary");
  return e.boundaries[b];
}

/// Endpoint tracks and diagnostics of a run as numpy arrays.
py::dict run(const SimulationConfig& config) {
  std::vector<double> time, energy, momentum, constraint;
  std::vector<Vec> left, right;
  const auto tr = evolve(initial_state(config), config, [&](const StringState& s) {
    const auto d = diagnostics(s);
    time.push_back(s.time);
    energy.push_back(d.energy);
    momentum.push_back(d.angular_momentum);
    constraint.push_back(d.constraints.max());
    left.push_back(s.endpoints[0].position);
    right.push_back(s.endpoints[1].position);
  }, false);
  auto stack = [](const std::vector<Vec>& rows) {
    Mat m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) m.row(i) = rows[i].transpose();
    return m;
  };
  py::dict d;
  d["time"] = py::array(py::cast(time));
  d["energy"] = py::array(py::cast(energy));
  d["angular_momentum"] = py::array(py::cast(momentum));
  d["constraint"] = py::array(py::cast(constraint));
  d["left"] = stack(left);
  d["right"] = stack(right);
  d["event"] = std::string(to_string(tr.event));
  d["message"] = tr.message;
  d["steps"] = tr.steps;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Worldsheet geometry, edge equations and massive-end string evolution";

  py::register_exception<InvalidParameters>(m, "InvalidParameters", PyExc_ValueError);
  py::register_exception<GeometryError>(m, "GeometryError", PyExc_ArithmeticError);

  py::class_<Expectation>(m, "Expectation")
      .def_readonly("quantity", &Expectation::quantity)
      .def_readonly("value", &Expectation::value)
      .def_readonly("tolerance", &Expectation::tolerance)
      .def_property_readonly("basis", [](const Expectation& e) { return to_string(e.basis); });

  py::class_<CatalogEntry>(m, "CatalogEntry")
      .def_readonly("id", &CatalogEntry::id)
      .def_readonly("parameters", &CatalogEntry::parameters)
      .def_readonly("expected", &CatalogEntry::expected)
      .def_readonly("lower", &CatalogEntry::lower)
      .def_readonly("upper", &CatalogEntry::upper)
      .def_property_readonly("dim", [](const CatalogEntry& e) { return e.embedding.dim(); })
      .def_property_readonly("ambient_dim", [](const CatalogEntry& e) { return e.embedding.ambient_dim(); })
      .def_property_readonly("boundary_count", [](const CatalogEntry& e) { return e.boundaries.size(); })
      .def("position", [](const CatalogEntry& e, const Vec& xi) { return e.embedding.position(xi); })
      .def("induced_metric", [](const CatalogEntry& e, const Vec& xi) { return induced_metric(e.embedding, xi); })
      .def("extrinsic_curvature",
           [](const CatalogEntry& e, const Vec& xi) { return to_numpy(extrinsic_curvature(e.embedding, xi).extrinsic); })
      .def("mean_curvature",
           [](const CatalogEntry& e, const Vec& xi) { return Vec(extrinsic_curvature(e.embedding, xi).traces); })
      .def("edge_trace",
           [](const CatalogEntry& e, std::size_t b, const Vec& u) { return boundary_data(boundary_at(e, b), u).edge_trace; },
           py::arg("boundary"), py::arg("u"))
      .def("edge_residual",
           [](const CatalogEntry& e, std::size_t b, const Vec& u) {
             return edge_equation_residual(boundary_data(boundary_at(e, b), u), e.parameter("mu0", 1.0),
                                           e.parameter("mub", 1.0));
           },
           py::arg("boundary"), py::arg("u"))
      .def("boundary_condition_residual",
           [](const CatalogEntry& e, std::size_t b, const Vec& u) { return boundary_condition_residual(boundary_at(e, b), u); },
           py::arg("boundary"), py::arg("u"))
      .def("integrability_residuals",
           [](const CatalogEntry& e, const Vec& xi, double step) {
             IntegrabilityOptions o;
             o.step = step;
             return residual_dict(worldsheet_integrability_residuals(e.embedding, xi, o));
           },
           py::arg("xi"), py::arg("step") = 1e-4)
      .def("measure", &measure_quantity, py::arg("quantity"), py::arg("expected") = 0.0)
      .def("action",
           [](const CatalogEntry& e, int cells) { return total_action(e.embedding, e.boundaries, action_config(e, cells)); },
           py::arg("cells_per_axis") = 8)
      .def("__repr__", [](const CatalogEntry& e) { return "<CatalogEntry " + e.id + ">"; });

  m.def("entry", &entry_from_id, py::arg("id"), "Catalog entry from an id such as 'helicoid:omega=0.5,R=1'.");
  m.def("catalog_names", &catalog_names);
  m.def("rotating_orbit_omega", &rotating_orbit_omega, py::arg("mu0"), py::arg("mub"), py::arg("radius"));

  py::class_<SimulationConfig>(m, "SimulationConfig")
      .def(py::init<>())
      .def_readwrite("grid_points", &SimulationConfig::grid_points)
      .def_readwrite("courant", &SimulationConfig::courant)
      .def_readwrite("duration", &SimulationConfig::duration)
      .def_readwrite("constraint_tol", &SimulationConfig::constraint_tol)
      .def_readwrite("output_stride", &SimulationConfig::output_stride)
      .def_readwrite("initial_data", &SimulationConfig::initial_data)
      .def_readwrite("mub", &SimulationConfig::mub)
      .def("validate", [](const SimulationConfig& c) { validate(c); });

  m.def("evolve", &run, py::arg("config"),
        "Evolves the string; returns endpoint tracks, diagnostics per step and the terminal event.");
}
