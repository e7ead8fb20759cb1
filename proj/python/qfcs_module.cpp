#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qfcs/fcs.hpp"
#include "qfcs/model_io.hpp"
#include "qfcs/spectral.hpp"
#include "qfcs/vmodel.hpp"

namespace py = pybind11;
using namespace qfcs;

namespace {

OpenSystem load_config(const std::string& path) { return build_open_system(read_model_config(path)); }

OpenSystem parse_config(const std::string& text) { return build_open_system(parse_model_config(text)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Heat-current full counting statistics for multilevel open quantum systems.";

  py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::enum_<Method>(m, "Method")
      .value("redfield", Method::kRedfield)
      .value("unified", Method::kUnified)
      .value("secular", Method::kSecular);

  py::class_<VParams>(m, "VParams")
      .def(py::init<>())
      .def(py::init([](double nu, double delta, double alpha, double a, double t_left,
                       double t_right) {
             VParams p{nu, delta, alpha, a, t_left, t_right};
             p.validate();
             return p;
           }),
           py::arg("nu") = 1.0, py::arg("delta") = 0.03, py::arg("alpha") = 0.5,
           py::arg("a") = 0.01, py::arg("t_left") = 4.0, py::arg("t_right") = 3.99)
      .def_readwrite("nu", &VParams::nu)
      .def_readwrite("delta", &VParams::delta)
      .def_readwrite("alpha", &VParams::alpha)
      .def_readwrite("a", &VParams::a)
      .def_readwrite("t_left", &VParams::t_left)
      .def_readwrite("t_right", &VParams::t_right)
      .def("__repr__", [](const VParams& p) {
        return "VParams(nu=" + std::to_string(p.nu) + ", delta=" + std::to_string(p.delta) +
               ", alpha=" + std::to_string(p.alpha) + ")";
      });

  py::class_<OpenSystem>(m, "OpenSystem")
      .def_property_readonly("dimension", [](const OpenSystem& s) { return s.basis.size(); })
      .def_property_readonly("ordering", [](const OpenSystem& s) {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t k = 0; k < s.basis.size(); ++k) out.emplace_back(s.basis[k].a, s.basis[k].b);
        return out;
      })
      .def_property_readonly("temperatures", [](const OpenSystem& s) {
        std::vector<double> t;
        for (const auto& b : s.model.baths()) t.push_back(b.temperature);
        return t;
      });

  m.def("preset", [](const std::string& name) { return find_preset(name).params; }, py::arg("name"));
  m.def("preset_names", [] {
    std::vector<std::string> names;
    for (const auto& p : v_presets()) names.push_back(p.name);
    return names;
  });
  m.def("v_system", &v_system, py::arg("params"));
  m.def("load_config", &load_config, py::arg("path"));
  m.def("parse_config", &parse_config, py::arg("text"));

  m.def(
      "generator",
      [](const OpenSystem& s, Method method, const CountingField& chi) {
        return build_generator(s, method, chi.empty() ? zero_field(s.model) : chi).matrix;
      },
      py::arg("system"), py::arg("method"), py::arg("chi") = CountingField{});
  m.def("closed_form_generator", &closed_form_generator, py::arg("params"), py::arg("chi_left"),
        py::arg("chi_right") = std::complex<double>(0.0));
  m.def("shifted_field", [](const OpenSystem& s, const CountingField& chi) {
    return shifted_field(s.model, chi);
  });

  m.def(
      "steady_state", [](const OpenSystem& s, Method method) { return steady_state(s, method); },
      py::arg("system"), py::arg("method"));
  m.def(
      "cgf",
      [](const OpenSystem& s, Method method, const CountingField& chi) {
        return cgf_point(build_generator(s, method, chi)).value;
      },
      py::arg("system"), py::arg("method"), py::arg("chi"));
  m.def(
      "mgf",
      [](const OpenSystem& s, Method method, const CountingField& chi, double t) {
        return mgf(build_generator(s, method, chi), maximally_mixed(s.basis), t);
      },
      py::arg("system"), py::arg("method"), py::arg("chi"), py::arg("t"));

  m.def(
      "current_statistics",
      [](const OpenSystem& s, Method method, std::size_t bath) {
        const auto c = current_statistics(s, method, bath);
        return py::make_tuple(c.mean, c.variance);
      },
      py::arg("system"), py::arg("method"), py::arg("bath") = 0);

  m.def(
      "symmetry_residual",
      [](const OpenSystem& s, Method method, const std::vector<double>& chi_grid) {
        return fluctuation_symmetry_scan(s, method, chi_grid).max_residual;
      },
      py::arg("system"), py::arg("method"), py::arg("chi_grid"));

  m.def(
      "green_kubo",
      [](const OpenSystem& s, Method method, double t_bar) {
        const auto r = green_kubo_check(s, method, t_bar);
        return py::make_tuple(r.lhs, r.rhs);
      },
      py::arg("system"), py::arg("method"), py::arg("t_bar"));

  m.def(
      "tur_ratios",
      [](const OpenSystem& s, Method method, double t_bar, const std::vector<double>& grid) {
        const auto scan = tur_scan(s, method, t_bar, grid);
        std::vector<double> ratios;
        for (const auto& p : scan.points) ratios.push_back(p.ratio);
        return py::make_tuple(ratios, scan.limit);
      },
      py::arg("system"), py::arg("method"), py::arg("t_bar"), py::arg("delta_t"));

  m.def(
      "crossover",
      [](const VParams& base, const std::vector<double>& deltas, std::size_t jobs) {
        py::list out;
        for (const auto& r : crossover_scan(base, deltas, jobs)) {
          out.append(py::dict(py::arg("delta") = r.delta, py::arg("j_redfield") = r.j_redfield,
                              py::arg("j_unified") = r.j_unified, py::arg("j_secular") = r.j_secular,
                              py::arg("closest") = std::string(to_string(r.closest))));
        }
        return out;
      },
      py::arg("base"), py::arg("deltas"), py::arg("jobs") = 1);
}
