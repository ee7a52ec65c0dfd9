#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "velpert/errors.hpp"
#include "velpert/expr.hpp"
#include "velpert/io.hpp"
#include "velpert/oracles.hpp"
#include "velpert/perturbation.hpp"
#include "velpert/problem.hpp"

namespace py = pybind11;
using namespace velpert;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

template <class F>
Array map_points(const Array& xs, F&& f) {
  auto in = xs.unchecked<1>();
  Array out(in.shape(0));
  auto o = out.mutable_unchecked<1>();
  for (py::ssize_t i = 0; i < in.shape(0); ++i) o(i) = f(in(i));
  return out;
}

PerturbationSeries solve(const PerturbationProblem& problem, int n, int order, std::optional<double> amplitude,
                         double tol_rel) {
  const SpectralOptions opts{.tol_rel = tol_rel};
  return compute_series(problem, default_state(problem, n, amplitude, opts), order, opts);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Perturbation expansions for two-point eigenvalue problems with derivative couplings";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<UnresolvedError>(m, "UnresolvedError", error.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<InvalidStateError>(m, "InvalidStateError", error.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", error.ptr());

  py::class_<Expr>(m, "Expr")
      .def(py::init([](const std::string& text) { return parse(text); }), py::arg("text"))
      .def("__call__", [](const Expr& e, double x) { return e.eval(x); })
      .def("__call__", [](const Expr& e, const Array& xs) { return map_points(xs, [&](double x) { return e.eval(x); }); })
      .def("derivative", [](const Expr& e) { return differentiate(e); })
      .def("__str__", [](const Expr& e) { return to_string(e); })
      .def("__repr__", [](const Expr& e) { return "Expr('" + to_string(e) + "')"; });

  py::class_<PerturbationProblem>(m, "Problem")
      .def_static("from_text", &load_problem, py::arg("text"))
      .def_static("from_file", &load_problem_file, py::arg("path"))
      .def_property_readonly("domain", [](const PerturbationProblem& p) { return py::make_tuple(p.domain.a, p.domain.b); })
      .def_property_readonly("order", [](const PerturbationProblem& p) { return p.perturbations.size(); })
      .def("to_config", &to_config);

  py::class_<PerturbationSeries>(m, "Series")
      .def_property_readonly("n", [](const PerturbationSeries& s) { return s.state.n; })
      .def_property_readonly("max_order", &PerturbationSeries::max_order)
      .def_property_readonly("energies",
                             [](const PerturbationSeries& s) {
                               std::vector<double> E;
                               for (const Order& o : s.orders) E.push_back(o.E);
                               return E;
                             })
      .def_readonly("norm", &PerturbationSeries::norm)
      .def(
          "correction",
          [](const PerturbationSeries& s, int j, const Array& xs) {
            if (j < 0 || j > s.max_order()) throw py::index_error("order out of range");
            const double scale = s.state.user_norm;
            return map_points(xs, [&](double x) { return scale * s.orders[j].y(x); });
          },
          py::arg("j"), py::arg("x"), "y_j at x in the caller's amplitude convention")
      .def(
          "energy",
          [](const PerturbationSeries& s, double lambda, std::optional<int> upto) {
            return sum_series(s, lambda, upto.value_or(s.max_order()), false).E;
          },
          py::arg("lam"), py::arg("upto") = py::none())
      .def(
          "wavefunction",
          [](const PerturbationSeries& s, double lambda, const Array& xs, bool normalize) {
            const SummedSeries sum = sum_series(s, lambda, s.max_order(), normalize);
            const double scale = normalize ? 1.0 : s.state.user_norm;
            return map_points(xs, [&](double x) { return scale * sum.y(x); });
          },
          py::arg("lam"), py::arg("x"), py::arg("normalize") = false)
      .def("to_json", [](const PerturbationSeries& s) { return dump(to_json(s)); })
      .def_static(
          "from_json", [](const std::string& text) { return series_from_json(nlohmann::json::parse(text)); },
          py::arg("text"));

  m.def("solve", &solve, py::arg("problem"), py::arg("n") = 1, py::arg("order") = 4,
        py::arg("amplitude") = py::none(), py::arg("tol_rel") = SpectralOptions{}.tol_rel,
        "Perturbation series of state n through the given order");
  m.def("fd_eigenvalue", &oracles::fd_eigenvalue, py::arg("problem"), py::arg("lam"), py::arg("guess"),
        py::arg("grid") = 512, "Richardson-extrapolated finite-difference eigenvalue nearest the guess");
}
