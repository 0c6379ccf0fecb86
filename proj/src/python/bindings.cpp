#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "maxperim/experiments.hpp"

namespace py = pybind11;
using namespace maxperim;
namespace ex = maxperim::experiments;

namespace {

// JSON crosses the boundary as text; the Python side wraps it in dicts.
std::string perimeter_json(std::string const& config) {
  auto const rows = ex::run_perimeter(ex::perimeter_config_from_json(ex::json::parse(config)));
  ex::json out = ex::json::array();
  for (auto const& r : rows)
    out.push_back({{"body", r.body},
                   {"measure", r.measure},
                   {"n", r.n},
                   {"method", r.method},
                   {"side", r.side},
                   {"value", r.error.empty() ? ex::json(r.value) : ex::json(nullptr)},
                   {"stderr", r.error.empty() ? ex::json(r.std_error) : ex::json(nullptr)},
                   {"eps", r.eps},
                   {"samples", r.samples},
                   {"seed", r.seed},
                   {"error", r.error}});
  return out.dump();
}

std::string scan_json(std::string const& config) {
  auto const rows = ex::run_nazarov_scan(ex::scan_config_from_json(ex::json::parse(config)));
  std::ostringstream csv;
  ex::write_scan_csv(csv, rows);
  ex::json out = ex::json::array();
  for (auto const& r : rows) {
    auto num = [&](double v) { return r.ok() && std::isfinite(v) ? ex::json(v) : ex::json(nullptr); };
    out.push_back({{"n", r.n},
                   {"E", num(r.expected_norm)},
                   {"W", num(r.norm_sd)},
                   {"alpha", num(r.alpha)},
                   {"beta", num(r.beta)},
                   {"rho", num(r.rho)},
                   {"N", r.facets},
                   {"analytic_bound", num(r.analytic_bound)},
                   {"empirical_mean", num(r.empirical_mean)},
                   {"empirical_stderr", num(r.empirical_stderr)},
                   {"seed", r.seed},
                   {"error", r.error}});
  }
  return out.dump();
}

std::string report_json(std::string const& config) {
  auto const c = ex::report_config_from_json(ex::json::parse(config));
  auto const m = ex::measure_from_json(c.measure);
  std::optional<Body> body;
  if (c.body) body = ex::body_from_json(*c.body, m, c.options.seed);
  return ex::to_json(bounds_report(m, body, c.options)).dump();
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Maximal convex-set perimeter estimators and bounds";

  py::register_exception<InputError>(mod, "InputError", PyExc_ValueError);
  py::register_exception<UnsupportedError>(mod, "UnsupportedError", PyExc_NotImplementedError);
  py::register_exception<PreconditionError>(mod, "PreconditionError", PyExc_ValueError);
  py::register_exception<NumericalError>(mod, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<EmptyBodyError>(mod, "EmptyBodyError", PyExc_ValueError);
  // nlohmann parse errors
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (ex::json::exception const& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  mod.def("version", &ex::version_string);
  mod.def("perimeter_json", &perimeter_json, py::arg("config"), py::call_guard<py::gil_scoped_release>());
  mod.def("nazarov_scan_json", &scan_json, py::arg("config"), py::call_guard<py::gil_scoped_release>());
  mod.def("bounds_report_json", &report_json, py::arg("config"), py::call_guard<py::gil_scoped_release>());

  mod.def("optimal_beta", &optimal_beta, py::arg("alpha"));
  mod.def("lower_bound_constant", &lower_bound_constant, py::arg("alpha"), py::arg("beta"));
  mod.def("optimized_lower_bound_constant", &optimized_lower_bound_constant, py::arg("alpha"));
  mod.def("gaussian_norm_mean", &gaussian_norm_mean, py::arg("n"));
  mod.def("mills_bound", &mills_bound, py::arg("a"));
  mod.def("gaussian_tail_integral", &gaussian_tail_integral, py::arg("a"));
  mod.def("simplex_volume_ratio_constant", &simplex_volume_ratio_constant, py::arg("n"));
  mod.def("isotropic_lc_bound", &isotropic_lc_bound, py::arg("n"), py::arg("c0") = kDefaultIsotropicConstant);

  mod.def(
      "fit_exponent",
      [](std::vector<std::pair<double, double>> const& rows) {
        auto const f = ex::fit_exponent(rows);
        return py::dict(py::arg("slope") = f.slope, py::arg("intercept") = f.intercept,
                        py::arg("r_squared") = f.r_squared);
      },
      py::arg("rows"));
}
