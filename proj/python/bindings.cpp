#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dynkin/analysis.hpp"
#include "dynkin/equilibrium.hpp"
#include "dynkin/errors.hpp"
#include "dynkin/examples.hpp"
#include "dynkin/io.hpp"
#include "dynkin/montecarlo.hpp"
#include "dynkin/report.hpp"
#include "dynkin/transform.hpp"
#include "dynkin/valuefn.hpp"

namespace py = pybind11;
using namespace dynkin;

// Specs cross the boundary as JSON text; results come back as JSON text and
// are decoded on the Python side.
namespace {

GameSpec spec_of(const std::string& text) { return load_spec_text(text); }

std::string solve(const std::string& text, std::optional<double> start, double tol, int max_iter, int grid) {
  const GameSpec s = spec_of(text);
  RunReport r;
  r.spec_digest = spec_digest(s);
  if (s.geometry.two_bounds) {
    const auto res = solve_three_player(s, std::nullopt, tol, max_iter);
    r.equilibrium = to_json(res, tol);
    if (res.converged) r.certificate = to_json(certify_two_interval(s, res.s, std::min(grid, 2048)));
  } else {
    const auto res = gauss_seidel(s, start.value_or(0.5 * s.geometry.a()), tol, max_iter);
    r.equilibrium = to_json(res, tol);
    if (res.converged) r.certificate = to_json(certify_threshold(s, res.s, grid));
  }
  return r.to_json().dump();
}

std::string validate(const std::string& text) {
  const GameSpec s = spec_of(text);
  json out = json::array();
  for (const auto& c : {validate_assumption1(s), validate_assumption1_prime(s), validate_G1(s),
                        validate_G1_prime(s), validate_G2(s), validate_U(s)})
    out.push_back(to_json(c));
  return out.dump();
}

std::string stability(const std::string& text, double l, double r, int grid) {
  return to_json(stability_report(spec_of(text), {l, r}, grid)).dump();
}

std::string uniqueness(const std::string& text, int grid, int steps) {
  return to_json(rosen_uniqueness(spec_of(text), grid, steps)).dump();
}

py::dict value_function(const std::string& text, int player, const std::vector<std::pair<double, double>>& region,
                        int grid) {
  const auto v = solve_vs_region(spec_of(text), player, Region::from_intervals(region), grid);
  py::dict d;
  d["x"] = v.x;
  d["obstacle"] = v.obstacle;
  d["value"] = v.value;
  std::vector<bool> contact(v.in_contact.begin(), v.in_contact.end());
  d["in_contact"] = contact;
  d["contact"] = v.contact;
  d["warnings"] = v.warnings;
  return d;
}

std::string transform(const std::string& text) {
  const auto tg = transform_game(spec_of(text));
  return json{{"spec", spec_to_json(tg.spec)},
              {"fit_error", tg.fit_error},
              {"ode_residual", tg.transform.ode_residual()}}
      .dump();
}

std::pair<double, double> mc_payoff(const std::string& text, int player, double l, double r, double x, long paths,
                                    double dt, std::uint64_t seed) {
  McOptions o;
  o.n_paths = paths;
  o.dt = dt;
  o.seed = seed;
  const auto e = estimate_payoff(spec_of(text), player, ThresholdStrategy{l, r}, x, o);
  return {e.mean, e.std_error};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Threshold equilibria of two-player stopping games on an interval";

  py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);
  py::register_exception<ConditionError>(m, "ConditionError", PyExc_RuntimeError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<CertificationError>(m, "CertificationError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  m.def("example_names", &example_names);
  m.def(
      "example", [](const std::string& name) { return spec_to_json(builtin_example(name)).dump(); }, py::arg("name"));
  m.def(
      "spec_digest", [](const std::string& text) { return spec_digest(spec_of(text)); }, py::arg("spec"));
  m.def("validate", &validate, py::arg("spec"));
  m.def("solve", &solve, py::arg("spec"), py::arg("start") = py::none(), py::arg("tol") = 1e-10,
        py::arg("max_iter") = 500, py::arg("grid") = 4096);
  m.def("stability", &stability, py::arg("spec"), py::arg("l"), py::arg("r"), py::arg("grid") = 1024);
  m.def("uniqueness", &uniqueness, py::arg("spec"), py::arg("grid") = 129, py::arg("simplex_steps") = 101);
  m.def("value_function", &value_function, py::arg("spec"), py::arg("player"), py::arg("region"),
        py::arg("grid") = 4096);
  m.def("transform", &transform, py::arg("spec"));
  m.def(
      "utility", [](const std::string& text, int player, double x, double y) {
        const GameSpec s = spec_of(text);
        return (player == 1 ? utility1(s, x, y) : utility2(s, x, y)).as_double();
      },
      py::arg("spec"), py::arg("player"), py::arg("x"), py::arg("y"));
  m.def("mc_payoff", &mc_payoff, py::arg("spec"), py::arg("player"), py::arg("l"), py::arg("r"), py::arg("x"),
        py::arg("paths") = 100000, py::arg("dt") = 1e-4, py::arg("seed") = 42);
}
