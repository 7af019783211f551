#include "dynkin/report.hpp"

#include <cstdio>
#include <sstream>

namespace dynkin {

json RunReport::to_json() const {
  return json{{"spec_digest", spec_digest}, {"conditions", conditions}, {"equilibrium", equilibrium},
              {"certificate", certificate}, {"stability", stability},   {"rosen", rosen},
              {"mc", mc},                   {"timings", timings}};
}

RunReport RunReport::from_json(const json& j) {
  RunReport r;
  r.spec_digest = j.at("spec_digest").get<std::string>();
  r.conditions = j.at("conditions");
  r.equilibrium = j.at("equilibrium");
  r.certificate = j.at("certificate");
  r.stability = j.at("stability");
  r.rosen = j.at("rosen");
  r.mc = j.at("mc");
  r.timings = j.at("timings");
  return r;
}

json to_json(const ThresholdStrategy& s) { return json{{"l", s.l}, {"r", s.r}}; }

json to_json(const TwoIntervalStrategy& s) { return json{{"l1", s.l1}, {"l2", s.l2}, {"r", s.r}}; }

json to_json(const ConditionReport& r) {
  json w = json::array();
  for (const auto& x : r.witnesses) {
    json e{{"x", x.x}, {"clause", x.clause}, {"margin", x.margin}};
    if (x.y) e["y"] = *x.y;
    w.push_back(std::move(e));
  }
  return json{{"name", r.name}, {"holds", r.holds}, {"witnesses", std::move(w)}};
}

json to_json(const EquilibriumResult& r, double tol) {
  json trace = json::array();
  for (const auto& s : r.trace) trace.push_back(json::array({s.l, s.r}));
  json j{{"mode", "threshold"},          {"thresholds", to_json(r.s)}, {"iterations", r.iterations},
         {"converged", r.converged},     {"cycling", r.cycling},       {"tol", tol},
         {"trace", std::move(trace)},    {"residuals", r.residuals},   {"warnings", r.warnings}};
  j["fitted_rate"] = r.fitted_rate ? json(*r.fitted_rate) : json(nullptr);
  return j;
}

json to_json(const ThreePlayerResult& r, double tol) {
  json trace = json::array();
  for (const auto& s : r.trace) trace.push_back(json::array({s.l1, s.l2, s.r}));
  return json{{"mode", "three_player"}, {"thresholds", to_json(r.s)}, {"iterations", r.iterations},
              {"converged", r.converged}, {"tol", tol}, {"trace", std::move(trace)}, {"warnings", r.warnings}};
}

json to_json(const DpResult& r, double tol) {
  json sets = json::array();
  for (const auto& s : r.sets) sets.push_back(s.describe());
  return json{{"mode", "dynamic_programming"}, {"thresholds", r.thresholds}, {"sets", std::move(sets)},
              {"iterations", r.iterations},    {"converged", r.converged},   {"tol", tol},
              {"warnings", r.warnings}};
}

json to_json(const Certificate& c) {
  json dev = json::array();
  for (const auto& d : c.violating)
    dev.push_back(json{{"player", d.player}, {"location", d.location}, {"gain", d.gain}});
  json clauses = json::array();
  for (const auto& k : c.clauses) clauses.push_back(json{{"name", k.name}, {"holds", k.holds}, {"margin", k.margin}});
  json j{{"is_equilibrium", c.is_equilibrium}, {"max_violation", c.max_violation}, {"tol", c.tol},
         {"violating", std::move(dev)},        {"clauses", std::move(clauses)}};
  j["smooth_fit1"] = c.smooth_fit1 ? json(*c.smooth_fit1) : json(nullptr);
  j["smooth_fit2"] = c.smooth_fit2 ? json(*c.smooth_fit2) : json(nullptr);
  return j;
}

json to_json(const StabilityReport& r) {
  json j{{"global_sup", r.global_sup}, {"argsup_w", r.argsup_w}, {"globally_stable", r.globally_stable},
         {"grid", r.grid},             {"tol", 1.0},             {"notes", r.notes}};
  j["rho0"] = r.rho0 ? json(*r.rho0) : json(nullptr);
  j["locally_stable"] = r.locally_stable ? json(*r.locally_stable) : json(nullptr);
  return j;
}

json to_json(const RosenReport& r) {
  return json{{"player1_concavity", r.player1_concavity},
              {"player2_concavity", r.player2_concavity},
              {"found", r.found},
              {"weights", json::array({r.r1, r.r2})},
              {"min_margin", r.min_margin},
              {"argmin", json::array({r.argmin_x, r.argmin_y})},
              {"grid", r.grid},
              {"tol", 0.0}};
}

json to_json(const McEstimate& e) {
  return json{{"mean", e.mean},         {"std_error", e.std_error}, {"n_paths", e.n_paths},
              {"dt", e.dt},             {"seed", e.seed},           {"resampled", e.resampled},
              {"ties", e.ties}};
}

json to_json(const DeviationScan& s) {
  return json{{"player", s.player},
              {"x", s.x},
              {"base_payoff", s.base_payoff},
              {"max_improvement", s.max_improvement},
              {"std_error", s.max_std_error},
              {"argmax", s.argmax},
              {"n_paths", s.n_paths},
              {"tol_se", 3.0},
              {"deviations", s.deviations},
              {"improvements", s.improvements}};
}

std::string value_csv(const ValueFunctionGrid& v) {
  std::ostringstream out;
  out << "x,obstacle,value,in_contact\n";
  char buf[128];
  for (std::size_t i = 0; i < v.x.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d\n", v.x[i], v.obstacle[i], v.value[i],
                  v.in_contact[i] ? 1 : 0);
    out << buf;
  }
  return out.str();
}

}  // namespace dynkin
