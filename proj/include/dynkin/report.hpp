#pragma once

#include <string>

#include "dynkin/analysis.hpp"
#include "dynkin/equilibrium.hpp"
#include "dynkin/io.hpp"
#include "dynkin/montecarlo.hpp"
#include "dynkin/transform.hpp"
#include "dynkin/valuefn.hpp"

namespace dynkin {

// Top-level record written by the command-line tool. Sections that a
// command does not produce stay null.
struct RunReport {
  std::string spec_digest;
  json conditions = json::array();
  json equilibrium;
  json certificate;
  json stability;
  json rosen;
  json mc;
  json timings;

  json to_json() const;
  static RunReport from_json(const json& j);
  bool operator==(const RunReport&) const = default;
};

json to_json(const ConditionReport& r);
json to_json(const EquilibriumResult& r, double tol);
json to_json(const ThreePlayerResult& r, double tol);
json to_json(const DpResult& r, double tol);
json to_json(const Certificate& c);
json to_json(const StabilityReport& r);
json to_json(const RosenReport& r);
json to_json(const McEstimate& e);
json to_json(const DeviationScan& s);
json to_json(const ThresholdStrategy& s);
json to_json(const TwoIntervalStrategy& s);

// x, obstacle, value, in_contact
std::string value_csv(const ValueFunctionGrid& v);

}  // namespace dynkin
