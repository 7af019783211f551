#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dynkin/poly.hpp"
#include "dynkin/rewards.hpp"

namespace dynkin {

// Closed subset of the state interval stored as sorted, disjoint closed
// intervals. Single points are intervals of zero length.
class Region {
 public:
  enum class Shape { Upper, Lower, Inner, General };

  static Region upper(double y, double hi = 1.0);            // [y, hi]
  static Region lower(double x, double lo = 0.0);            // [lo, x]
  static Region inner(double l1, double l2, double lo = 0.0);  // [l1, l2], l1 > lo
  static Region from_intervals(std::vector<std::pair<double, double>> iv);

  const std::vector<std::pair<double, double>>& intervals() const { return iv_; }
  Shape shape() const { return shape_; }
  bool contains(double x) const;
  bool empty() const { return iv_.empty(); }
  std::string describe() const;

 private:
  std::vector<std::pair<double, double>> iv_;
  Shape shape_ = Shape::General;
};

// Payoff g(X) collected at the first entrance of Brownian motion into A,
// zero if the motion is killed at the ends of [lo, hi] first. Affine on
// every gap of A.
class Reduction {
 public:
  Reduction(const PiecewisePoly& g, Region region);
  double operator()(double x) const;
  double derivative(double x) const;  // right derivative
  PiecewisePoly as_poly() const;
  const Region& region() const { return region_; }

 private:
  struct Gap {
    double u, v;    // open gap (u, v)
    double gu, gv;  // boundary values
  };
  const Gap* gap_of(double x) const;

  PiecewisePoly g_;
  Region region_;
  std::vector<Gap> gaps_;
};

Reduction reduce(const PiecewisePoly& g, const Region& region);

// Player 1 stops on [0, l], player 2 on [r, 1].
struct ThresholdStrategy {
  double l = 0.0;
  double r = 1.0;
};

// Player 1 stops on [l1, l2], player 2 on [r, 1].
struct TwoIntervalStrategy {
  double l1 = 0.0;
  double l2 = 0.0;
  double r = 1.0;
};

PiecewisePoly threshold_payoff(const GameSpec& spec, int player, const ThresholdStrategy& s);
PiecewisePoly two_interval_payoff(const GameSpec& spec, int player, const TwoIntervalStrategy& s);

// Probability that Brownian motion started at x reaches l before r.
double hit_probability(double x, const ThresholdStrategy& s);

}  // namespace dynkin
