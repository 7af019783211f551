#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dynkin/harmonic.hpp"
#include "dynkin/rewards.hpp"

namespace dynkin {

// Smallest concave majorant of max(v, 0) over the sample points (x_i, v_i),
// x strictly increasing. Evaluated back on the same points.
std::vector<double> concave_majorant(const std::vector<double>& x, const std::vector<double>& v);

// Hull vertex indices of the same construction (monotone chain, O(n)).
std::vector<std::size_t> upper_hull(const std::vector<double>& x, const std::vector<double>& v);

struct ValueFunctionGrid {
  int player = 1;
  Region region;

  // Uniform output grid on the state interval.
  std::vector<double> x;
  std::vector<double> obstacle;  // f_i
  std::vector<double> reduced;   // payoff g_i collected at entry to the region
  std::vector<double> value;     // V_i = reduced + excess
  std::vector<char> in_contact;  // value == obstacle outside the region

  // Contact set {V = f} outside the region, as closed intervals.
  std::vector<std::pair<double, double>> contact;
  std::vector<std::string> warnings;
  int resolution = 0;  // hull points per unit length used internally

  double value_at(double x) const;
  double excess_at(double x) const;  // V - reduced, the majorant of f - reduced
  // Convex hull of the contact set; a warning is attached if it is not an interval.
  std::pair<double, double> contact_hull() const;

  struct Impl;
  std::shared_ptr<const Impl> impl;
};

// Optimal stopping of player `player` when the opponent stops on `region`.
// The hull grid starts at `grid_size` points and doubles until the contact
// endpoints move by less than `movement_tol`.
ValueFunctionGrid solve_vs_region(const GameSpec& spec, int player, const Region& region,
                                  int grid_size = 4096, double movement_tol = 1e-7);

// Excess payoff of player 1 over the reduced follower payoff for the pair
// ([0, l], [r, 1]); equals the concave majorant at an equilibrium.
PiecewisePoly u_r_closed_form(const GameSpec& spec, const ThresholdStrategy& s);
// Same for the two-interval pair ([l1, l2], [r, 1]).
PiecewisePoly u_r_two_point(const GameSpec& spec, const TwoIntervalStrategy& s);

}  // namespace dynkin
