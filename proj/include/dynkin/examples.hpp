#pragma once

#include <string>
#include <vector>

#include "dynkin/rewards.hpp"

namespace dynkin {

// Zero-sum game with quadratic rewards and a kink at each inflection point.
GameSpec example_zero_sum(double a = 0.4, double b = 0.6);
// Nonzero-sum game whose utilities sum to zero on the strategy rectangle.
GameSpec example_nonzero_sum_gnep_zero(double a = 0.4, double b = 0.6);
// C2 game with follower rewards cut off smoothly, so best responses are
// almost insensitive to the opponent; needs b - a > 1/2.
GameSpec example_global_stable(double a = 0.2, double b = 0.75);
// The previous game with player 2's reward flattened near the reply y0 to
// w0, so the slope product is large there but not at the equilibrium.
GameSpec example_local_only(double eps = -1e-6, double radius = 5e-5, double w0 = 0.0);
// Leader reward convex / concave / convex for the two-interval relaxation.
GameSpec example_g2_three_player(double a1 = 0.25, double a2 = 0.45, double b = 0.65);

GameSpec builtin_example(const std::string& name);
std::vector<std::string> example_names();

// Building blocks, exposed for tests.
namespace build {
// C2 piecewise cubic with piecewise-linear second derivative taking `curv`
// at `knots`, with f(knots.front()) = f0 and f'(knots.front()) = d0.
PiecewisePoly from_curvature(const std::vector<double>& knots, const std::vector<double>& curv, double f0, double d0);
// Same, with the initial slope chosen so that f vanishes at both ends.
PiecewisePoly from_curvature_pinned(const std::vector<double>& knots, const std::vector<double>& curv);
// x -> p(lo + hi - x).
PiecewisePoly mirror(const PiecewisePoly& p);
// Equal to 1 left of p, 0 right of q, quintic smoothstep in between.
PiecewisePoly cutoff(double p, double q);
// x (c - x) on [0, c], then C2 continuation concave up to 2c and convex to
// a zero at 1.
PiecewisePoly hump_leader(double a);
}  // namespace build

}  // namespace dynkin
