#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dynkin/poly.hpp"

namespace dynkin {

// Two-player games use a single leader threshold bound (a1 == a2 == a);
// three-player games carry the two bounds of the leader's middle region.
struct Geometry {
  double a1 = 0.0;
  double a2 = 0.0;
  double b = 1.0;
  bool two_bounds = false;

  double a() const { return a2; }
  static Geometry two_player(double a, double b) { return {a, a, b, false}; }
  static Geometry three_player(double a1, double a2, double b) { return {a1, a2, b, true}; }
};

struct Rewards {
  // Player 1 stops first / player 2 stops first / simultaneous stop.
  PiecewisePoly f1, g1, h1;
  PiecewisePoly f2, g2, h2;
};

// Ito diffusion dX = mu(X) dt + sigma(X) dW on (xl, xr), killed at the ends.
struct Diffusion {
  PiecewisePoly mu;
  PiecewisePoly sigma;
  double xl = 0.0;
  double xr = 1.0;
};

struct GameSpec {
  Geometry geometry;
  double discount = 0.0;
  std::array<double, 2> boundary{0.0, 0.0};
  Rewards rewards;
  std::optional<Diffusion> diffusion;

  double lo() const { return diffusion ? diffusion->xl : 0.0; }
  double hi() const { return diffusion ? diffusion->xr : 1.0; }
};

struct Witness {
  double x = 0.0;
  std::optional<double> y;
  std::string clause;
  double margin = 0.0;
};

struct ConditionReport {
  std::string name;
  bool holds = true;
  std::vector<Witness> witnesses;

  void fail(Witness w);
};

// Subtract the harmonic extension of the exit payoff from every reward.
GameSpec normalize_boundary(const GameSpec& spec);

// Load-time checks; throw SpecError with a precise message.
void check_boundary_vanishing(const GameSpec& spec, double tol = 1e-10);
void check_geometry(const GameSpec& spec);

ConditionReport validate_assumption1(const GameSpec& spec);
ConditionReport validate_assumption1_prime(const GameSpec& spec);
ConditionReport validate_G1(const GameSpec& spec);
ConditionReport validate_G1_prime(const GameSpec& spec);
ConditionReport validate_G2(const GameSpec& spec);
// Quasi-concavity of the utility slices on a coarse grid.
ConditionReport validate_U(const GameSpec& spec, int grid = 64);

// Curvature tests on [lo, hi]. Weak tests accept zeros of the second
// derivative; strict tests additionally reject pieces on which it vanishes
// identically. Kinks at interior breakpoints are judged by the jump in slope.
enum class Curvature { Convex, Concave };
bool check_curvature(const PiecewisePoly& f, double lo, double hi, Curvature kind, bool strict,
                     ConditionReport& report, const std::string& clause);

}  // namespace dynkin
