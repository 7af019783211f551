#pragma once

#include <vector>

#include "dynkin/harmonic.hpp"
#include "dynkin/rewards.hpp"

namespace dynkin {

// Quintic Hermite interpolant through values and first and second
// derivatives; second derivatives may jump at nodes.
class HermiteTable {
 public:
  HermiteTable() = default;
  HermiteTable(std::vector<double> x, std::vector<double> v, std::vector<double> d1, std::vector<double> d2_left,
               std::vector<double> d2_right);

  double eval(double x, int order = 0) const;
  // Preimage of y for an increasing table.
  double inverse(double y) const;

  const std::vector<double>& nodes() const { return x_; }
  const std::vector<double>& values() const { return v_; }
  double lo() const { return x_.front(); }
  double hi() const { return x_.back(); }

 private:
  std::size_t cell(double x) const;
  std::vector<double> x_, v_, d1_, d2l_, d2r_;
};

// Quintic Hermite coefficients (in t = x - x0) on a cell of width h.
std::vector<double> hermite5(double h, double p0, double p0d, double p0dd, double p1, double p1d, double p1dd);

enum class TransformKind { Scale, Discount };

// Map of the state interval onto [0, 1] under which the game becomes an
// undiscounted Brownian game. For Scale it is the normalized scale function;
// for Discount it is the normalized ratio psi / phi of the increasing and
// decreasing solutions of (generator - lambda) w = 0.
class Transform {
 public:
  TransformKind kind = TransformKind::Scale;
  double xl = 0.0, xr = 1.0, lambda = 0.0;

  double forward(double x, int order = 0) const { return map_.eval(x, order); }
  double inverse(double u) const;
  double psi(double x, int order = 0) const;
  double phi(double x, int order = 0) const;  // identically 1 for Scale

  // Largest residual of the defining ODEs measured by fourth-order finite
  // differences on the internal grid, relative to the function size.
  double ode_residual() const;

  const HermiteTable& map() const { return map_; }
  const std::vector<double>& grid() const { return map_.nodes(); }

  // Built by the factory functions below.
  HermiteTable map_, psi_, phi_;
  Diffusion diffusion;
};

Transform scale_function(const Diffusion& d, double tol = 1e-8);
Transform discount_transform(const Diffusion& d, double lambda, double tol = 1e-8);
// Picks the right transform for the spec (Brownian motion on [0, 1] if no diffusion is given).
Transform transform_for(const GameSpec& spec, double tol = 1e-8);

struct TransformedGame {
  GameSpec spec;
  Transform transform;
  double fit_error = 0.0;
};

// Rewards are re-expressed on [0, 1] (divided by phi when discounting) and
// refit as C2 piecewise quintics with sup-norm error below fit_tol.
TransformedGame transform_game(const GameSpec& spec, double fit_tol = 1e-6);

ThresholdStrategy pull_back(const ThresholdStrategy& s, const Transform& t);
TwoIntervalStrategy pull_back(const TwoIntervalStrategy& s, const Transform& t);
// Payoff in original coordinates from a payoff of the transformed game.
double pull_back_payoff(const Transform& t, const PiecewisePoly& transformed_payoff, double x);

}  // namespace dynkin
