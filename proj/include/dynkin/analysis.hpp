#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dynkin/gnep.hpp"
#include "dynkin/harmonic.hpp"

namespace dynkin {

struct TValue {
  double value = 0.0;                 // from the mixed and second partials
  std::optional<double> closed_form;  // tangency-simplified form, when both tangency conditions hold
  bool defined = true;                // false when a second partial vanishes
};

// Product of the two best-response slopes at (w, xbar, ybar).
TValue T_operator(const GameSpec& spec, double w, double xbar, double ybar);

// |T(l, l, r)|; throws ConditionError unless (l, r) is interior to [0, a] x [b, 1].
double local_stability(const GameSpec& spec, const ThresholdStrategy& s);

struct StabilityReport {
  std::optional<double> rho0;
  std::optional<bool> locally_stable;
  double global_sup = 0.0;
  double argsup_w = 0.0;
  bool globally_stable = false;
  int grid = 0;
  std::vector<std::string> notes;
};

// Supremum of |T| along w -> (xbar(w), ybar(w)) over a w-grid on [0, a],
// refined around the maximizing cell.
StabilityReport global_stability(const GameSpec& spec, int grid = 1024, const BestResponseOptions& opt = {});

StabilityReport stability_report(const GameSpec& spec, const ThresholdStrategy& s, int grid = 1024,
                                 const BestResponseOptions& opt = {});

struct RosenQuantities {
  double h1, h2, h3, h4;
};
RosenQuantities rosen_quantities(const GameSpec& spec, double x, double y);

struct RosenReport {
  bool player1_concavity = true;   // curvature bound for player 1 on (0, a) x [b, 1]
  bool player2_concavity = true;   // curvature bound for player 2 on [0, a] x (b, 1)
  bool found = false;              // some weights give a positive diagonal margin
  double r1 = 0.0, r2 = 0.0;
  double min_margin = 0.0;         // min over the grid of the margin at the best weights
  double argmin_x = 0.0, argmin_y = 0.0;
  int grid = 0;
};

// Diagonal strict concavity search over weights r1 + r2 = 1.
RosenReport rosen_uniqueness(const GameSpec& spec, int grid = 129, int simplex_steps = 101);

// Margin 4 r1 r2 H1 H2 - (r1 H3 + r2 H4)^2 minimized over the grid for fixed weights.
double rosen_margin(const GameSpec& spec, double r1, double r2, int grid, double* at_x = nullptr,
                    double* at_y = nullptr);

}  // namespace dynkin
