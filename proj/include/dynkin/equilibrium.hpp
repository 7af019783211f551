#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dynkin/gnep.hpp"
#include "dynkin/harmonic.hpp"
#include "dynkin/rewards.hpp"

namespace dynkin {

struct EquilibriumResult {
  ThresholdStrategy s;
  int iterations = 0;
  bool converged = false;
  bool cycling = false;  // period-2 oscillation detected
  std::optional<double> fitted_rate;  // exp of the log-residual slope
  std::vector<ThresholdStrategy> trace;  // (l(n), r(n)), n = 1, 2, ...
  std::vector<double> residuals;         // |l(n) - l(n-1)|, n >= 2
  std::vector<std::string> warnings;
};

// Alternating best responses started from player 1's threshold l_init.
EquilibriumResult gauss_seidel(const GameSpec& spec, double l_init, double tol = 1e-10, int max_iter = 500,
                               const BestResponseOptions& opt = {});

struct Deviation {
  int player = 1;
  double location = 0.0;
  double gain = 0.0;
};

struct Clause {
  std::string name;
  bool holds = true;
  double margin = 0.0;  // positive = satisfied with room
};

struct Certificate {
  bool is_equilibrium = false;
  double max_violation = 0.0;
  double tol = 1e-8;
  std::vector<Deviation> violating;
  std::vector<Clause> clauses;
  // Residuals of the first-order tangency conditions; empty when the
  // threshold sits on the edge of its feasible set.
  std::optional<double> smooth_fit1, smooth_fit2;
};

// Checks deviations on a grid of [0, r) and (l, 1] at the utility level and
// compares the closed-form payoffs against the optimal-stopping values.
Certificate certify_threshold(const GameSpec& spec, const ThresholdStrategy& s, int grid_size = 4096,
                              double tol = 1e-8);

struct ThreePlayerResult {
  TwoIntervalStrategy s;
  int iterations = 0;
  bool converged = false;
  std::vector<TwoIntervalStrategy> trace;
  std::vector<std::string> warnings;
};

// Cyclic best responses of the three-player relaxation, started from `init`
// (default (a1, a2, 1)).
ThreePlayerResult solve_three_player(const GameSpec& spec, std::optional<TwoIntervalStrategy> init = std::nullopt,
                                     double tol = 1e-10, int max_iter = 500, const BestResponseOptions& opt = {});

// Clauses i) ordering, ii) player 1 cannot move l1, iii) cannot move l2, the
// follower's optimality, and the sign of the middle utility. Also compares
// the closed-form payoffs with the optimal-stopping values.
Certificate certify_two_interval(const GameSpec& spec, const TwoIntervalStrategy& s, int grid_size = 2048,
                                 double tol = 1e-8);

struct DpResult {
  std::vector<Region> sets;          // A1, A2, A3, ...
  std::vector<double> thresholds;    // sup A1, inf A2, sup A3, ...
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

// Alternating optimal stopping: player 2 against A(2n-1), then player 1
// against the resulting contact set, and so on.
DpResult dp_policy_iteration(const GameSpec& spec, const Region& first, double tol = 1e-10, int max_iter = 500,
                             int grid_size = 4096);

}  // namespace dynkin
