#pragma once

#include <cstdint>
#include <vector>

#include "dynkin/harmonic.hpp"
#include "dynkin/rewards.hpp"

namespace dynkin {

// Counter-based stream: every draw is a hash of (seed, path, attempt, counter),
// so results do not depend on how paths are split across threads.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t path, std::uint64_t attempt = 0);
  double uniform();  // in (0, 1)
  double normal();

 private:
  std::uint64_t key_, counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct McOptions {
  long n_paths = 100000;
  double dt = 1e-4;
  std::uint64_t seed = 42;
  double horizon = 50.0;
  // Brownian-bridge test for barrier crossings inside a step; off gives
  // naive monitoring at the grid times only.
  bool crossing_correction = true;
  int threads = 0;  // 0: hardware concurrency capped by DYNKIN_THREADS
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long n_paths = 0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  long resampled = 0;  // paths redrawn after passing the horizon cap
  long ties = 0;       // paths stopping in both sets at once
};

// Expected payoff of `player` from x when player 1 stops on its set and
// player 2 on [r, hi], paying f, g or h according to who stops first.
McEstimate estimate_payoff(const GameSpec& spec, int player, const ThresholdStrategy& s, double x,
                           const McOptions& opt = {});
McEstimate estimate_payoff(const GameSpec& spec, int player, const TwoIntervalStrategy& s, double x,
                           const McOptions& opt = {});
// Fraction of paths from x reaching [lo, l] before [r, hi].
McEstimate estimate_hit_probability(const GameSpec& spec, const ThresholdStrategy& s, double x,
                                    const McOptions& opt = {});

struct DeviationScan {
  int player = 1;
  double x = 0.0;
  std::vector<double> deviations;
  std::vector<double> payoffs;
  std::vector<double> improvements;  // deviation payoff minus the payoff at s
  std::vector<double> std_errors;    // of the paired differences
  double base_payoff = 0.0;
  double max_improvement = 0.0;
  double max_std_error = 0.0;
  double argmax = 0.0;
  long n_paths = 0;
};

// Payoffs of unilateral threshold deviations of `player`, all evaluated on
// the same paths.
DeviationScan deviation_scan(const GameSpec& spec, const ThresholdStrategy& s, int player,
                             const std::vector<double>& deviations, double x, const McOptions& opt = {});
// Uniform grid over the player's own strategy interval.
std::vector<double> deviation_grid(const GameSpec& spec, int player, int points = 50);

// Pairwise summation; the result does not depend on thread layout.
double pairwise_sum(const double* v, std::size_t n);

}  // namespace dynkin
