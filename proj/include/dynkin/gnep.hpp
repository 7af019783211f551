#pragma once

#include <compare>
#include <functional>
#include <limits>

#include "dynkin/rewards.hpp"

namespace dynkin {

// Utility value that is either finite or minus infinity (infeasible pair).
class Utility {
 public:
  static Utility minus_infinity() { return Utility(); }
  static Utility finite(double v) { return Utility(v); }

  bool is_finite() const { return finite_; }
  double value() const;  // throws DomainError when infinite
  double as_double() const {
    return finite_ ? v_ : -std::numeric_limits<double>::infinity();
  }

  std::partial_ordering operator<=>(const Utility& o) const { return as_double() <=> o.as_double(); }
  bool operator==(const Utility& o) const { return as_double() == o.as_double(); }

 private:
  Utility() = default;
  explicit Utility(double v) : v_(v), finite_(true) {}
  double v_ = 0.0;
  bool finite_ = false;
};

// Two-player utilities: player 1 at threshold x against player 2 at y.
Utility utility1(const GameSpec& spec, double x, double y);
Utility utility2(const GameSpec& spec, double x, double y);

// Three-player relaxation: player 1's stopping interval [x, y] against
// player 2's threshold z. The second and third utilities coincide with
// utility1(y, z) and utility2(y, z).
Utility utility_hat1(const GameSpec& spec, double x, double y, double z);
Utility utility_hat2(const GameSpec& spec, double x, double y, double z);
Utility utility_hat3(const GameSpec& spec, double x, double y, double z);

struct Partials {
  double dx = 0, dy = 0, dxx = 0, dyy = 0, dxy = 0;
};

// Analytic partial derivatives for x < y.
Partials partials1(const GameSpec& spec, double x, double y);
Partials partials2(const GameSpec& spec, double x, double y);

struct BestResponseOptions {
  int grid = 512;
  double tol = 1e-10;
  double newton_curvature = 1e-8;
};

struct BestResponse {
  double argmax = 0.0;
  double value = 0.0;
  bool tie = false;            // several separated maximizers; the smallest is returned
  bool quasi_concave = true;   // grid values are unimodal
  bool on_boundary = false;    // maximizer sits at an end of the feasible set
  bool newton = false;         // Newton polish was applied
};

// Maximize u over [lo, hi]. d1/d2 (optional) drive the Newton polish.
BestResponse maximize(const std::function<Utility(double)>& u, double lo, double hi,
                      const BestResponseOptions& opt,
                      const std::function<double(double)>& d1 = {},
                      const std::function<double(double)>& d2 = {});

// Player 1's reply to y over [0, min(y, a)]; player 2's reply to x over [max(x, b), 1].
BestResponse best_response1(const GameSpec& spec, double y, const BestResponseOptions& opt = {});
BestResponse best_response2(const GameSpec& spec, double x, const BestResponseOptions& opt = {});

// Three-player replies on [a1, min(y, a2)], [max(x, a1), a2] and [b, 1].
BestResponse best_response_hat1(const GameSpec& spec, double y, double z,
                                const BestResponseOptions& opt = {});
BestResponse best_response_hat2(const GameSpec& spec, double x, double z,
                                const BestResponseOptions& opt = {});
BestResponse best_response_hat3(const GameSpec& spec, double y, const BestResponseOptions& opt = {});

}  // namespace dynkin
