#pragma once

#include <optional>
#include <string>
#include <vector>

namespace dynkin {

enum class Smoothness { C0 = 0, C1 = 1, C2 = 2 };

enum class Side { Left, Right };

const char* to_string(Smoothness s);
Smoothness smoothness_from_string(const std::string& s);

// Piecewise polynomial on [breakpoints.front(), breakpoints.back()].
// Piece k holds coefficients of sum_j c_j (x - x_k)^j and is selected
// right-continuously; the last piece also owns the right endpoint.
class PiecewisePoly {
 public:
  static constexpr int kMaxCoefficients = 8;
  static constexpr double kSmoothnessTol = 1e-10;

  PiecewisePoly() = default;

  // When `declared` is empty the highest class that holds is recorded.
  // A declared class that fails at some breakpoint throws SpecError.
  PiecewisePoly(std::vector<double> breakpoints,
                std::vector<std::vector<double>> pieces,
                std::optional<Smoothness> declared = std::nullopt);

  static PiecewisePoly constant(double c, double lo = 0.0, double hi = 1.0);
  // Single piece with coefficients given in powers of x (not x - lo).
  static PiecewisePoly polynomial(const std::vector<double>& global_coeffs,
                                  double lo = 0.0, double hi = 1.0);

  double lo() const { return bp_.front(); }
  double hi() const { return bp_.back(); }
  const std::vector<double>& breakpoints() const { return bp_; }
  const std::vector<std::vector<double>>& pieces() const { return pieces_; }
  Smoothness smoothness() const { return smooth_; }
  int degree() const;

  // Derivative of the given order. Throws DomainError outside the domain and
  // when `order` exceeds the smoothness class.
  double eval(double x, int order = 0) const;
  double operator()(double x) const { return eval(x, 0); }

  // One-sided derivative of the piece owning x; no smoothness gate. Inside a
  // piece this is the classical derivative; at a breakpoint `side` selects it.
  double eval_piece(double x, int order = 0, Side side = Side::Right) const;

  std::size_t piece_index(double x, Side side = Side::Right) const;

  // Sign-relevant samples of the second derivative on [lo, hi]: Chebyshev
  // nodes of every piece meeting the interval plus the piece endpoints.
  std::vector<double> sample_points(double lo, double hi, int per_piece = 16) const;

  PiecewisePoly restricted(double lo, double hi) const;
  PiecewisePoly derivative() const;
  PiecewisePoly scaled(double s) const;
  PiecewisePoly with_smoothness(Smoothness s) const;

  friend PiecewisePoly operator+(const PiecewisePoly& p, const PiecewisePoly& q);
  friend PiecewisePoly operator-(const PiecewisePoly& p, const PiecewisePoly& q);
  friend PiecewisePoly operator*(const PiecewisePoly& p, const PiecewisePoly& q);
  friend PiecewisePoly operator*(double s, const PiecewisePoly& p) { return p.scaled(s); }

  // Glue functions defined on adjacent intervals into one object.
  static PiecewisePoly concat(const std::vector<PiecewisePoly>& parts,
                              std::optional<Smoothness> declared = std::nullopt);

  Smoothness detect_smoothness() const;

 private:
  std::vector<double> bp_{0.0, 1.0};
  std::vector<std::vector<double>> pieces_{{0.0}};
  Smoothness smooth_ = Smoothness::C2;
};

// Polynomial helpers on coefficient vectors in a local variable.
namespace poly {
double horner(const std::vector<double>& c, double t, int order = 0);
// Re-expand sum c_j t^j around t = delta.
std::vector<double> shift(const std::vector<double>& c, double delta);
std::vector<double> multiply(const std::vector<double>& p, const std::vector<double>& q);
void trim(std::vector<double>& c);
}  // namespace poly

}  // namespace dynkin
