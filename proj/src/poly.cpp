#include "dynkin/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dynkin/errors.hpp"

namespace dynkin {

const char* to_string(Smoothness s) {
  switch (s) {
    case Smoothness::C0: return "C0";
    case Smoothness::C1: return "C1";
    case Smoothness::C2: return "C2";
  }
  return "C0";
}

Smoothness smoothness_from_string(const std::string& s) {
  if (s == "C0") return Smoothness::C0;
  if (s == "C1") return Smoothness::C1;
  if (s == "C2") return Smoothness::C2;
  throw SpecError("unknown smoothness class '" + s + "'");
}

namespace poly {

double horner(const std::vector<double>& c, double t, int order) {
  const int n = static_cast<int>(c.size());
  if (order >= n) return 0.0;
  double acc = 0.0;
  for (int j = n - 1; j >= order; --j) {
    double coef = c[j];
    for (int m = 0; m < order; ++m) coef *= static_cast<double>(j - m);
    acc = acc * t + coef;
  }
  return acc;
}

std::vector<double> shift(const std::vector<double>& c, double delta) {
  // Repeated synthetic division gives the Taylor coefficients at delta.
  std::vector<double> out(c);
  const int n = static_cast<int>(out.size());
  for (int i = 0; i < n; ++i)
    for (int j = n - 2; j >= i; --j) out[j] += delta * out[j + 1];
  return out;
}

std::vector<double> multiply(const std::vector<double>& p, const std::vector<double>& q) {
  std::vector<double> r(p.size() + q.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  return r;
}

void trim(std::vector<double>& c) {
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
}

}  // namespace poly

namespace {

bool close_rel(double a, double b) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= PiecewisePoly::kSmoothnessTol * scale;
}

std::vector<double> merged_breakpoints(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

PiecewisePoly::PiecewisePoly(std::vector<double> breakpoints,
                             std::vector<std::vector<double>> pieces,
                             std::optional<Smoothness> declared)
    : bp_(std::move(breakpoints)), pieces_(std::move(pieces)) {
  if (bp_.size() < 2) throw SpecError("piecewise polynomial needs at least two breakpoints");
  if (pieces_.size() != bp_.size() - 1)
    throw SpecError("piece count must equal breakpoint count minus one");
  for (std::size_t k = 0; k + 1 < bp_.size(); ++k) {
    if (!std::isfinite(bp_[k]) || !(bp_[k] < bp_[k + 1]))
      throw SpecError("breakpoints must be finite and strictly increasing");
  }
  for (auto& c : pieces_) {
    if (c.empty()) c.push_back(0.0);
    for (double v : c)
      if (!std::isfinite(v)) throw SpecError("non-finite polynomial coefficient");
    poly::trim(c);
    if (static_cast<int>(c.size()) > kMaxCoefficients)
      throw SpecError("polynomial degree exceeds " + std::to_string(kMaxCoefficients - 1));
  }
  const Smoothness found = detect_smoothness();
  if (declared) {
    if (static_cast<int>(*declared) > static_cast<int>(found)) {
      std::ostringstream os;
      os << "declared smoothness " << to_string(*declared) << " fails; data is only "
         << to_string(found);
      throw SpecError(os.str());
    }
    smooth_ = *declared;
  } else {
    smooth_ = found;
  }
}

Smoothness PiecewisePoly::detect_smoothness() const {
  int best = 2;
  for (std::size_t k = 1; k + 1 < bp_.size(); ++k) {
    const double h = bp_[k] - bp_[k - 1];
    for (int order = 0; order <= best; ++order) {
      const double left = poly::horner(pieces_[k - 1], h, order);
      const double right = poly::horner(pieces_[k], 0.0, order);
      if (!close_rel(left, right)) {
        if (order == 0) {
          std::ostringstream os;
          os << "piecewise polynomial is discontinuous at x=" << bp_[k];
          throw SpecError(os.str());
        }
        best = order - 1;
        break;
      }
    }
  }
  return static_cast<Smoothness>(best);
}

PiecewisePoly PiecewisePoly::constant(double c, double lo, double hi) {
  return PiecewisePoly({lo, hi}, {{c}});
}

PiecewisePoly PiecewisePoly::polynomial(const std::vector<double>& global_coeffs, double lo,
                                        double hi) {
  return PiecewisePoly({lo, hi}, {poly::shift(global_coeffs, lo)});
}

int PiecewisePoly::degree() const {
  std::size_t n = 1;
  for (const auto& c : pieces_) n = std::max(n, c.size());
  return static_cast<int>(n) - 1;
}

std::size_t PiecewisePoly::piece_index(double x, Side side) const {
  auto it = std::upper_bound(bp_.begin(), bp_.end(), x);
  std::size_t k = static_cast<std::size_t>(it - bp_.begin());
  k = k == 0 ? 0 : k - 1;
  if (k >= pieces_.size()) k = pieces_.size() - 1;
  if (side == Side::Left && k > 0 && x == bp_[k]) --k;
  return k;
}

double PiecewisePoly::eval_piece(double x, int order, Side side) const {
  if (!(x >= lo() && x <= hi())) {
    std::ostringstream os;
    os.precision(17);
    os << "x=" << x << " outside [" << lo() << ", " << hi() << "]";
    throw DomainError(os.str());
  }
  if (order < 0) throw DomainError("negative derivative order");
  const std::size_t k = piece_index(x, side);
  return poly::horner(pieces_[k], x - bp_[k], order);
}

double PiecewisePoly::eval(double x, int order) const {
  if (order > static_cast<int>(smooth_))
    throw DomainError("derivative order " + std::to_string(order) + " exceeds smoothness " +
                      to_string(smooth_));
  return eval_piece(x, order, Side::Right);
}

std::vector<double> PiecewisePoly::sample_points(double lo_, double hi_, int per_piece) const {
  std::vector<double> pts;
  lo_ = std::max(lo_, lo());
  hi_ = std::min(hi_, hi());
  if (lo_ > hi_) return pts;
  pts.push_back(lo_);
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    const double u = std::max(bp_[k], lo_), v = std::min(bp_[k + 1], hi_);
    if (!(u < v)) continue;
    pts.push_back(u);
    for (int j = 0; j < per_piece; ++j) {
      const double theta = std::numbers::pi * (2.0 * j + 1.0) / (2.0 * per_piece);
      pts.push_back(0.5 * (u + v) - 0.5 * (v - u) * std::cos(theta));
    }
    pts.push_back(v);
  }
  pts.push_back(hi_);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

PiecewisePoly PiecewisePoly::restricted(double lo_, double hi_) const {
  if (!(lo_ >= lo() && hi_ <= hi() && lo_ < hi_)) throw DomainError("bad restriction interval");
  std::vector<double> bp{lo_};
  std::vector<std::vector<double>> pcs;
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    const double u = std::max(bp_[k], lo_), v = std::min(bp_[k + 1], hi_);
    if (!(u < v)) continue;
    pcs.push_back(poly::shift(pieces_[k], u - bp_[k]));
    bp.push_back(v);
  }
  return PiecewisePoly(bp, pcs);
}

PiecewisePoly PiecewisePoly::derivative() const {
  std::vector<std::vector<double>> pcs;
  for (const auto& c : pieces_) {
    std::vector<double> d;
    for (std::size_t j = 1; j < c.size(); ++j) d.push_back(c[j] * static_cast<double>(j));
    if (d.empty()) d.push_back(0.0);
    pcs.push_back(d);
  }
  return PiecewisePoly(bp_, pcs);
}

PiecewisePoly PiecewisePoly::scaled(double s) const {
  auto pcs = pieces_;
  for (auto& c : pcs)
    for (auto& v : c) v *= s;
  return PiecewisePoly(bp_, pcs, s == 0.0 ? std::nullopt : std::optional(smooth_));
}

PiecewisePoly PiecewisePoly::with_smoothness(Smoothness s) const {
  return PiecewisePoly(bp_, pieces_, s);
}

namespace {

template <class Op>
PiecewisePoly combine(const PiecewisePoly& p, const PiecewisePoly& q, Op op) {
  if (p.lo() != q.lo() || p.hi() != q.hi()) throw DomainError("operands have different domains");
  const auto bp = merged_breakpoints(p.breakpoints(), q.breakpoints());
  std::vector<std::vector<double>> pcs;
  for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
    const double mid = 0.5 * (bp[k] + bp[k + 1]);
    const std::size_t i = p.piece_index(mid), j = q.piece_index(mid);
    auto cp = poly::shift(p.pieces()[i], bp[k] - p.breakpoints()[i]);
    auto cq = poly::shift(q.pieces()[j], bp[k] - q.breakpoints()[j]);
    pcs.push_back(op(cp, cq));
  }
  return PiecewisePoly(bp, pcs);
}

}  // namespace

PiecewisePoly operator+(const PiecewisePoly& p, const PiecewisePoly& q) {
  return combine(p, q, [](std::vector<double> a, const std::vector<double>& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0.0);
    for (std::size_t j = 0; j < b.size(); ++j) a[j] += b[j];
    return a;
  });
}

PiecewisePoly operator-(const PiecewisePoly& p, const PiecewisePoly& q) { return p + q.scaled(-1.0); }

PiecewisePoly operator*(const PiecewisePoly& p, const PiecewisePoly& q) {
  return combine(p, q, [](const std::vector<double>& a, const std::vector<double>& b) {
    return poly::multiply(a, b);
  });
}

PiecewisePoly PiecewisePoly::concat(const std::vector<PiecewisePoly>& parts,
                                    std::optional<Smoothness> declared) {
  if (parts.empty()) throw SpecError("nothing to concatenate");
  std::vector<double> bp{parts.front().lo()};
  std::vector<std::vector<double>> pcs;
  for (const auto& part : parts) {
    if (part.lo() != bp.back()) throw SpecError("concatenated parts are not adjacent");
    for (std::size_t k = 0; k < part.pieces().size(); ++k) {
      pcs.push_back(part.pieces()[k]);
      bp.push_back(part.breakpoints()[k + 1]);
    }
  }
  return PiecewisePoly(bp, pcs, declared);
}

}  // namespace dynkin
