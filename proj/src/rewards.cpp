#include "dynkin/rewards.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dynkin/errors.hpp"
#include "dynkin/gnep.hpp"

namespace dynkin {

void ConditionReport::fail(Witness w) {
  holds = false;
  if (witnesses.size() < 16) witnesses.push_back(std::move(w));
}

namespace {

constexpr double kCurvatureTol = 1e-10;
constexpr double kOrderTol = 1e-12;

std::vector<double> uniform(double lo, double hi, int n) {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
  return xs;
}

// Grid plus every breakpoint of the given functions inside [lo, hi].
std::vector<double> probe_points(double lo, double hi, std::initializer_list<const PiecewisePoly*> fs,
                                 int n = 1025) {
  auto xs = uniform(lo, hi, n);
  for (const auto* p : fs) {
    auto s = p->sample_points(lo, hi, 8);
    xs.insert(xs.end(), s.begin(), s.end());
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

void check_ordered(const PiecewisePoly& lower, const PiecewisePoly& upper, double lo, double hi,
                   bool strict, const std::string& clause, ConditionReport& rep) {
  for (double x : probe_points(lo, hi, {&lower, &upper})) {
    const double gap = upper.eval_piece(x) - lower.eval_piece(x);
    const bool bad = strict ? !(gap > kOrderTol) : gap < -kOrderTol;
    if (bad) rep.fail({x, std::nullopt, clause, gap});
  }
}

}  // namespace

GameSpec normalize_boundary(const GameSpec& spec) {
  GameSpec out = spec;
  const double H0 = spec.boundary[0], H1 = spec.boundary[1];
  if (H0 == 0.0 && H1 == 0.0) return out;
  if (spec.diffusion || spec.discount != 0.0)
    throw SpecError("non-zero exit payoff is only supported for the undiscounted Brownian game");
  const double lo = spec.lo(), hi = spec.hi();
  // H0 (1 - x) + H1 x
  const PiecewisePoly H = PiecewisePoly::polynomial({H0, H1 - H0}, lo, hi);
  auto& R = out.rewards;
  for (PiecewisePoly* p : {&R.f1, &R.g1, &R.h1, &R.f2, &R.g2, &R.h2}) {
    const Smoothness s = p->smoothness();
    *p = (*p - H).with_smoothness(s);
  }
  out.boundary = {0.0, 0.0};
  return out;
}

void check_geometry(const GameSpec& spec) {
  const auto& g = spec.geometry;
  const double lo = spec.lo(), hi = spec.hi();
  for (double v : {g.a1, g.a2, g.b})
    if (!std::isfinite(v) || v < lo || v > hi) throw SpecError("geometry value outside the state interval");
  if (g.a1 > g.a2) throw SpecError("geometry needs a1 <= a2");
  if (!(spec.discount >= 0.0) || !std::isfinite(spec.discount)) throw SpecError("discount must be >= 0");
  const auto& R = spec.rewards;
  for (const PiecewisePoly* p : {&R.f1, &R.g1, &R.h1, &R.f2, &R.g2, &R.h2})
    if (p->lo() != lo || p->hi() != hi) throw SpecError("reward domain differs from the state interval");
  if (spec.diffusion) {
    const auto& d = *spec.diffusion;
    if (!(d.xl < d.xr)) throw SpecError("diffusion interval must satisfy xl < xr");
    if (d.mu.lo() != d.xl || d.mu.hi() != d.xr || d.sigma.lo() != d.xl || d.sigma.hi() != d.xr)
      throw SpecError("diffusion coefficients must be defined on the diffusion interval");
    for (double x : d.sigma.sample_points(d.xl, d.xr, 16))
      if (!(d.sigma.eval_piece(x) > 0.0)) throw SpecError("sigma must be strictly positive");
  }
}

void check_boundary_vanishing(const GameSpec& spec, double tol) {
  const auto& R = spec.rewards;
  const char* names[] = {"f1", "g1", "h1", "f2", "g2", "h2"};
  const PiecewisePoly* fs[] = {&R.f1, &R.g1, &R.h1, &R.f2, &R.g2, &R.h2};
  for (int i = 0; i < 6; ++i) {
    for (double x : {spec.lo(), spec.hi()}) {
      const double v = fs[i]->eval_piece(x);
      if (std::abs(v) > tol) {
        std::ostringstream os;
        os.precision(12);
        os << "reward " << names[i] << " does not vanish at x=" << x << " after boundary normalization (value "
           << v << ")";
        throw SpecError(os.str());
      }
    }
  }
}

bool check_curvature(const PiecewisePoly& f, double lo, double hi, Curvature kind, bool strict,
                     ConditionReport& rep, const std::string& clause) {
  bool ok = true;
  const double sign = kind == Curvature::Convex ? 1.0 : -1.0;
  const auto& bp = f.breakpoints();
  for (std::size_t k = 0; k < f.pieces().size(); ++k) {
    const double u = std::max(bp[k], lo), v = std::min(bp[k + 1], hi);
    if (!(u < v)) continue;
    bool all_zero = true;
    for (double x : f.sample_points(u, v, 16)) {
      const double t = x - bp[k];
      const double dd = sign * poly::horner(f.pieces()[k], t, 2);
      const double tol = kCurvatureTol * std::max(1.0, std::abs(dd));
      if (dd < -tol) {
        ok = false;
        rep.fail({x, std::nullopt, clause, dd});
      }
      if (std::abs(dd) > tol) all_zero = false;
    }
    if (strict && all_zero) {
      ok = false;
      rep.fail({0.5 * (u + v), std::nullopt, clause + " (strict: second derivative vanishes on a piece)", 0.0});
    }
  }
  for (std::size_t k = 1; k + 1 < bp.size(); ++k) {
    const double x = bp[k];
    if (!(x > lo && x < hi)) continue;
    const double jump = sign * (f.eval_piece(x, 1, Side::Right) - f.eval_piece(x, 1, Side::Left));
    if (jump < -kCurvatureTol * std::max(1.0, std::abs(jump))) {
      ok = false;
      rep.fail({x, std::nullopt, clause + " (slope jump)", jump});
    }
  }
  return ok;
}

ConditionReport validate_assumption1(const GameSpec& spec) {
  ConditionReport rep{"assumption1", true, {}};
  const auto& R = spec.rewards;
  const double lo = spec.lo(), hi = spec.hi();
  check_ordered(R.f1, R.h1, lo, hi, false, "f1 <= h1", rep);
  check_ordered(R.h1, R.g1, lo, hi, false, "h1 <= g1", rep);
  check_ordered(R.f2, R.h2, lo, hi, false, "f2 <= h2", rep);
  check_ordered(R.h2, R.g2, lo, hi, false, "h2 <= g2", rep);
  return rep;
}

ConditionReport validate_assumption1_prime(const GameSpec& spec) {
  ConditionReport rep{"assumption1_prime", true, {}};
  const double a = spec.geometry.a(), b = spec.geometry.b;
  if (b <= a) {
    const auto& R = spec.rewards;
    check_ordered(R.f1, R.g1, b, a, true, "g1 > f1 on [b, a]", rep);
    check_ordered(R.f2, R.g2, b, a, true, "g2 > f2 on [b, a]", rep);
  }
  return rep;
}

namespace {

void g1_clauses(const GameSpec& spec, bool strict, ConditionReport& rep) {
  const auto& R = spec.rewards;
  const double a = spec.geometry.a(), b = spec.geometry.b;
  check_curvature(R.f1, 0.0, a, Curvature::Concave, strict, rep, "(i) f1 concave on [0, a]");
  check_curvature(R.f1, a, 1.0, Curvature::Convex, strict, rep, "(i) f1 convex on [a, 1]");
  check_curvature(R.f2, 0.0, b, Curvature::Convex, strict, rep, "(ii) f2 convex on [0, b]");
  check_curvature(R.f2, b, 1.0, Curvature::Concave, strict, rep, "(ii) f2 concave on [b, 1]");
  if (b <= a) {
    check_ordered(R.f1, R.g1, b, a, true, "(iii) f1 < g1 on [b, a]", rep);
    check_ordered(R.f2, R.g2, b, a, true, "(iii) f2 < g2 on [b, a]", rep);
  }
}

}  // namespace

ConditionReport validate_G1(const GameSpec& spec) {
  ConditionReport rep{"G1", true, {}};
  g1_clauses(spec, false, rep);
  return rep;
}

ConditionReport validate_G1_prime(const GameSpec& spec) {
  ConditionReport rep{"G1_prime", true, {}};
  const auto& g = spec.geometry;
  const double a = g.a(), b = g.b;
  if (!(a < b)) rep.fail({a, b, "a < b", b - a});
  g1_clauses(spec, true, rep);
  const auto& R = spec.rewards;
  const char* names[] = {"f1", "g1", "f2", "g2"};
  const PiecewisePoly* fs[] = {&R.f1, &R.g1, &R.f2, &R.g2};
  for (int i = 0; i < 4; ++i)
    if (fs[i]->smoothness() != Smoothness::C2)
      rep.fail({0.0, std::nullopt, std::string("rewards in C2: ") + names[i], 0.0});
  if (a < b) {
    // Some stopping point beats the reduced follower payoff.
    const auto ys = uniform(b, 1.0, 129);
    const auto xhat = uniform(0.0, a, 257);
    for (double y : ys) {
      double best = -INFINITY;
      for (std::size_t i = 1; i < xhat.size(); ++i)
        best = std::max(best, R.f1.eval_piece(xhat[i]) - R.g1.eval_piece(y) * xhat[i] / y);
      if (!(best > 0.0)) rep.fail({0.0, y, "(4) exists x in (0, a] with f1(x) > g1(y) x / y", best});
    }
    const auto xs = uniform(0.0, a, 129);
    const auto yhat = uniform(b, 1.0, 257);
    for (double x : xs) {
      double best = -INFINITY;
      for (std::size_t i = 0; i + 1 < yhat.size(); ++i)
        best = std::max(best, R.f2.eval_piece(yhat[i]) - R.g2.eval_piece(x) * (1.0 - yhat[i]) / (1.0 - x));
      if (!(best > 0.0)) rep.fail({x, std::nullopt, "(4) exists y in [b, 1) with f2(y) > g2(x)(1-y)/(1-x)", best});
    }
  }
  return rep;
}

ConditionReport validate_G2(const GameSpec& spec) {
  ConditionReport rep{"G2", true, {}};
  const auto& g = spec.geometry;
  if (!(0.0 < g.a1 && g.a1 <= g.a2 && g.a2 < g.b && g.b < 1.0))
    rep.fail({g.a1, g.b, "0 < a1 <= a2 < b < 1", 0.0});
  const auto& R = spec.rewards;
  check_curvature(R.f1, 0.0, g.a1, Curvature::Convex, false, rep, "(i) f1 convex on [0, a1]");
  check_curvature(R.f1, g.a1, g.a2, Curvature::Concave, false, rep, "(i) f1 concave on [a1, a2]");
  check_curvature(R.f1, g.a2, 1.0, Curvature::Convex, false, rep, "(i) f1 convex on [a2, 1]");
  check_curvature(R.f2, 0.0, g.b, Curvature::Convex, false, rep, "(ii) f2 convex on [0, b]");
  check_curvature(R.f2, g.b, 1.0, Curvature::Concave, false, rep, "(ii) f2 concave on [b, 1]");
  return rep;
}

namespace {

// Largest dip below the running envelope of a sampled slice.
std::pair<int, double> worst_dip(const std::vector<double>& v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> suffix(n);
  suffix[n - 1] = v[n - 1];
  for (int i = n - 2; i >= 0; --i) suffix[i] = std::max(v[i], suffix[i + 1]);
  double prefix = -INFINITY, worst = 0.0;
  int at = -1;
  for (int i = 0; i < n; ++i) {
    prefix = std::max(prefix, v[i]);
    const double dip = std::min(prefix, suffix[i]) - v[i];
    if (std::isfinite(dip) && dip > worst) {
      worst = dip;
      at = i;
    }
  }
  return {at, worst};
}

}  // namespace

ConditionReport validate_U(const GameSpec& spec, int grid) {
  ConditionReport rep{"U", true, {}};
  const double a = spec.geometry.a(), b = spec.geometry.b;
  for (double y : uniform(b, 1.0, grid)) {
    const double hi = std::min(y, a);
    auto xs = uniform(0.0, hi, grid);
    std::vector<double> v;
    for (double x : xs) v.push_back(utility1(spec, x, y).as_double());
    auto [i, dip] = worst_dip(v);
    const double tol = 1e-12 * (1.0 + *std::max_element(v.begin(), v.end()));
    if (i >= 0 && dip > tol) rep.fail({xs[i], y, "U1(., y) quasi-concave on K1(y)", -dip});
  }
  for (double x : uniform(0.0, a, grid)) {
    const double lo = std::max(x, b);
    auto ys = uniform(lo, 1.0, grid);
    std::vector<double> v;
    for (double y : ys) v.push_back(utility2(spec, x, y).as_double());
    auto [i, dip] = worst_dip(v);
    const double tol = 1e-12 * (1.0 + *std::max_element(v.begin(), v.end()));
    if (i >= 0 && dip > tol) rep.fail({x, ys[i], "U2(x, .) quasi-concave on K2(x)", -dip});
  }
  return rep;
}

}  // namespace dynkin
