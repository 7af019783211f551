#include "dynkin/examples.hpp"

#include <cmath>

#include "dynkin/equilibrium.hpp"
#include "dynkin/errors.hpp"
#include "dynkin/gnep.hpp"

namespace dynkin {

namespace build {

PiecewisePoly from_curvature(const std::vector<double>& knots, const std::vector<double>& curv, double f0, double d0) {
  if (knots.size() < 2 || knots.size() != curv.size()) throw SpecError("knots and curvatures must match");
  std::vector<std::vector<double>> pcs;
  double f = f0, d = d0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double h = knots[i + 1] - knots[i];
    const double c0 = curv[i], k = (curv[i + 1] - curv[i]) / h;
    pcs.push_back({f, d, c0 / 2.0, k / 6.0});
    f += d * h + c0 * h * h / 2.0 + k * h * h * h / 6.0;
    d += c0 * h + k * h * h / 2.0;
  }
  return PiecewisePoly(knots, pcs);
}

PiecewisePoly from_curvature_pinned(const std::vector<double>& knots, const std::vector<double>& curv) {
  const double e0 = from_curvature(knots, curv, 0.0, 0.0).eval_piece(knots.back());
  const double e1 = from_curvature(knots, curv, 0.0, 1.0).eval_piece(knots.back());
  const double slope = -e0 / (e1 - e0);
  auto p = from_curvature(knots, curv, 0.0, slope);
  // Remove the rounding residue at the right end by a tiny linear correction.
  const double resid = p.eval_piece(knots.back());
  const double span = knots.back() - knots.front();
  return p - PiecewisePoly::polynomial({-resid * knots.front() / span, resid / span}, knots.front(), knots.back());
}

PiecewisePoly mirror(const PiecewisePoly& p) {
  const auto& bp = p.breakpoints();
  const double lo = p.lo(), hi = p.hi();
  std::vector<double> nbp;
  std::vector<std::vector<double>> pcs;
  for (std::size_t k = bp.size() - 1; k > 0; --k) {
    nbp.push_back(lo + hi - bp[k]);
    auto d = poly::shift(p.pieces()[k - 1], bp[k] - bp[k - 1]);
    for (std::size_t j = 1; j < d.size(); j += 2) d[j] = -d[j];
    pcs.push_back(d);
  }
  nbp.push_back(lo + hi - bp.front());
  return PiecewisePoly(nbp, pcs);
}

PiecewisePoly cutoff(double p, double q) {
  const double w = q - p;
  const double w3 = w * w * w;
  return PiecewisePoly({0.0, p, q, 1.0}, {{1.0}, {1.0, 0.0, 0.0, -10.0 / w3, 15.0 / (w3 * w), -6.0 / (w3 * w * w)}, {0.0}});
}

PiecewisePoly hump_leader(double a) {
  const double c = 6.0 * (5.0 * a * a / 12.0 + a * (1.0 - a)) / std::pow(1.0 - a, 3);
  return PiecewisePoly({0.0, a / 2.0, a, 1.0},
                       {{0.0, a / 2.0, -1.0}, {0.0, -a / 2.0, -1.0, 2.0 / (3.0 * a)}, {-5.0 * a * a / 12.0, -a, 0.0, c / 6.0}});
}

}  // namespace build

namespace {

PiecewisePoly midpoint(const PiecewisePoly& p, const PiecewisePoly& q) { return (p + q).scaled(0.5); }

GameSpec assemble(Geometry g, PiecewisePoly f1, PiecewisePoly g1, PiecewisePoly f2, PiecewisePoly g2) {
  GameSpec s;
  s.geometry = g;
  auto h1 = midpoint(f1, g1), h2 = midpoint(f2, g2);
  s.rewards = Rewards{std::move(f1), std::move(g1), std::move(h1), std::move(f2), std::move(g2), std::move(h2)};
  return s;
}

// Follower reward of the leader with bound a: (a/2) x up to a/2, then a C2 cutoff to zero at a.
PiecewisePoly cut_follower(double a) {
  return PiecewisePoly::polynomial({0.0, a / 2.0}) * build::cutoff(a / 2.0, a);
}

}  // namespace

GameSpec example_zero_sum(double a, double b) {
  if (!(0.0 < a && a < b && b < 1.0)) throw SpecError("zero_sum needs 0 < a < b < 1");
  // x (a - x) on [0, a], (1 - x)(a - x) on (a, 1]; same shape for b.
  auto bent = [](double c) {
    return PiecewisePoly::concat({PiecewisePoly::polynomial({0.0, c, -1.0}, 0.0, c),
                                  PiecewisePoly::polynomial({c, -(1.0 + c), 1.0}, c, 1.0)});
  };
  PiecewisePoly f1 = bent(a), g1 = bent(b);
  PiecewisePoly f2 = g1.scaled(-1.0), g2 = f1.scaled(-1.0);
  GameSpec s = assemble(Geometry::two_player(a, b), f1, g1, f2, g2);
  s.rewards.h2 = s.rewards.h1.scaled(-1.0);
  return s;
}

GameSpec example_nonzero_sum_gnep_zero(double a, double b) {
  if (!(0.0 < a && a < b && b < 1.0)) throw SpecError("nonzero_sum_gnep_zero needs 0 < a < b < 1");
  const double k = 1.0 + (1.0 - a) / (b - a);  // keeps f2 below g2 on [0, a]
  PiecewisePoly f1 = PiecewisePoly::constant(0.0);
  PiecewisePoly g1 = PiecewisePoly::polynomial({0.0, 1.0, -1.0});
  PiecewisePoly f2 = PiecewisePoly::concat(
      {PiecewisePoly::polynomial({0.0, -k * b, k}, 0.0, b), PiecewisePoly::constant(0.0, b, 1.0)});
  const double ga = a * (a - 1.0);
  PiecewisePoly g2 = PiecewisePoly::concat({PiecewisePoly::polynomial({0.0, -1.0, 1.0}, 0.0, a),
                                            PiecewisePoly({a, b}, {{ga, -ga / (b - a)}}),
                                            PiecewisePoly::constant(0.0, b, 1.0)});
  return assemble(Geometry::two_player(a, b), f1, g1, f2, g2);
}

GameSpec example_global_stable(double a, double b) {
  if (!(0.0 < a && a < b && b < 1.0 && b - a > 0.5)) throw SpecError("global_stable needs 0 < a < b < 1 and b - a > 1/2");
  const double ap = 1.0 - b;
  PiecewisePoly f1 = build::hump_leader(a);
  PiecewisePoly g1 = cut_follower(a);
  PiecewisePoly f2 = build::mirror(build::hump_leader(ap));
  PiecewisePoly g2 = build::mirror(cut_follower(ap));
  return assemble(Geometry::two_player(a, b), f1, g1, f2, g2);
}

GameSpec example_local_only(double eps, double radius, double w0) {
  GameSpec base = example_global_stable();
  const double a = base.geometry.a(), b = base.geometry.b;
  if (!(w0 >= 0.0 && w0 <= a)) throw SpecError("local_only needs w0 in [0, a]");
  if (!(radius > 0.0)) throw SpecError("local_only needs a positive radius");
  const double y0 = best_response2(base, w0).argmax;
  const double r_star = gauss_seidel(base, a / 2.0).s.r;
  if (std::abs(r_star - y0) <= radius)
    throw SpecError("local_only: the flattening neighbourhood contains the equilibrium threshold");
  if (!(y0 - radius > b && y0 + radius < 1.0)) throw SpecError("local_only: neighbourhood leaves (b, 1)");
  const PiecewisePoly& f2 = base.rewards.f2;
  const double curv = f2.eval_piece(y0, 2);
  if (!(eps > curv && eps < 0.0)) throw SpecError("local_only needs eps between f2''(y0) and 0");
  // Correction with second derivative piecewise linear on y0 + k h, k = -3..3:
  // alpha at the centre, -5 alpha / 6 at +-h, alpha / 3 at +-2h, 0 beyond.
  // Its value, slope and first moment vanish outside, so only the
  // curvature at y0 changes there.
  const double alpha = eps - curv, h = radius / 3.0;
  std::vector<double> knots{0.0}, curvs{0.0};
  const double prof[] = {0.0, alpha / 3.0, -5.0 * alpha / 6.0, alpha, -5.0 * alpha / 6.0, alpha / 3.0, 0.0};
  for (int k = -3; k <= 3; ++k) {
    knots.push_back(y0 + k * h);
    curvs.push_back(prof[k + 3]);
  }
  knots.push_back(1.0);
  curvs.push_back(0.0);
  PiecewisePoly bump = build::from_curvature(knots, curvs, 0.0, 0.0);
  // Exact zeros outside the neighbourhood.
  std::vector<std::vector<double>> pcs = bump.pieces();
  pcs.front() = {0.0};
  pcs.back() = {0.0};
  bump = PiecewisePoly(bump.breakpoints(), pcs);
  GameSpec out = base;
  out.rewards.f2 = f2 + bump;
  out.rewards.h2 = midpoint(out.rewards.f2, out.rewards.g2);
  return out;
}

GameSpec example_g2_three_player(double a1, double a2, double b) {
  if (!(0.0 < a1 && a1 < a2 && a2 < b && b < 1.0)) throw SpecError("g2_three_player needs 0 < a1 < a2 < b < 1");
  const double m = 0.5 * (a1 + a2);
  PiecewisePoly f1 = build::from_curvature_pinned({0.0, a1, m, a2, 1.0}, {2.0, 0.0, -40.0, 0.0, 6.0});
  PiecewisePoly g1 = f1 + PiecewisePoly::polynomial({0.0, 0.3, -0.3});
  PiecewisePoly f2 = build::mirror(build::hump_leader(1.0 - b));
  PiecewisePoly g2 = f2 + PiecewisePoly::polynomial({0.0, 0.05, -0.05});
  return assemble(Geometry::three_player(a1, a2, b), f1, g1, f2, g2);
}

std::vector<std::string> example_names() {
  return {"zero_sum", "nonzero_sum_gnep_zero", "global_stable", "local_only", "g2_three_player"};
}

GameSpec builtin_example(const std::string& name) {
  if (name == "zero_sum") return example_zero_sum();
  if (name == "nonzero_sum_gnep_zero") return example_nonzero_sum_gnep_zero();
  if (name == "global_stable") return example_global_stable();
  if (name == "local_only") return example_local_only();
  if (name == "g2_three_player") return example_g2_three_player();
  throw SpecError("unknown example '" + name + "'");
}

}  // namespace dynkin
