#include "dynkin/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dynkin/errors.hpp"

namespace dynkin {

TValue T_operator(const GameSpec& spec, double w, double xbar, double ybar) {
  TValue t;
  const Partials p1 = partials1(spec, xbar, ybar);
  const Partials p2 = partials2(spec, w, ybar);
  if (p1.dxx == 0.0 || p2.dyy == 0.0) {
    t.defined = false;
    t.value = std::numeric_limits<double>::infinity();
    return t;
  }
  t.value = (p1.dxy / p1.dxx) * (p2.dxy / p2.dyy);

  const auto& R = spec.rewards;
  const double fit1 = R.f1.eval_piece(xbar) + R.f1.eval_piece(xbar, 1) * (ybar - xbar) - R.g1.eval_piece(ybar);
  const double fit2 = R.g2.eval_piece(w) + R.f2.eval_piece(ybar, 1) * (ybar - w) - R.f2.eval_piece(ybar);
  if (std::abs(fit1) < 1e-9 && std::abs(fit2) < 1e-9) {
    const double d1 = R.f1.eval_piece(xbar, 2) * (ybar - xbar);
    const double d2 = R.f2.eval_piece(ybar, 2) * (ybar - w);
    if (d1 != 0.0 && d2 != 0.0)
      t.closed_form = (R.f1.eval_piece(xbar, 1) - R.g1.eval_piece(ybar, 1)) / d1 *
                      ((R.g2.eval_piece(w, 1) - R.f2.eval_piece(ybar, 1)) / d2);
  }
  return t;
}

double local_stability(const GameSpec& spec, const ThresholdStrategy& s) {
  const double a = spec.geometry.a(), b = spec.geometry.b;
  if (!(s.l > 0.0 && s.l < a && s.r > b && s.r < 1.0))
    throw ConditionError("local stability needs an equilibrium interior to (0, a) x (b, 1)");
  const TValue t = T_operator(spec, s.l, s.l, s.r);
  if (!t.defined) throw ConditionError("a second partial vanishes at the equilibrium");
  return std::abs(t.value);
}

namespace {

double abs_T_along(const GameSpec& spec, double w, const BestResponseOptions& opt) {
  const double y = best_response2(spec, w, opt).argmax;
  const double x = best_response1(spec, y, opt).argmax;
  if (!(x < y)) return std::numeric_limits<double>::infinity();
  const TValue t = T_operator(spec, w, x, y);
  return t.defined ? std::abs(t.value) : std::numeric_limits<double>::infinity();
}

}  // namespace

StabilityReport global_stability(const GameSpec& spec, int grid, const BestResponseOptions& opt) {
  StabilityReport rep;
  rep.grid = grid;
  const double a = spec.geometry.a();
  std::vector<double> ws(grid), ts(grid);
  int best = 0;
  for (int i = 0; i < grid; ++i) {
    ws[i] = i == grid - 1 ? a : a * i / (grid - 1);
    ts[i] = abs_T_along(spec, ws[i], opt);
    if (ts[i] > ts[best]) best = i;
  }
  double sup = ts[best], arg = ws[best];
  // Golden search of the cell pair around the grid maximum.
  if (std::isfinite(sup) && grid >= 3) {
    double lo = ws[std::max(best - 1, 0)], hi = ws[std::min(best + 1, grid - 1)];
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - phi * (hi - lo), d = lo + phi * (hi - lo);
    double fc = abs_T_along(spec, c, opt), fd = abs_T_along(spec, d, opt);
    for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
      if (fc >= fd) {
        hi = d; d = c; fd = fc; c = hi - phi * (hi - lo); fc = abs_T_along(spec, c, opt);
      } else {
        lo = c; c = d; fc = fd; d = lo + phi * (hi - lo); fd = abs_T_along(spec, d, opt);
      }
    }
    for (auto [w, v] : {std::pair{c, fc}, std::pair{d, fd}})
      if (v > sup) {
        sup = v;
        arg = w;
      }
  }
  rep.global_sup = sup;
  rep.argsup_w = arg;
  rep.globally_stable = sup < 1.0;
  return rep;
}

StabilityReport stability_report(const GameSpec& spec, const ThresholdStrategy& s, int grid,
                                 const BestResponseOptions& opt) {
  StabilityReport rep = global_stability(spec, grid, opt);
  try {
    rep.rho0 = local_stability(spec, s);
    rep.locally_stable = *rep.rho0 < 1.0;
  } catch (const ConditionError& e) {
    rep.notes.push_back(e.what());
  }
  return rep;
}

RosenQuantities rosen_quantities(const GameSpec& spec, double x, double y) {
  const auto& R = spec.rewards;
  const double d = y - x;
  const double f1 = R.f1.eval_piece(x), f1p = R.f1.eval_piece(x, 1), f1pp = R.f1.eval_piece(x, 2);
  const double g1 = R.g1.eval_piece(y), g1p = R.g1.eval_piece(y, 1);
  const double f2 = R.f2.eval_piece(y), f2p = R.f2.eval_piece(y, 1), f2pp = R.f2.eval_piece(y, 2);
  const double g2 = R.g2.eval_piece(x), g2p = R.g2.eval_piece(x, 1);
  return {f1pp * d * d + 2.0 * (f1 + f1p * d - g1), f2pp * d * d + 2.0 * (f2 - f2p * d - g2),
          2.0 * (g1 - f1) - (f1p + g1p) * d, 2.0 * (g2 - f2) + (g2p + f2p) * d};
}

namespace {

std::vector<double> axis(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
  return v;
}

double margin_at(const RosenQuantities& q, double r1, double r2) {
  const double m = r1 * q.h3 + r2 * q.h4;
  return 4.0 * r1 * r2 * q.h1 * q.h2 - m * m;
}

}  // namespace

double rosen_margin(const GameSpec& spec, double r1, double r2, int grid, double* at_x, double* at_y) {
  const double a = spec.geometry.a(), b = spec.geometry.b;
  double worst = std::numeric_limits<double>::infinity(), wx = 0, wy = 0;
  const auto xs = axis(0.0, a, grid), ys = axis(b, 1.0, grid);
  for (double x : xs)
    for (double y : ys) {
      if (!(x < y)) continue;
      const double m = margin_at(rosen_quantities(spec, x, y), r1, r2);
      if (m < worst) {
        worst = m;
        wx = x;
        wy = y;
      }
    }
  // Local refinement around the worst cell.
  const double hx = a / (grid - 1), hy = (1.0 - b) / (grid - 1);
  for (double x : axis(std::max(0.0, wx - hx), std::min(a, wx + hx), 33))
    for (double y : axis(std::max(b, wy - hy), std::min(1.0, wy + hy), 33)) {
      if (!(x < y)) continue;
      const double m = margin_at(rosen_quantities(spec, x, y), r1, r2);
      if (m < worst) {
        worst = m;
        wx = x;
        wy = y;
      }
    }
  if (at_x) *at_x = wx;
  if (at_y) *at_y = wy;
  return worst;
}

RosenReport rosen_uniqueness(const GameSpec& spec, int grid, int simplex_steps) {
  RosenReport rep;
  rep.grid = grid;
  const double a = spec.geometry.a(), b = spec.geometry.b;
  const auto xs = axis(0.0, a, grid), ys = axis(b, 1.0, grid);
  for (double x : xs)
    for (double y : ys) {
      if (!(x < y)) continue;
      const auto q = rosen_quantities(spec, x, y);
      if (x > 0.0 && x < a && q.h1 > 1e-12) rep.player1_concavity = false;
      if (y > b && y < 1.0 && q.h2 > 1e-12) rep.player2_concavity = false;
    }
  double best_t = 0.5, best = -std::numeric_limits<double>::infinity();
  for (int k = 1; k < simplex_steps - 1; ++k) {
    const double t = static_cast<double>(k) / (simplex_steps - 1);
    const double m = rosen_margin(spec, t, 1.0 - t, grid);
    if (m > best) {
      best = m;
      best_t = t;
    }
  }
  // Golden refinement of the weight.
  double lo = std::max(0.0, best_t - 1.0 / (simplex_steps - 1)), hi = std::min(1.0, best_t + 1.0 / (simplex_steps - 1));
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - phi * (hi - lo), d = lo + phi * (hi - lo);
  double fc = rosen_margin(spec, c, 1.0 - c, grid), fd = rosen_margin(spec, d, 1.0 - d, grid);
  for (int it = 0; it < 30; ++it) {
    if (fc >= fd) {
      hi = d; d = c; fd = fc; c = hi - phi * (hi - lo); fc = rosen_margin(spec, c, 1.0 - c, grid);
    } else {
      lo = c; c = d; fc = fd; d = lo + phi * (hi - lo); fd = rosen_margin(spec, d, 1.0 - d, grid);
    }
  }
  if (fc > best) { best = fc; best_t = c; }
  if (fd > best) { best = fd; best_t = d; }
  rep.r1 = best_t;
  rep.r2 = 1.0 - best_t;
  rep.min_margin = rosen_margin(spec, rep.r1, rep.r2, grid, &rep.argmin_x, &rep.argmin_y);
  rep.found = rep.min_margin > 0.0 && rep.player1_concavity && rep.player2_concavity;
  return rep;
}

}  // namespace dynkin
