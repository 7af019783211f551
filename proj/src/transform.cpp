#include "dynkin/transform.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <set>

#include "dynkin/errors.hpp"

namespace dynkin {

std::vector<double> hermite5(double h, double p0, double p0d, double p0dd, double p1, double p1d, double p1dd) {
  const double c0 = p0, c1 = p0d, c2 = 0.5 * p0dd;
  const double A = p1 - (c0 + c1 * h + c2 * h * h);
  const double B = p1d - (c1 + 2.0 * c2 * h);
  const double C = p1dd - 2.0 * c2;
  const double h2 = h * h, h3 = h2 * h;
  const double c3 = (10.0 * A - 4.0 * B * h + 0.5 * C * h2) / h3;
  const double c4 = (-15.0 * A + 7.0 * B * h - C * h2) / (h3 * h);
  const double c5 = (6.0 * A - 3.0 * B * h + 0.5 * C * h2) / (h3 * h2);
  return {c0, c1, c2, c3, c4, c5};
}

HermiteTable::HermiteTable(std::vector<double> x, std::vector<double> v, std::vector<double> d1,
                           std::vector<double> d2_left, std::vector<double> d2_right)
    : x_(std::move(x)), v_(std::move(v)), d1_(std::move(d1)), d2l_(std::move(d2_left)), d2r_(std::move(d2_right)) {
  if (x_.size() < 2 || v_.size() != x_.size() || d1_.size() != x_.size() || d2l_.size() != x_.size() ||
      d2r_.size() != x_.size())
    throw SpecError("interpolation table needs at least two nodes with matching data");
}

std::size_t HermiteTable::cell(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t k = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(k, x_.size() - 2);
}

double HermiteTable::eval(double x, int order) const {
  const double span = x_.back() - x_.front();
  if (x < x_.front() - 1e-12 * span || x > x_.back() + 1e-12 * span)
    throw DomainError("point outside the transform grid");
  x = std::clamp(x, x_.front(), x_.back());
  const std::size_t k = cell(x);
  const double h = x_[k + 1] - x_[k];
  auto c = hermite5(h, v_[k], d1_[k], d2r_[k], v_[k + 1], d1_[k + 1], d2l_[k + 1]);
  return poly::horner(c, x - x_[k], order);
}

double HermiteTable::inverse(double y) const {
  if (y <= v_.front()) return x_.front();
  if (y >= v_.back()) return x_.back();
  auto it = std::upper_bound(v_.begin(), v_.end(), y);
  std::size_t k = std::min(static_cast<std::size_t>(it - v_.begin()) - 1, x_.size() - 2);
  const double h = x_[k + 1] - x_[k];
  auto c = hermite5(h, v_[k], d1_[k], d2r_[k], v_[k + 1], d1_[k + 1], d2l_[k + 1]);
  double lo = 0.0, hi = h;
  double t = h * (y - v_[k]) / (v_[k + 1] - v_[k]);
  for (int it2 = 0; it2 < 100; ++it2) {
    const double r = poly::horner(c, t) - y;
    if (r > 0) hi = t; else lo = t;
    if (std::abs(r) <= 1e-16 * (1.0 + std::abs(y)) || hi - lo <= 1e-17 * (1.0 + std::abs(x_[k]))) break;
    const double d = poly::horner(c, t, 1);
    double next = d > 0 ? t - r / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  return x_[k] + t;
}

namespace {

using State = std::array<double, 2>;
// Right-hand side evaluated inside one cell; `side` matters only at cell ends.
using Rhs = std::function<State(double x, const State& y, Side side)>;

std::vector<double> structural_points(const Diffusion& d) {
  std::set<double> pts{d.xl, d.xr};
  for (const auto* p : {&d.mu, &d.sigma})
    for (double b : p->breakpoints())
      if (b > d.xl && b < d.xr) pts.insert(b);
  return {pts.begin(), pts.end()};
}

// Uniform sub-grids between structural points, about `per_unit` cells per
// unit of interval length.
std::vector<double> build_nodes(const std::vector<double>& pts, double per_unit) {
  std::vector<double> nodes{pts.front()};
  const double total = pts.back() - pts.front();
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double len = pts[k + 1] - pts[k];
    const int m = std::max(8, static_cast<int>(std::ceil(per_unit * len / total)));
    for (int j = 1; j < m; ++j) nodes.push_back(pts[k] + len * j / m);
    nodes.push_back(pts[k + 1]);
  }
  return nodes;
}

State axpy(const State& y, double a, const State& k) { return {y[0] + a * k[0], y[1] + a * k[1]}; }

// Classical RK4, one step per cell; forward from the first node or backward from the last.
std::vector<State> march(const std::vector<double>& nodes, const Rhs& f, State y0, bool backward) {
  const std::size_t n = nodes.size();
  std::vector<State> out(n);
  if (!backward) {
    out[0] = y0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double x = nodes[i], h = nodes[i + 1] - x;
      const State& y = out[i];
      State k1 = f(x, y, Side::Right);
      State k2 = f(x + 0.5 * h, axpy(y, 0.5 * h, k1), Side::Right);
      State k3 = f(x + 0.5 * h, axpy(y, 0.5 * h, k2), Side::Right);
      State k4 = f(x + h, axpy(y, h, k3), Side::Left);
      out[i + 1] = {y[0] + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
                    y[1] + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
    }
  } else {
    out[n - 1] = y0;
    for (std::size_t i = n - 1; i > 0; --i) {
      const double x = nodes[i], h = nodes[i - 1] - x;  // negative
      const State& y = out[i];
      State k1 = f(x, y, Side::Left);
      State k2 = f(x + 0.5 * h, axpy(y, 0.5 * h, k1), Side::Left);
      State k3 = f(x + 0.5 * h, axpy(y, 0.5 * h, k2), Side::Left);
      State k4 = f(x + h, axpy(y, h, k3), Side::Right);
      out[i - 1] = {y[0] + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
                    y[1] + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
    }
  }
  return out;
}

std::vector<double> refine(const std::vector<double>& nodes) {
  std::vector<double> fine;
  fine.reserve(2 * nodes.size());
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    fine.push_back(nodes[i]);
    fine.push_back(0.5 * (nodes[i] + nodes[i + 1]));
  }
  fine.push_back(nodes.back());
  return fine;
}

// Step halving until the solution on the coarse nodes agrees with the
// refined one to `tol` relative to its size in both components.
struct Marched {
  std::vector<double> nodes;
  std::vector<State> y;
};
Marched march_converged(const std::vector<double>& pts, const Rhs& f, State y0, bool backward, double tol,
                        const std::vector<int>& watched) {
  auto nodes = build_nodes(pts, 1024);
  auto coarse = march(nodes, f, y0, backward);
  for (int round = 0; round < 12; ++round) {
    auto fine_nodes = refine(nodes);
    auto fine = march(fine_nodes, f, y0, backward);
    double diff = 0.0;
    for (int c : watched) {
      double scale = 0.0;
      for (const auto& s : fine) scale = std::max(scale, std::abs(s[c]));
      scale = std::max(scale, 1e-300);
      for (std::size_t i = 0; i < nodes.size(); ++i)
        diff = std::max(diff, std::abs(coarse[i][c] - fine[2 * i][c]) / scale);
    }
    nodes = std::move(fine_nodes);
    coarse = std::move(fine);
    if (diff < tol) return {std::move(nodes), std::move(coarse)};
  }
  throw ConvergenceError("ODE marching did not reach the requested agreement");
}

void check_volatility(const Diffusion& d) {
  if (!(d.xl < d.xr)) throw SpecError("diffusion interval must satisfy xl < xr");
  for (double x : d.sigma.sample_points(d.xl, d.xr)) {
    const double s = d.sigma.eval_piece(x);
    if (!(s > 1e-8)) throw SpecError("volatility is not bounded away from zero at x = " + std::to_string(x));
  }
}

double coef(const PiecewisePoly& p, double x, Side side) { return p.eval_piece(x, 0, side); }

// 2 mu / sigma^2
double drift_ratio(const Diffusion& d, double x, Side side) {
  const double s = coef(d.sigma, x, side);
  return 2.0 * coef(d.mu, x, side) / (s * s);
}

// max over interior nodes of |0.5 s^2 w'' + mu w' - lambda w| / max|w| with
// five-point stencils that stay inside one uniform stretch.
double stencil_residual(const HermiteTable& t, const Diffusion& d, double lambda, const std::vector<double>& pts) {
  const auto& x = t.nodes();
  const auto& w = t.values();
  double scale = 0.0;
  for (double v : w) scale = std::max(scale, std::abs(v));
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < x.size(); ++i) {
    bool crosses = false;
    for (double p : pts)
      if (p > x[i - 2] && p < x[i + 2] && p != x[i]) crosses = true;
    if (crosses) continue;
    const bool at_break = std::binary_search(pts.begin(), pts.end(), x[i]);
    if (at_break) continue;
    const double h = x[i + 1] - x[i];
    if (std::abs((x[i] - x[i - 1]) - h) > 1e-9 * h) continue;
    const double d2 = (-w[i - 2] + 16 * w[i - 1] - 30 * w[i] + 16 * w[i + 1] - w[i + 2]) / (12 * h * h);
    const double d1 = (w[i - 2] - 8 * w[i - 1] + 8 * w[i + 1] - w[i + 2]) / (12 * h);
    const double s = coef(d.sigma, x[i], Side::Right);
    const double r = 0.5 * s * s * d2 + coef(d.mu, x[i], Side::Right) * d1 - lambda * w[i];
    worst = std::max(worst, std::abs(r) / scale);
  }
  return worst;
}

}  // namespace

double Transform::inverse(double u) const { return map_.inverse(u); }

double Transform::psi(double x, int order) const {
  return kind == TransformKind::Scale ? map_.eval(x, order) : psi_.eval(x, order);
}

double Transform::phi(double x, int order) const {
  if (kind == TransformKind::Scale) return order == 0 ? 1.0 : 0.0;
  return phi_.eval(x, order);
}

double Transform::ode_residual() const {
  const auto pts = structural_points(diffusion);
  if (kind == TransformKind::Scale) return stencil_residual(map_, diffusion, 0.0, pts);
  return std::max(stencil_residual(psi_, diffusion, lambda, pts), stencil_residual(phi_, diffusion, lambda, pts));
}

Transform scale_function(const Diffusion& d, double tol) {
  check_volatility(d);
  const auto pts = structural_points(d);
  // (s, S) with s' = 2 mu / sigma^2 and S' = exp(-s).
  Rhs f = [&d](double x, const State& y, Side side) -> State {
    return {drift_ratio(d, x, side), std::exp(-y[0])};
  };
  auto sol = march_converged(pts, f, {0.0, 0.0}, false, tol, {1});
  const std::size_t n = sol.nodes.size();
  const double total = sol.y.back()[1];
  std::vector<double> v(n), d1(n), d2l(n), d2r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = sol.nodes[i];
    v[i] = sol.y[i][1] / total;
    d1[i] = std::exp(-sol.y[i][0]) / total;
    d2l[i] = -drift_ratio(d, x, Side::Left) * d1[i];
    d2r[i] = -drift_ratio(d, x, Side::Right) * d1[i];
  }
  v.front() = 0.0;
  v.back() = 1.0;
  Transform t;
  t.kind = TransformKind::Scale;
  t.xl = d.xl;
  t.xr = d.xr;
  t.lambda = 0.0;
  t.diffusion = d;
  t.map_ = HermiteTable(sol.nodes, v, d1, d2l, d2r);
  return t;
}

Transform discount_transform(const Diffusion& d, double lambda, double tol) {
  if (!(lambda > 0)) throw SpecError("discount transform needs a positive discount rate");
  check_volatility(d);
  const auto pts = structural_points(d);
  // w'' = 2 (lambda w - mu w') / sigma^2 as a first-order system (w, w').
  Rhs f = [&d, lambda](double x, const State& y, Side side) -> State {
    const double s = coef(d.sigma, x, side);
    return {y[1], 2.0 * (lambda * y[0] - coef(d.mu, x, side) * y[1]) / (s * s)};
  };
  // Increasing solution flat at the left end, decreasing one flat at the right end.
  auto inc = march_converged(pts, f, {1.0, 0.0}, false, tol, {0, 1});
  auto dec = march_converged(pts, f, {1.0, 0.0}, true, tol, {0, 1});
  // Both runs refine the same way from the same start; align on the finer grid.
  while (inc.nodes.size() < dec.nodes.size()) {
    inc.nodes = refine(inc.nodes);
    inc.y = march(inc.nodes, f, {1.0, 0.0}, false);
  }
  while (dec.nodes.size() < inc.nodes.size()) {
    dec.nodes = refine(dec.nodes);
    dec.y = march(dec.nodes, f, {1.0, 0.0}, true);
  }
  const auto& x = inc.nodes;
  const std::size_t n = x.size();
  auto second = [&](double xi, double w, double wd, Side side) {
    const double s = coef(d.sigma, xi, side);
    return 2.0 * (lambda * w - coef(d.mu, xi, side) * wd) / (s * s);
  };
  std::vector<double> pv(n), pd(n), pl(n), pr(n), qv(n), qd(n), ql(n), qr(n);
  for (std::size_t i = 0; i < n; ++i) {
    pv[i] = inc.y[i][0];
    pd[i] = inc.y[i][1];
    qv[i] = dec.y[i][0];
    qd[i] = dec.y[i][1];
    pl[i] = second(x[i], pv[i], pd[i], Side::Left);
    pr[i] = second(x[i], pv[i], pd[i], Side::Right);
    ql[i] = second(x[i], qv[i], qd[i], Side::Left);
    qr[i] = second(x[i], qv[i], qd[i], Side::Right);
    if (qv[i] < 1e-12) throw ConditionError("decreasing solution fell below the 1e-12 floor");
  }
  // Ratio F = psi / phi and its derivatives, normalized affinely onto [0, 1].
  std::vector<double> fv(n), fd(n), fl(n), fr(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = pv[i], q = qv[i];
    const double wr = pd[i] * q - p * qd[i];
    fv[i] = p / q;
    fd[i] = wr / (q * q);
    fl[i] = (pl[i] * q - p * ql[i]) / (q * q) - 2.0 * wr * qd[i] / (q * q * q);
    fr[i] = (pr[i] * q - p * qr[i]) / (q * q) - 2.0 * wr * qd[i] / (q * q * q);
  }
  const double f0 = fv.front(), span = fv.back() - fv.front();
  for (std::size_t i = 0; i < n; ++i) {
    fv[i] = (fv[i] - f0) / span;
    fd[i] /= span;
    fl[i] /= span;
    fr[i] /= span;
  }
  fv.front() = 0.0;
  fv.back() = 1.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(fv[i + 1] > fv[i]) || !(pv[i + 1] > pv[i]) || !(qv[i + 1] < qv[i]))
      throw ConvergenceError("eigenfunction ratio is not strictly monotone at x = " + std::to_string(x[i]));
  }
  Transform t;
  t.kind = TransformKind::Discount;
  t.xl = d.xl;
  t.xr = d.xr;
  t.lambda = lambda;
  t.diffusion = d;
  t.map_ = HermiteTable(x, fv, fd, fl, fr);
  t.psi_ = HermiteTable(x, pv, pd, pl, pr);
  t.phi_ = HermiteTable(x, qv, qd, ql, qr);
  return t;
}

Transform transform_for(const GameSpec& spec, double tol) {
  Diffusion d = spec.diffusion ? *spec.diffusion
                               : Diffusion{PiecewisePoly::constant(0.0), PiecewisePoly::constant(1.0), 0.0, 1.0};
  if (spec.discount > 0) return discount_transform(d, spec.discount, tol);
  return scale_function(d, tol);
}

namespace {

struct Jet {
  double v, d1, d2;
};

// Value and u-derivatives of (f / phi) o inverse at u = forward(x); `side`
// selects one-sided data at breakpoints of f or of the coefficients.
Jet pushed(const PiecewisePoly& f, const Transform& t, double x, Side side) {
  const double fv = f.eval_piece(x, 0, side), f1 = f.eval_piece(x, 1, side), f2 = f.eval_piece(x, 2, side);
  double qv = fv, q1 = f1, q2 = f2;
  if (t.kind == TransformKind::Discount) {
    const double p = t.phi(x), p1 = t.phi(x, 1);
    // Second derivative of phi from the ODE so that jumps follow `side`.
    const Diffusion& d = t.diffusion;
    const double s = d.sigma.eval_piece(x, 0, side);
    const double p2 = 2.0 * (t.lambda * p - d.mu.eval_piece(x, 0, side) * p1) / (s * s);
    qv = fv / p;
    q1 = f1 / p - fv * p1 / (p * p);
    q2 = f2 / p - 2.0 * f1 * p1 / (p * p) - fv * p2 / (p * p) + 2.0 * fv * p1 * p1 / (p * p * p);
  }
  const Diffusion& d = t.diffusion;
  const double g1 = t.forward(x, 1);
  double g2;
  if (t.kind == TransformKind::Scale) {
    const double s = d.sigma.eval_piece(x, 0, side);
    g2 = -2.0 * d.mu.eval_piece(x, 0, side) / (s * s) * g1;
  } else {
    // F'' from (psi'' phi - psi phi'') / phi^2 - 2 W phi' / phi^3 with ODE second derivatives.
    const double s = d.sigma.eval_piece(x, 0, side), m = d.mu.eval_piece(x, 0, side);
    const double p = t.psi(x), pd = t.psi(x, 1), q = t.phi(x), qd = t.phi(x, 1);
    const double pdd = 2.0 * (t.lambda * p - m * pd) / (s * s);
    const double qdd = 2.0 * (t.lambda * q - m * qd) / (s * s);
    const double wr = pd * q - p * qd;
    const double raw1 = wr / (q * q);
    const double raw2 = (pdd * q - p * qdd) / (q * q) - 2.0 * wr * qd / (q * q * q);
    g2 = raw2 * (g1 / raw1);
  }
  const double xu = 1.0 / g1, xuu = -g2 / (g1 * g1 * g1);
  return {qv, q1 * xu, q2 * xu * xu + q1 * xuu};
}

double pushed_value(const PiecewisePoly& f, const Transform& t, double u) {
  const double x = t.inverse(u);
  return t.kind == TransformKind::Discount ? f.eval_piece(x) / t.phi(x) : f.eval_piece(x);
}

PiecewisePoly refit(const PiecewisePoly& f, const Transform& t, double fit_tol, double& worst) {
  std::set<double> xs{t.xl, t.xr};
  for (double b : f.breakpoints())
    if (b > t.xl && b < t.xr) xs.insert(b);
  for (double b : structural_points(t.diffusion)) xs.insert(b);
  std::vector<double> X(xs.begin(), xs.end());
  std::vector<double> U(X.size());
  for (std::size_t k = 0; k < X.size(); ++k) U[k] = t.forward(X[k]);
  U.front() = 0.0;
  U.back() = 1.0;

  std::vector<double> bps{0.0};
  std::vector<std::vector<double>> pieces;
  for (std::size_t k = 0; k + 1 < X.size(); ++k) {
    int m = std::max(4, static_cast<int>(std::ceil(256.0 * (U[k + 1] - U[k]))));
    for (;;) {
      std::vector<double> us(m + 1), xn(m + 1);
      for (int j = 0; j <= m; ++j) us[j] = U[k] + (U[k + 1] - U[k]) * j / m;
      us.front() = U[k];
      us.back() = U[k + 1];
      xn.front() = X[k];
      xn.back() = X[k + 1];
      for (int j = 1; j < m; ++j) xn[j] = t.inverse(us[j]);
      std::vector<std::vector<double>> seg;
      double err = 0.0;
      for (int j = 0; j < m; ++j) {
        const Jet a = pushed(f, t, xn[j], Side::Right);
        const Jet b = pushed(f, t, xn[j + 1], Side::Left);
        const double h = us[j + 1] - us[j];
        auto c = hermite5(h, a.v, a.d1, a.d2, b.v, b.d1, b.d2);
        for (double frac : {0.25, 0.5, 0.75}) {
          const double u = us[j] + frac * h;
          err = std::max(err, std::abs(poly::horner(c, frac * h) - pushed_value(f, t, u)));
        }
        seg.push_back(std::move(c));
      }
      if (err < fit_tol) {
        worst = std::max(worst, err);
        for (int j = 0; j < m; ++j) {
          bps.push_back(us[j + 1]);
          pieces.push_back(std::move(seg[j]));
        }
        break;
      }
      if (m >= (1 << 16))
        throw SpecError("reward refit error " + std::to_string(err) + " above tolerance; refine the reward pieces");
      m *= 2;
    }
  }
  for (auto& c : pieces) poly::trim(c);
  return PiecewisePoly(bps, pieces, std::min(f.smoothness(), Smoothness::C2));
}

}  // namespace

TransformedGame transform_game(const GameSpec& spec, double fit_tol) {
  TransformedGame out;
  out.transform = transform_for(spec);
  const Transform& t = out.transform;
  GameSpec g;
  const Geometry& geo = spec.geometry;
  g.geometry = geo;
  g.geometry.a1 = t.forward(geo.a1);
  g.geometry.a2 = t.forward(geo.a2);
  g.geometry.b = t.forward(geo.b);
  g.discount = 0.0;
  g.boundary = {0.0, 0.0};
  double worst = 0.0;
  const Rewards& r = spec.rewards;
  g.rewards = Rewards{refit(r.f1, t, fit_tol, worst), refit(r.g1, t, fit_tol, worst), refit(r.h1, t, fit_tol, worst),
                      refit(r.f2, t, fit_tol, worst), refit(r.g2, t, fit_tol, worst), refit(r.h2, t, fit_tol, worst)};
  out.spec = std::move(g);
  out.fit_error = worst;
  check_geometry(out.spec);
  return out;
}

ThresholdStrategy pull_back(const ThresholdStrategy& s, const Transform& t) {
  return {t.inverse(s.l), t.inverse(s.r)};
}

TwoIntervalStrategy pull_back(const TwoIntervalStrategy& s, const Transform& t) {
  return {t.inverse(s.l1), t.inverse(s.l2), t.inverse(s.r)};
}

double pull_back_payoff(const Transform& t, const PiecewisePoly& transformed_payoff, double x) {
  return t.phi(x) * transformed_payoff.eval_piece(t.forward(x));
}

}  // namespace dynkin
