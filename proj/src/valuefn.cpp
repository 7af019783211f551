#include "dynkin/valuefn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dynkin/errors.hpp"

namespace dynkin {

std::vector<std::size_t> upper_hull(const std::vector<double>& x, const std::vector<double>& v) {
  std::vector<std::size_t> h;
  h.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (h.size() >= 2) {
      const std::size_t o = h[h.size() - 2], a = h.back();
      const double cross = (x[a] - x[o]) * (v[i] - v[o]) - (v[a] - v[o]) * (x[i] - x[o]);
      if (cross >= 0.0)
        h.pop_back();
      else
        break;
    }
    h.push_back(i);
  }
  return h;
}

std::vector<double> concave_majorant(const std::vector<double>& x, const std::vector<double>& v) {
  if (x.size() != v.size() || x.empty()) throw DomainError("majorant needs matching, non-empty samples");
  std::vector<double> w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) w[i] = std::max(v[i], 0.0);
  const auto h = upper_hull(x, w);
  std::vector<double> out(x.size());
  for (std::size_t k = 0; k + 1 < h.size(); ++k) {
    const std::size_t i = h[k], j = h[k + 1];
    for (std::size_t m = i; m <= j; ++m)
      out[m] = m == i ? w[i] : m == j ? w[j] : w[i] + (w[j] - w[i]) * (x[m] - x[i]) / (x[j] - x[i]);
  }
  if (h.size() == 1) out[0] = w[0];
  return out;
}

namespace {

double band(double obstacle) { return 1e-9 * (1.0 + std::abs(obstacle)); }

struct Span {
  double x0, x1, v0, v1;
  bool line;  // straight hull segment; otherwise max(obstacle, chord)
};

struct Component {
  double u, v;
  std::vector<Span> spans;
  std::vector<std::pair<double, double>> contact;
};

struct Knot {
  double x, val;
  std::size_t idx;
  bool contact, endpoint;
};

// Tangency point of the supporting line from the anchor (xa, va) to the
// obstacle inside [p, q].
double tangent_point(const PiecewisePoly& th, double xa, double va, double p, double q) {
  auto h = [&](double t) { return th.eval_piece(t) + th.eval_piece(t, 1) * (xa - t) - va; };
  double hp = h(p), hq = h(q);
  if ((hp > 0 && hq < 0) || (hp < 0 && hq > 0)) {
    for (int it = 0; it < 200 && q - p > 1e-15 * (1.0 + std::abs(p)); ++it) {
      const double m = 0.5 * (p + q);
      const double hm = h(m);
      if (hm == 0.0) return m;
      if ((hm > 0) == (hp > 0)) {
        p = m;
        hp = hm;
      } else {
        q = m;
      }
    }
    return 0.5 * (p + q);
  }
  // No sign change (kink or flat obstacle): maximize the secant slope instead.
  auto slope = [&](double t) { return (th.eval_piece(t) - va) / std::abs(xa - t); };
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = p, b = q, c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = slope(c), fd = slope(d);
  while (b - a > 1e-14) {
    if (fc >= fd) {
      b = d; d = c; fd = fc; c = b - phi * (b - a); fc = slope(c);
    } else {
      a = c; c = d; fc = fd; d = a + phi * (b - a); fd = slope(d);
    }
  }
  double best = 0.5 * (a + b), bv = slope(best);
  for (double e : {p, q})
    if (slope(e) > bv) {
      best = e;
      bv = slope(e);
    }
  return best;
}

Component solve_component(const PiecewisePoly& th, double u, double v, int n) {
  Component comp{u, v, {}, {}};
  std::vector<double> xs(n), t(n), w(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = i == n - 1 ? v : u + (v - u) * i / (n - 1);
    t[i] = th.eval_piece(xs[i]);
    w[i] = (i == 0 || i == n - 1) ? 0.0 : std::max(t[i], 0.0);
  }
  const auto hull = upper_hull(xs, w);
  std::vector<Knot> knots;
  for (std::size_t k = 0; k < hull.size(); ++k) {
    const std::size_t i = hull[k];
    knots.push_back({xs[i], w[i], i, std::abs(w[i] - t[i]) <= band(t[i]), i == 0 || i == std::size_t(n - 1)});
  }
  const std::size_t K = knots.size();
  std::vector<char> long_seg(K > 0 ? K - 1 : 0);
  for (std::size_t k = 0; k + 1 < K; ++k) long_seg[k] = knots[k + 1].idx > knots[k].idx + 1;

  for (int pass = 0; pass < 3; ++pass) {
    for (std::size_t k = 0; k < K; ++k) {
      Knot& kn = knots[k];
      if (kn.endpoint || !kn.contact) continue;
      const bool L = k > 0 && long_seg[k - 1];
      const bool R = k + 1 < K && long_seg[k];
      if (!L && !R) continue;
      const std::size_t i = kn.idx;
      double p = xs[i >= 2 ? i - 2 : 0], q = xs[std::min<std::size_t>(i + 2, n - 1)];
      const double eps = 1e-15 * (1.0 + std::abs(kn.x));
      if (k > 0) p = std::max(p, knots[k - 1].x + eps);
      if (k + 1 < K) q = std::min(q, knots[k + 1].x - eps);
      if (!(p < q)) continue;
      double tx = kn.x;
      if (L && R) {
        // Isolated contact: a kink of the obstacle. Snap to its breakpoint.
        double best = std::numeric_limits<double>::infinity();
        for (double b : th.breakpoints())
          if (b >= p && b <= q && std::abs(b - kn.x) < best) {
            best = std::abs(b - kn.x);
            tx = b;
          }
      } else if (R) {
        tx = tangent_point(th, knots[k + 1].x, knots[k + 1].val, p, q);
      } else {
        tx = tangent_point(th, knots[k - 1].x, knots[k - 1].val, p, q);
      }
      const double tv = th.eval_piece(tx);
      if (tv >= 0.0) {
        kn.x = tx;
        kn.val = tv;
      }
    }
  }

  for (std::size_t k = 0; k + 1 < K; ++k)
    comp.spans.push_back({knots[k].x, knots[k + 1].x, knots[k].val, knots[k + 1].val, bool(long_seg[k])});

  for (std::size_t k = 0; k < K;) {
    if (!knots[k].contact) {
      ++k;
      continue;
    }
    std::size_t e = k;
    while (e + 1 < K && !long_seg[e] && knots[e + 1].contact) ++e;
    comp.contact.emplace_back(knots[k].x, knots[e].x);
    k = e + 1;
  }
  return comp;
}

double eval_component(const Component& c, const PiecewisePoly& th, double x) {
  auto it = std::partition_point(c.spans.begin(), c.spans.end(), [x](const Span& s) { return s.x1 < x; });
  for (; it != c.spans.end(); ++it) {
    const Span& s = *it;
    if (x < s.x0 || x > s.x1) continue;
    const double chord = s.x1 > s.x0 ? s.v0 + (s.v1 - s.v0) * (x - s.x0) / (s.x1 - s.x0) : s.v0;
    if (s.line) return chord;
    return std::max(chord, th.eval_piece(x));
  }
  return 0.0;
}

std::vector<std::pair<double, double>> continuation_components(const Region& region, double lo, double hi) {
  std::vector<std::pair<double, double>> out;
  double prev = lo;
  for (const auto& [u, v] : region.intervals()) {
    if (u > prev) out.emplace_back(prev, u);
    prev = std::max(prev, v);
  }
  if (prev < hi) out.emplace_back(prev, hi);
  return out;
}

}  // namespace

struct ValueFunctionGrid::Impl {
  PiecewisePoly f, reduced, theta;
  Region region;
  std::vector<Component> comps;
};

double ValueFunctionGrid::excess_at(double x) const {
  if (impl->region.contains(x)) return 0.0;
  for (const auto& c : impl->comps)
    if (x >= c.u && x <= c.v) return eval_component(c, impl->theta, x);
  return 0.0;
}

double ValueFunctionGrid::value_at(double x) const { return impl->reduced.eval_piece(x) + excess_at(x); }

std::pair<double, double> ValueFunctionGrid::contact_hull() const {
  if (contact.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan};
  }
  return {contact.front().first, contact.back().second};
}

ValueFunctionGrid solve_vs_region(const GameSpec& spec, int player, const Region& region, int grid_size,
                                  double movement_tol) {
  if (player != 1 && player != 2) throw DomainError("player must be 1 or 2");
  if (grid_size < 16) throw DomainError("grid_size must be at least 16");
  const auto& R = spec.rewards;
  const PiecewisePoly& f = player == 1 ? R.f1 : R.f2;
  const PiecewisePoly& g = player == 1 ? R.g1 : R.g2;
  const double lo = spec.lo(), hi = spec.hi();

  auto impl = std::make_shared<ValueFunctionGrid::Impl>();
  impl->f = f;
  impl->reduced = reduce(g, region).as_poly();
  impl->theta = f - impl->reduced;
  impl->region = region;
  const auto comps = continuation_components(region, lo, hi);

  auto endpoints = [](const std::vector<Component>& cs) {
    std::vector<double> e;
    for (const auto& c : cs)
      for (const auto& [p, q] : c.contact) {
        e.push_back(p);
        e.push_back(q);
      }
    return e;
  };

  std::vector<Component> solved, previous;
  int n_total = grid_size;
  constexpr int kMaxPoints = 1 << 21;
  while (true) {
    solved.clear();
    for (const auto& [u, v] : comps) {
      const int n = std::max(8, static_cast<int>(std::ceil(n_total * (v - u) / (hi - lo))) + 1);
      solved.push_back(solve_component(impl->theta, u, v, n));
    }
    if (!previous.empty()) {
      const auto a = endpoints(previous), b = endpoints(solved);
      double moved = a.size() == b.size() ? 0.0 : std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) moved = std::max(moved, std::abs(a[i] - b[i]));
      if (moved < movement_tol || n_total >= kMaxPoints) break;
    }
    previous = solved;
    n_total *= 2;
  }

  // Isolated contact points on the killing boundary or inside the region carry no decision.
  for (auto& c : solved) {
    std::vector<std::pair<double, double>> keep;
    for (const auto& iv : c.contact) {
      const bool point = iv.first == iv.second;
      if (point && (iv.first == lo || iv.first == hi || region.contains(iv.first))) continue;
      keep.push_back(iv);
    }
    c.contact = keep;
  }
  impl->comps = solved;

  ValueFunctionGrid out;
  out.player = player;
  out.region = region;
  out.resolution = n_total;
  out.impl = impl;
  for (const auto& c : solved) out.contact.insert(out.contact.end(), c.contact.begin(), c.contact.end());
  if (out.contact.size() > 1) out.warnings.push_back("contact set is not an interval; using its hull");

  out.x.resize(grid_size);
  out.obstacle.resize(grid_size);
  out.reduced.resize(grid_size);
  out.value.resize(grid_size);
  out.in_contact.resize(grid_size);
  for (int i = 0; i < grid_size; ++i) {
    const double x = i == grid_size - 1 ? hi : lo + (hi - lo) * i / (grid_size - 1);
    out.x[i] = x;
    out.obstacle[i] = f.eval_piece(x);
    out.reduced[i] = impl->reduced.eval_piece(x);
    out.value[i] = out.reduced[i] + out.excess_at(x);
    bool c = false;
    if (!region.contains(x))
      for (const auto& [p, q] : out.contact)
        if (x >= p - 1e-12 && x <= q + 1e-12) c = true;
    out.in_contact[i] = c;
  }
  return out;
}

PiecewisePoly u_r_closed_form(const GameSpec& spec, const ThresholdStrategy& s) {
  const double lo = spec.lo(), hi = spec.hi();
  if (!(s.l >= lo && s.l < s.r && s.r <= hi)) throw DomainError("threshold strategy needs l < r");
  const PiecewisePoly theta = spec.rewards.f1 - reduce(spec.rewards.g1, Region::upper(s.r, hi)).as_poly();
  std::vector<PiecewisePoly> parts;
  if (s.l > lo) parts.push_back(theta.restricted(lo, s.l));
  const double tl = theta.eval_piece(s.l);
  parts.emplace_back(std::vector<double>{s.l, s.r}, std::vector<std::vector<double>>{{tl, -tl / (s.r - s.l)}});
  if (s.r < hi) parts.push_back(PiecewisePoly::constant(0.0, s.r, hi));
  return PiecewisePoly::concat(parts);
}

PiecewisePoly u_r_two_point(const GameSpec& spec, const TwoIntervalStrategy& s) {
  const double lo = spec.lo(), hi = spec.hi();
  if (!(s.l1 > lo && s.l1 <= s.l2 && s.l2 < s.r && s.r <= hi))
    throw DomainError("two-interval strategy needs lo < l1 <= l2 < r");
  const PiecewisePoly theta = spec.rewards.f1 - reduce(spec.rewards.g1, Region::upper(s.r, hi)).as_poly();
  const double t1 = theta.eval_piece(s.l1), t2 = theta.eval_piece(s.l2);
  std::vector<PiecewisePoly> parts;
  parts.emplace_back(std::vector<double>{lo, s.l1}, std::vector<std::vector<double>>{{0.0, t1 / (s.l1 - lo)}});
  if (s.l2 > s.l1) parts.push_back(theta.restricted(s.l1, s.l2));
  parts.emplace_back(std::vector<double>{s.l2, s.r}, std::vector<std::vector<double>>{{t2, -t2 / (s.r - s.l2)}});
  if (s.r < hi) parts.push_back(PiecewisePoly::constant(0.0, s.r, hi));
  return PiecewisePoly::concat(parts);
}

}  // namespace dynkin
