#include "dynkin/gnep.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dynkin/errors.hpp"

namespace dynkin {

double Utility::value() const {
  if (!finite_) throw DomainError("utility is minus infinity");
  return v_;
}

namespace {

void check_unit(const GameSpec& spec, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("argument outside [0, 1]");
  if (spec.diffusion || spec.discount != 0.0)
    throw ConditionError("utilities are defined for the undiscounted Brownian game; transform first");
}

double f(const PiecewisePoly& p, double x, int k = 0) { return p.eval_piece(x, k); }

// Ratio U = F / (y - x) and its partials from those of the numerator.
struct Numerator {
  double F, Fx, Fy, Fxx, Fyy, Fxy;
};

Partials ratio_partials(const Numerator& n, double d) {
  Partials p;
  const double d2 = d * d, d3 = d2 * d;
  p.dx = n.Fx / d + n.F / d2;
  p.dy = n.Fy / d - n.F / d2;
  p.dxx = n.Fxx / d + 2.0 * n.Fx / d2 + 2.0 * n.F / d3;
  p.dyy = n.Fyy / d - 2.0 * n.Fy / d2 + 2.0 * n.F / d3;
  p.dxy = n.Fxy / d + (n.Fy - n.Fx) / d2 - 2.0 * n.F / d3;
  return p;
}

}  // namespace

Utility utility1(const GameSpec& spec, double x, double y) {
  check_unit(spec, x);
  check_unit(spec, y);
  if (!(x < y)) return Utility::minus_infinity();
  const auto& R = spec.rewards;
  return Utility::finite((f(R.f1, x) - f(R.g1, y) * x / y) / (y - x));
}

Utility utility2(const GameSpec& spec, double x, double y) {
  check_unit(spec, x);
  check_unit(spec, y);
  if (!(x < y)) return Utility::minus_infinity();
  const auto& R = spec.rewards;
  return Utility::finite((f(R.f2, y) - f(R.g2, x) * (1.0 - y) / (1.0 - x)) / (y - x));
}

Utility utility_hat1(const GameSpec& spec, double x, double y, double z) {
  check_unit(spec, x);
  check_unit(spec, y);
  check_unit(spec, z);
  const auto& R = spec.rewards;
  if (!(z > 0.0)) throw DomainError("opponent threshold must be positive");
  if (x == 0.0) return Utility::finite(f(R.f1, 0.0, 1) - f(R.g1, z) / z);
  const double reduced = x < z ? f(R.g1, z) * x / z : f(R.g1, x);
  return Utility::finite((f(R.f1, x) - reduced) / x);
}

Utility utility_hat2(const GameSpec& spec, double x, double y, double z) {
  check_unit(spec, x);
  return utility1(spec, y, z);
}

Utility utility_hat3(const GameSpec& spec, double x, double y, double z) {
  check_unit(spec, x);
  return utility2(spec, y, z);
}

Partials partials1(const GameSpec& spec, double x, double y) {
  if (!(x < y)) throw DomainError("partials need x < y");
  const auto& R = spec.rewards;
  const double g = f(R.g1, y), g1 = f(R.g1, y, 1), g2 = f(R.g1, y, 2);
  // Numerator f1(x) - G(y) x with G = g1 / y.
  const double G = g / y;
  const double Gp = g1 / y - g / (y * y);
  const double Gpp = g2 / y - 2.0 * g1 / (y * y) + 2.0 * g / (y * y * y);
  Numerator n{f(R.f1, x) - G * x, f(R.f1, x, 1) - G, -x * Gp, f(R.f1, x, 2), -x * Gpp, -Gp};
  return ratio_partials(n, y - x);
}

Partials partials2(const GameSpec& spec, double x, double y) {
  if (!(x < y)) throw DomainError("partials need x < y");
  const auto& R = spec.rewards;
  const double w = 1.0 - x;
  const double g = f(R.g2, x), g1 = f(R.g2, x, 1), g2 = f(R.g2, x, 2);
  // Numerator f2(y) - K(x) (1 - y) with K = g2 / (1 - x).
  const double K = g / w;
  const double Kp = g1 / w + g / (w * w);
  const double Kpp = g2 / w + 2.0 * g1 / (w * w) + 2.0 * g / (w * w * w);
  Numerator n{f(R.f2, y) - K * (1.0 - y), -Kp * (1.0 - y), f(R.f2, y, 1) + K,
              -Kpp * (1.0 - y), f(R.f2, y, 2), Kp};
  return ratio_partials(n, y - x);
}

BestResponse maximize(const std::function<Utility(double)>& u, double lo, double hi,
                      const BestResponseOptions& opt, const std::function<double(double)>& d1,
                      const std::function<double(double)>& d2) {
  BestResponse br;
  if (!(hi >= lo)) throw DomainError("empty feasible set");
  if (hi == lo) {
    const Utility v = u(lo);
    if (!v.is_finite()) throw DomainError("no feasible point");
    br.argmax = lo;
    br.value = v.value();
    br.on_boundary = true;
    return br;
  }
  const int n = std::max(opt.grid, 3);
  std::vector<double> xs(n), vs(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
    vs[i] = u(xs[i]).as_double();
  }
  int imax = 0;
  for (int i = 1; i < n; ++i)
    if (vs[i] > vs[imax]) imax = i;
  const double vmax = vs[imax];
  if (!std::isfinite(vmax)) throw DomainError("no feasible point");
  const double tol_v = 1e-12 * (1.0 + std::abs(vmax));

  // Unimodality via prefix and suffix maxima.
  {
    std::vector<double> suffix(n);
    suffix[n - 1] = vs[n - 1];
    for (int i = n - 2; i >= 0; --i) suffix[i] = std::max(vs[i], suffix[i + 1]);
    double prefix = vs[0];
    for (int i = 0; i < n; ++i) {
      prefix = std::max(prefix, vs[i]);
      if (vs[i] < std::min(prefix, suffix[i]) - tol_v) br.quasi_concave = false;
    }
  }
  // Starts of the runs of near-maximal grid values, left to right.
  std::vector<int> peaks;
  for (int j = 0; j < n && peaks.size() < 8; ++j)
    if (vs[j] >= vmax - tol_v && (j == 0 || vs[j - 1] < vmax - tol_v)) peaks.push_back(j);
  for (int j = 0; j < n && !br.tie; ++j)
    if (std::abs(j - imax) > 1 && vs[j] >= vmax - tol_v) {
      const bool left_ok = j == 0 || vs[j] >= vs[j - 1];
      const bool right_ok = j == n - 1 || vs[j] >= vs[j + 1];
      br.tie = left_ok && right_ok;
    }
  auto val = [&](double x) { return u(x).as_double(); };
  auto refine = [&](int centre, bool& newton) {
    double a = xs[std::max(centre - 1, 0)], b = xs[std::min(centre + 1, n - 1)];
    const double A = a, B = b;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = val(c), fd = val(d);
    while (b - a > opt.tol) {
      if (fc >= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - phi * (b - a);
        fc = val(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + phi * (b - a);
        fd = val(d);
      }
    }
    double best = 0.5 * (a + b);
    double best_v = val(best);
    newton = false;
    if (d1 && d2) {
      double x = best;
      bool moved = false;
      for (int k = 0; k < 30; ++k) {
        const double h = d2(x);
        if (!(std::abs(h) > opt.newton_curvature)) break;
        const double step = d1(x) / h;
        const double xn = x - step;
        if (!(xn >= A && xn <= B)) break;
        if (!std::isfinite(val(xn))) break;
        x = xn;
        moved = true;
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(x))) break;
      }
      if (moved) {
        const double vx = val(x);
        if (vx >= best_v - 1e-14 * (1.0 + std::abs(best_v)) && std::abs(d1(x)) <= std::abs(d1(best))) {
          best = x;
          best_v = vx;
          newton = true;
        }
      }
    }
    // Exact ends of the bracket win when at least as good.
    for (double e : {A, B}) {
      const double ve = val(e);
      if (ve > best_v || (ve == best_v && e < best)) {
        best = e;
        best_v = ve;
      }
    }
    return std::pair{best, best_v};
  };

  double best = 0.0, best_v = -std::numeric_limits<double>::infinity();
  for (int j : peaks) {
    bool newton = false;
    const auto [x, v] = refine(j, newton);
    // Peaks are visited left to right, so a tie keeps the smaller point.
    if (v > best_v + tol_v || !std::isfinite(best_v)) {
      best = x;
      best_v = v;
      br.newton = newton;
    }
  }
  br.argmax = best;
  br.value = best_v;
  br.on_boundary = best == lo || best == hi;
  return br;
}

BestResponse best_response1(const GameSpec& spec, double y, const BestResponseOptions& opt) {
  const double hi = std::min(y, spec.geometry.a());
  return maximize([&](double x) { return utility1(spec, x, y); }, 0.0, hi, opt,
                  [&](double x) { return partials1(spec, x, y).dx; },
                  [&](double x) { return partials1(spec, x, y).dxx; });
}

BestResponse best_response2(const GameSpec& spec, double x, const BestResponseOptions& opt) {
  const double lo = std::max(x, spec.geometry.b);
  return maximize([&](double y) { return utility2(spec, x, y); }, lo, 1.0, opt,
                  [&](double y) { return partials2(spec, x, y).dy; },
                  [&](double y) { return partials2(spec, x, y).dyy; });
}

BestResponse best_response_hat1(const GameSpec& spec, double y, double z, const BestResponseOptions& opt) {
  const auto& g = spec.geometry;
  const auto& f1 = spec.rewards.f1;
  return maximize([&](double x) { return utility_hat1(spec, x, y, z); }, g.a1, std::min(y, g.a2), opt,
                  [&](double x) { return (f(f1, x, 1) * x - f(f1, x)) / (x * x); },
                  [&](double x) {
                    return f(f1, x, 2) / x - 2.0 * f(f1, x, 1) / (x * x) + 2.0 * f(f1, x) / (x * x * x);
                  });
}

BestResponse best_response_hat2(const GameSpec& spec, double x, double z, const BestResponseOptions& opt) {
  const auto& g = spec.geometry;
  return maximize([&](double y) { return utility1(spec, y, z); }, std::max(x, g.a1), g.a2, opt,
                  [&](double y) { return partials1(spec, y, z).dx; },
                  [&](double y) { return partials1(spec, y, z).dxx; });
}

BestResponse best_response_hat3(const GameSpec& spec, double y, const BestResponseOptions& opt) {
  return maximize([&](double z) { return utility2(spec, y, z); }, spec.geometry.b, 1.0, opt,
                  [&](double z) { return partials2(spec, y, z).dy; },
                  [&](double z) { return partials2(spec, y, z).dyy; });
}

}  // namespace dynkin
