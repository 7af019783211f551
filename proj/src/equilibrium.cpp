#include "dynkin/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dynkin/errors.hpp"
#include "dynkin/valuefn.hpp"

namespace dynkin {

namespace {

std::optional<double> fit_rate(const std::vector<double>& residuals) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < residuals.size(); ++i)
    if (residuals[i] > 1e-14) {
      xs.push_back(static_cast<double>(i));
      ys.push_back(std::log(residuals[i]));
    }
  if (xs.size() < 3) return std::nullopt;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return std::exp(sxy / sxx);
}

void note(std::vector<std::string>& w, const BestResponse& br, const char* who) {
  auto add = [&](const std::string& m) {
    if (std::find(w.begin(), w.end(), m) == w.end()) w.push_back(m);
  };
  if (!br.quasi_concave) add(std::string(who) + ": utility slice is not quasi-concave");
  if (br.tie) add(std::string(who) + ": several maximizers; the smallest was used");
}

void record(Certificate& c, int player, double location, double gain) {
  if (gain > c.tol && c.violating.size() < 32) c.violating.push_back({player, location, gain});
}

double sup_gap(const ValueFunctionGrid& v, const PiecewisePoly& closed) {
  double worst = 0.0;
  for (std::size_t i = 0; i < v.x.size(); ++i) worst = std::max(worst, std::abs(v.value[i] - closed.eval_piece(v.x[i])));
  return worst;
}

void finish(Certificate& c) {
  c.max_violation = 0.0;
  bool ok = true;
  for (const auto& cl : c.clauses) {
    c.max_violation = std::max(c.max_violation, -cl.margin);
    ok = ok && cl.holds;
  }
  c.is_equilibrium = ok && c.max_violation <= c.tol;
}

}  // namespace

EquilibriumResult gauss_seidel(const GameSpec& spec, double l_init, double tol, int max_iter,
                               const BestResponseOptions& opt) {
  if (!(l_init >= 0.0 && l_init <= spec.geometry.a())) throw DomainError("l_init must lie in [0, a]");
  EquilibriumResult res;
  double l = l_init;
  auto br2 = best_response2(spec, l, opt);
  note(res.warnings, br2, "player 2");
  double r = br2.argmax;
  res.trace.push_back({l, r});
  for (int n = 2; n <= max_iter; ++n) {
    const auto br1 = best_response1(spec, r, opt);
    note(res.warnings, br1, "player 1");
    const double l_new = br1.argmax;
    br2 = best_response2(spec, l_new, opt);
    note(res.warnings, br2, "player 2");
    const double r_new = br2.argmax;
    const double step = std::abs(l_new - l);
    res.residuals.push_back(step);
    res.trace.push_back({l_new, r_new});
    l = l_new;
    r = r_new;
    if (step < tol) {
      res.converged = true;
      break;
    }
    const std::size_t m = res.trace.size();
    if (m >= 3) {
      const auto& back2 = res.trace[m - 3];
      if (std::abs(back2.l - l) < tol && std::abs(back2.r - r) < tol) {
        res.cycling = true;
        res.warnings.push_back("period-2 cycling detected");
        break;
      }
    }
  }
  res.s = {l, r};
  res.iterations = static_cast<int>(res.trace.size());
  res.fitted_rate = fit_rate(res.residuals);
  return res;
}

Certificate certify_threshold(const GameSpec& spec, const ThresholdStrategy& s, int grid_size, double tol) {
  Certificate c;
  c.tol = tol;
  const auto& R = spec.rewards;
  const double l = s.l, r = s.r;
  if (!(l >= 0.0 && l < r && r <= 1.0)) throw DomainError("certificate needs 0 <= l < r <= 1");

  const double u1 = utility1(spec, l, r).value();
  double worst1 = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_size; ++i) {
    const double x = r * i / grid_size;
    const double gain = utility1(spec, x, r).value() - u1;
    worst1 = std::max(worst1, gain);
    record(c, 1, x, gain);
  }
  const double u2 = utility2(spec, l, r).value();
  double worst2 = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= grid_size; ++i) {
    const double y = l + (1.0 - l) * i / grid_size;
    const double gain = utility2(spec, l, y).value() - u2;
    worst2 = std::max(worst2, gain);
    record(c, 2, y, gain);
  }
  c.clauses.push_back({"player 1 has no profitable threshold on [0, r)", worst1 <= tol, -std::max(worst1, 0.0)});
  c.clauses.push_back({"player 2 has no profitable threshold on (l, 1]", worst2 <= tol, -std::max(worst2, 0.0)});

  const double a = spec.geometry.a(), b = spec.geometry.b;
  if (l > 0.0 && l < std::min(a, r))
    c.smooth_fit1 = R.f1.eval_piece(l, 1) - (R.g1.eval_piece(r) - R.f1.eval_piece(l)) / (r - l);
  if (r > std::max(l, b) && r < 1.0)
    c.smooth_fit2 = R.f2.eval_piece(r, 1) - (R.f2.eval_piece(r) - R.g2.eval_piece(l)) / (r - l);

  const auto v1 = solve_vs_region(spec, 1, Region::upper(r), grid_size);
  const double gap1 = sup_gap(v1, threshold_payoff(spec, 1, s));
  const auto v2 = solve_vs_region(spec, 2, Region::lower(l), grid_size);
  const double gap2 = sup_gap(v2, threshold_payoff(spec, 2, s));
  c.clauses.push_back({"player 1 value equals the strategy payoff", gap1 <= tol, -gap1});
  c.clauses.push_back({"player 2 value equals the strategy payoff", gap2 <= tol, -gap2});
  finish(c);
  return c;
}

ThreePlayerResult solve_three_player(const GameSpec& spec, std::optional<TwoIntervalStrategy> init, double tol,
                                     int max_iter, const BestResponseOptions& opt) {
  const auto& g = spec.geometry;
  ThreePlayerResult res;
  TwoIntervalStrategy s = init.value_or(TwoIntervalStrategy{g.a1, g.a2, 1.0});
  if (!(s.l1 >= g.a1 && s.l1 <= s.l2 && s.l2 <= g.a2)) throw DomainError("initial point must satisfy a1 <= l1 <= l2 <= a2");
  res.trace.push_back(s);
  for (int it = 1; it <= max_iter; ++it) {
    const auto b3 = best_response_hat3(spec, s.l2, opt);
    note(res.warnings, b3, "follower");
    const double z = b3.argmax;
    const auto b1 = best_response_hat1(spec, s.l2, z, opt);
    note(res.warnings, b1, "left end");
    const double x = b1.argmax;
    const auto b2 = best_response_hat2(spec, x, z, opt);
    note(res.warnings, b2, "right end");
    const double y = b2.argmax;
    const double step = std::max({std::abs(x - s.l1), std::abs(y - s.l2), std::abs(z - s.r)});
    s = {x, y, z};
    res.trace.push_back(s);
    res.iterations = it;
    if (step < tol) {
      res.converged = true;
      break;
    }
  }
  res.s = s;
  return res;
}

Certificate certify_two_interval(const GameSpec& spec, const TwoIntervalStrategy& s, int grid_size, double tol) {
  Certificate c;
  c.tol = tol;
  const auto& g = spec.geometry;
  const double order = std::min({s.l1 - g.a1, s.l2 - s.l1, g.a2 - s.l2});
  c.clauses.push_back({"i) a1 <= l1 <= l2 <= a2", order >= -tol, std::min(order, 0.0)});

  const double u1 = utility_hat1(spec, s.l1, s.l2, s.r).value();
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 1; i < grid_size; ++i) {
    const double x = s.r * i / grid_size;
    const double gain = utility_hat1(spec, x, s.l2, s.r).value() - u1;
    worst = std::max(worst, gain);
    record(c, 1, x, gain);
  }
  c.clauses.push_back({"ii) no profitable left end on (0, r)", worst <= tol, -std::max(worst, 0.0)});

  const double u2 = utility_hat2(spec, s.l1, s.l2, s.r).value();
  worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_size; ++i) {
    const double y = s.r * i / grid_size;
    const double gain = utility_hat2(spec, s.l1, y, s.r).value() - u2;
    worst = std::max(worst, gain);
    record(c, 1, y, gain);
  }
  c.clauses.push_back({"iii) no profitable right end on [0, r)", worst <= tol, -std::max(worst, 0.0)});

  const double u3 = utility_hat3(spec, s.l1, s.l2, s.r).value();
  worst = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= grid_size; ++i) {
    const double z = s.l2 + (1.0 - s.l2) * i / grid_size;
    const double gain = utility_hat3(spec, s.l1, s.l2, z).value() - u3;
    worst = std::max(worst, gain);
    record(c, 2, z, gain);
  }
  c.clauses.push_back({"follower has no profitable threshold on (l2, 1]", worst <= tol, -std::max(worst, 0.0)});
  c.clauses.push_back({"middle utility is non-negative", u2 >= 0.0, std::min(u2, 0.0)});

  const auto v1 = solve_vs_region(spec, 1, Region::upper(s.r), grid_size);
  const double gap1 = sup_gap(v1, two_interval_payoff(spec, 1, s));
  const auto v2 = solve_vs_region(spec, 2, Region::inner(s.l1, s.l2), grid_size);
  const double gap2 = sup_gap(v2, two_interval_payoff(spec, 2, s));
  c.clauses.push_back({"player 1 value equals the strategy payoff", gap1 <= tol, -gap1});
  c.clauses.push_back({"player 2 value equals the strategy payoff", gap2 <= tol, -gap2});
  finish(c);
  return c;
}

DpResult dp_policy_iteration(const GameSpec& spec, const Region& first, double tol, int max_iter, int grid_size) {
  DpResult res;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto sup_of = [&](const Region& A) { return A.empty() ? nan : A.intervals().back().second; };
  auto inf_of = [&](const Region& A) { return A.empty() ? nan : A.intervals().front().first; };
  auto hull_region = [&](const ValueFunctionGrid& v) {
    for (const auto& w : v.warnings)
      if (std::find(res.warnings.begin(), res.warnings.end(), w) == res.warnings.end()) res.warnings.push_back(w);
    if (v.contact.empty()) return Region::from_intervals({});
    const auto h = v.contact_hull();
    return Region::from_intervals({{h.first, h.second}});
  };
  Region A = first;
  res.sets.push_back(A);
  res.thresholds.push_back(sup_of(A));
  double prev_r = nan;
  for (int n = 1; n <= max_iter; ++n) {
    const Region A2 = hull_region(solve_vs_region(spec, 2, A, grid_size));
    res.sets.push_back(A2);
    res.thresholds.push_back(inf_of(A2));
    const Region A3 = hull_region(solve_vs_region(spec, 1, A2, grid_size));
    res.sets.push_back(A3);
    res.thresholds.push_back(sup_of(A3));
    res.iterations = n;
    const double dl = std::abs(sup_of(A3) - sup_of(A));
    const double dr = std::abs(inf_of(A2) - prev_r);
    A = A3;
    prev_r = inf_of(A2);
    if (dl < tol && dr < tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace dynkin
