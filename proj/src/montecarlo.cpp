#include "dynkin/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <thread>

#include "dynkin/errors.hpp"

namespace dynkin {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t path, std::uint64_t attempt)
    : key_(splitmix(splitmix(seed) ^ splitmix(path * 0x2545f4914f6cdd1dULL + attempt))) {}

double CounterRng::uniform() {
  const std::uint64_t bits = splitmix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_);
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform(), u2 = uniform();
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * M_PI * u2;
  spare_ = rad * std::sin(ang);
  has_spare_ = true;
  return rad * std::cos(ang);
}

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

namespace {

int thread_count(const McOptions& opt) {
  int n = opt.threads > 0 ? opt.threads : static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DYNKIN_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return std::max(1, n);
}

// Runs body(path) for every path; fixed blocks keep the work split irrelevant
// to the outcome.
void for_each_path(long n_paths, const McOptions& opt, const std::function<void(long)>& body) {
  constexpr long kBlock = 1024;
  const long blocks = (n_paths + kBlock - 1) / kBlock;
  std::atomic<long> next{0};
  auto worker = [&] {
    for (long b; (b = next.fetch_add(1)) < blocks;) {
      const long end = std::min(n_paths, (b + 1) * kBlock);
      for (long p = b * kBlock; p < end; ++p) body(p);
    }
  };
  const int nt = std::min<long>(thread_count(opt), std::max<long>(1, blocks));
  std::vector<std::thread> pool;
  for (int i = 1; i < nt; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

struct Dynamics {
  const Diffusion* d = nullptr;  // null: standard Brownian motion
  double lambda = 0.0;
  double mu(double x) const { return d ? d->mu.eval_piece(std::clamp(x, d->xl, d->xr)) : 0.0; }
  double sigma(double x) const { return d ? d->sigma.eval_piece(std::clamp(x, d->xl, d->xr)) : 1.0; }
  double discount(double t) const { return lambda > 0 ? std::exp(-lambda * t) : 1.0; }
};

Dynamics dynamics_of(const GameSpec& spec) {
  Dynamics dyn;
  if (spec.diffusion) dyn.d = &*spec.diffusion;
  dyn.lambda = spec.discount;
  return dyn;
}

void check_options(const McOptions& opt) {
  if (opt.n_paths < 2) throw SpecError("at least two paths are needed");
  if (!(opt.dt > 0) || opt.dt > 1e-3) throw SpecError("time step must lie in (0, 1e-3]");
}

struct Exit {
  int side = 0;  // -1 left barrier, +1 right barrier, 0 none within the horizon
  double t = 0.0;
};

// First exit from the open gap (L, R) started at x.
Exit exit_gap(const Dynamics& dyn, double x, double L, double R, const McOptions& opt, long path, long& resampled) {
  const double sdt = std::sqrt(opt.dt);
  for (std::uint64_t attempt = 0; attempt < 16; ++attempt) {
    CounterRng rng(opt.seed, static_cast<std::uint64_t>(path), attempt);
    double X = x, t = 0.0;
    while (t < opt.horizon) {
      const double s = dyn.sigma(X);
      const double next = X + dyn.mu(X) * opt.dt + s * sdt * rng.normal();
      t += opt.dt;
      if (next <= L) return {-1, t};
      if (next >= R) return {+1, t};
      if (opt.crossing_correction) {
        const double v = s * s * opt.dt;
        const double pl = std::exp(-2.0 * (X - L) * (next - L) / v);
        const double pr = std::exp(-2.0 * (R - X) * (R - next) / v);
        const double u = rng.uniform();
        if (u < pl) return {-1, t};
        if (u < pl + pr) return {+1, t};
      }
      X = next;
    }
    ++resampled;
  }
  return {0, 0.0};
}

struct Sets {
  Region p1, p2;
  double lo, hi;
};

std::pair<double, double> gap_around(const Sets& s, double x) {
  double L = s.lo, R = s.hi;
  for (const Region* r : {&s.p1, &s.p2})
    for (auto [u, v] : r->intervals()) {
      if (v < x) L = std::max(L, v);
      if (u > x) R = std::min(R, u);
    }
  return {L, R};
}

// Payoff of `player` when the process is stopped at c.
double stop_payoff(const GameSpec& spec, const Sets& s, int player, double c, bool& tie) {
  const bool in1 = s.p1.contains(c), in2 = s.p2.contains(c);
  tie = in1 && in2;
  const Rewards& r = spec.rewards;
  if (tie) return player == 1 ? r.h1.eval_piece(c) : r.h2.eval_piece(c);
  if (in1) return player == 1 ? r.f1.eval_piece(c) : r.g2.eval_piece(c);
  if (in2) return player == 1 ? r.g1.eval_piece(c) : r.f2.eval_piece(c);
  return 0.0;  // killed at an end of the interval
}

McEstimate finish(std::vector<double>& v, const McOptions& opt, long resampled, long ties) {
  McEstimate e;
  const std::size_t n = v.size();
  e.mean = pairwise_sum(v.data(), n) / static_cast<double>(n);
  for (auto& x : v) x = (x - e.mean) * (x - e.mean);
  const double var = pairwise_sum(v.data(), n) / static_cast<double>(n - 1);
  e.std_error = std::sqrt(var / static_cast<double>(n));
  e.n_paths = static_cast<long>(n);
  e.dt = opt.dt;
  e.seed = opt.seed;
  e.resampled = resampled;
  e.ties = ties;
  return e;
}

McEstimate estimate_sets(const GameSpec& spec, const Sets& sets, const std::function<double(double, bool&)>& pay,
                         double x, const McOptions& opt) {
  check_options(opt);
  if (!(x >= sets.lo && x <= sets.hi)) throw DomainError("start point outside the state interval");
  const Dynamics dyn = dynamics_of(spec);
  const bool stopped = sets.p1.contains(x) || sets.p2.contains(x) || x <= sets.lo || x >= sets.hi;
  std::vector<double> v(static_cast<std::size_t>(opt.n_paths));
  std::atomic<long> resampled{0}, ties{0};
  if (stopped) {
    bool tie = false;
    const double p = pay(x, tie);
    std::fill(v.begin(), v.end(), p);
    McEstimate e = finish(v, opt, 0, tie ? opt.n_paths : 0);
    e.mean = p;
    e.std_error = 0.0;
    return e;
  }
  const auto [L, R] = gap_around(sets, x);
  for_each_path(opt.n_paths, opt, [&](long p) {
    long rs = 0;
    const Exit e = exit_gap(dyn, x, L, R, opt, p, rs);
    if (rs) resampled += rs;
    double val = 0.0;
    if (e.side != 0) {
      bool tie = false;
      val = pay(e.side < 0 ? L : R, tie) * dyn.discount(e.t);
      if (tie) ++ties;
    }
    v[static_cast<std::size_t>(p)] = val;
  });
  return finish(v, opt, resampled.load(), ties.load());
}

Sets threshold_sets(const GameSpec& spec, const ThresholdStrategy& s) {
  if (!(s.l < s.r)) throw DomainError("thresholds must satisfy l < r");
  return {Region::lower(s.l, spec.lo()), Region::upper(s.r, spec.hi()), spec.lo(), spec.hi()};
}

}  // namespace

McEstimate estimate_payoff(const GameSpec& spec, int player, const ThresholdStrategy& s, double x,
                           const McOptions& opt) {
  const Sets sets = threshold_sets(spec, s);
  return estimate_sets(
      spec, sets, [&](double c, bool& tie) { return stop_payoff(spec, sets, player, c, tie); }, x, opt);
}

McEstimate estimate_payoff(const GameSpec& spec, int player, const TwoIntervalStrategy& s, double x,
                           const McOptions& opt) {
  if (!(s.l1 <= s.l2 && s.l2 < s.r)) throw DomainError("strategy must satisfy l1 <= l2 < r");
  const Sets sets{Region::from_intervals({{s.l1, s.l2}}), Region::upper(s.r, spec.hi()), spec.lo(), spec.hi()};
  return estimate_sets(
      spec, sets, [&](double c, bool& tie) { return stop_payoff(spec, sets, player, c, tie); }, x, opt);
}

McEstimate estimate_hit_probability(const GameSpec& spec, const ThresholdStrategy& s, double x,
                                    const McOptions& opt) {
  const Sets sets = threshold_sets(spec, s);
  GameSpec plain = spec;
  plain.discount = 0.0;
  return estimate_sets(
      plain, sets,
      [&](double c, bool& tie) {
        tie = false;
        return sets.p1.contains(c) ? 1.0 : 0.0;
      },
      x, opt);
}

std::vector<double> deviation_grid(const GameSpec& spec, int player, int points) {
  const double lo = player == 1 ? spec.lo() : spec.geometry.b;
  const double hi = player == 1 ? spec.geometry.a() : spec.hi();
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[i] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
  return g;
}

DeviationScan deviation_scan(const GameSpec& spec, const ThresholdStrategy& s, int player,
                             const std::vector<double>& deviations, double x, const McOptions& opt) {
  check_options(opt);
  if (player != 1 && player != 2) throw SpecError("player must be 1 or 2");
  if (!(s.l < x && x < s.r)) throw DomainError("scan start must lie strictly between the thresholds");
  const Dynamics dyn = dynamics_of(spec);
  const Rewards& rw = spec.rewards;

  // Work in z = sgn * x so that the deviating barrier always lies above the
  // start, the opponent's barrier below, and the far end of the interval above.
  const double sgn = player == 1 ? -1.0 : 1.0;
  const double z0 = sgn * x;
  const double fixed = sgn * (player == 1 ? s.r : s.l);
  const double far_end = sgn * (player == 1 ? spec.lo() : spec.hi());
  const double own = player == 1 ? s.l : s.r;

  // Levels in z that the running maximum must reach; index D is the equilibrium threshold itself.
  std::vector<double> all = deviations;
  all.push_back(own);
  const std::size_t D = all.size();
  std::vector<std::size_t> order;  // reachable levels sorted by z
  for (std::size_t k = 0; k < D; ++k)
    if (sgn * all[k] > z0) order.push_back(k);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return sgn * all[i] < sgn * all[j]; });

  auto own_reward = [&](double c) { return player == 1 ? rw.f1.eval_piece(c) : rw.f2.eval_piece(c); };
  auto follow_reward = [&](double c) { return player == 1 ? rw.g1.eval_piece(c) : rw.g2.eval_piece(c); };
  const double immediate = own_reward(x);

  std::vector<double> pay(static_cast<std::size_t>(opt.n_paths) * D);
  std::atomic<long> resampled{0};
  const double sdt = std::sqrt(opt.dt);
  for_each_path(opt.n_paths, opt, [&](long p) {
    std::vector<double> hit(D, kInf);
    double t_fixed = kInf;
    bool done = false;
    for (std::uint64_t attempt = 0; attempt < 16 && !done; ++attempt) {
      CounterRng rng(opt.seed, static_cast<std::uint64_t>(p), attempt);
      std::fill(hit.begin(), hit.end(), kInf);
      t_fixed = kInf;
      double z = z0, zmax = z0, t = 0.0;
      std::size_t k = 0;
      while (t < opt.horizon) {
        const double xs = sgn * z;
        const double sg = dyn.sigma(xs);
        const double v = sg * sg * opt.dt;
        const double next = z + sgn * dyn.mu(xs) * opt.dt + sg * sdt * rng.normal();
        t += opt.dt;
        double top = std::max(z, next);
        if (opt.crossing_correction) {
          // Exact maximum of the Brownian bridge between z and next.
          const double d = next - z;
          top = 0.5 * (z + next + std::sqrt(d * d - 2.0 * v * std::log(rng.uniform())));
        }
        zmax = std::max(zmax, top);
        while (k < order.size() && zmax >= sgn * all[order[k]]) hit[order[k++]] = t;
        if (zmax >= far_end) {
          done = true;
          break;
        }
        bool crossed = next <= fixed;
        if (!crossed && opt.crossing_correction)
          crossed = rng.uniform() < std::exp(-2.0 * (z - fixed) * (next - fixed) / v);
        if (crossed) {
          t_fixed = t;
          done = true;
          break;
        }
        z = next;
      }
      if (!done) ++resampled;
    }
    double* row = &pay[static_cast<std::size_t>(p) * D];
    for (std::size_t j = 0; j < D; ++j) {
      const double dev = all[j];
      if (sgn * dev <= z0) {
        row[j] = immediate;
      } else if (!done) {
        row[j] = 0.0;
      } else if (hit[j] <= t_fixed) {
        row[j] = own_reward(dev) * dyn.discount(hit[j]);
      } else {
        row[j] = follow_reward(sgn * fixed) * dyn.discount(t_fixed);
      }
    }
  });

  DeviationScan out;
  out.player = player;
  out.x = x;
  out.deviations = deviations;
  out.n_paths = opt.n_paths;
  const std::size_t n = static_cast<std::size_t>(opt.n_paths);
  std::vector<double> col(n), diff(n);
  for (std::size_t i = 0; i < n; ++i) col[i] = pay[i * D + D - 1];
  out.base_payoff = pairwise_sum(col.data(), n) / n;
  out.max_improvement = -kInf;
  for (std::size_t j = 0; j + 1 < D; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      col[i] = pay[i * D + j];
      diff[i] = col[i] - pay[i * D + D - 1];
    }
    const double mean = pairwise_sum(col.data(), n) / n;
    const double dmean = pairwise_sum(diff.data(), n) / n;
    for (auto& d : diff) d = (d - dmean) * (d - dmean);
    const double se = std::sqrt(pairwise_sum(diff.data(), n) / (n - 1) / n);
    out.payoffs.push_back(mean);
    out.improvements.push_back(dmean);
    out.std_errors.push_back(se);
    if (dmean > out.max_improvement) {
      out.max_improvement = dmean;
      out.max_std_error = se;
      out.argmax = all[j];
    }
  }
  if (deviations.empty()) out.max_improvement = 0.0;
  return out;
}

}  // namespace dynkin
