#include <cmath>
#include <numeric>

#include "doctest.h"
#include "dynkin/examples.hpp"
#include "dynkin/harmonic.hpp"
#include "dynkin/montecarlo.hpp"
#include "oracles.hpp"

using namespace dynkin;

namespace {
McOptions small(long n = 20000) {
  McOptions o;
  o.n_paths = n;
  return o;
}
}  // namespace

TEST_CASE("generator is reproducible and roughly standard normal") {
  CounterRng a(5, 17), b(5, 17), c(5, 18);
  double s = 0, s2 = 0;
  for (int i = 0; i < 20000; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    s += x;
    s2 += x * x;
  }
  CHECK(std::abs(s / 20000) < 0.03);
  CHECK(std::abs(s2 / 20000 - 1.0) < 0.03);
  CHECK(a.uniform() != c.uniform());
}

TEST_CASE("pairwise summation") {
  std::vector<double> v(1000);
  std::iota(v.begin(), v.end(), 1.0);
  CHECK(pairwise_sum(v.data(), v.size()) == 500500.0);
}

TEST_CASE("start inside a stopping set pays immediately") {
  const auto s = example_zero_sum();
  const auto e = estimate_payoff(s, 1, ThresholdStrategy{0.3, 0.7}, 0.1, small(100));
  CHECK(e.mean == doctest::Approx(s.rewards.f1(0.1)));
  CHECK(e.std_error == 0.0);
}

TEST_CASE("estimates agree with the closed form and are deterministic across threads") {
  const auto s = example_zero_sum();
  const ThresholdStrategy eq{oracle::zero_sum_l, oracle::zero_sum_r};
  const double x = 0.5 * (eq.l + eq.r);
  auto one = small();
  one.threads = 1;
  auto many = small();
  many.threads = 3;
  const auto e1 = estimate_payoff(s, 1, eq, x, one);
  const auto e3 = estimate_payoff(s, 1, eq, x, many);
  CHECK(e1.mean == e3.mean);
  CHECK(e1.std_error == e3.std_error);
  CHECK(std::abs(e1.mean - threshold_payoff(s, 1, eq)(x)) < 3 * e1.std_error);
  CHECK(e1.ties == 0);
  const auto h = estimate_hit_probability(s, eq, 0.4, small());
  CHECK(std::abs(h.mean - hit_probability(0.4, eq)) < 3 * h.std_error);
}

TEST_CASE("two-interval payoff agrees with the closed form") {
  const auto s = example_g2_three_player();
  const TwoIntervalStrategy st{oracle::g2_l1, oracle::g2_l2, oracle::g2_r};
  const auto M = two_interval_payoff(s, 1, st);
  for (double x : {0.5 * st.l1, 0.6}) {
    const auto e = estimate_payoff(s, 1, st, x, small());
    CHECK(std::abs(e.mean - M(x)) < 3 * e.std_error);
  }
}

TEST_CASE("deviation scan: zero at the equilibrium threshold, detects a perturbation") {
  const auto s = example_zero_sum();
  const ThresholdStrategy eq{oracle::zero_sum_l, oracle::zero_sum_r};
  const double x = 0.5;
  const auto self = deviation_scan(s, eq, 1, {eq.l}, x, small(5000));
  CHECK(self.improvements[0] == 0.0);
  const ThresholdStrategy off{0.1, eq.r};
  const auto scan = deviation_scan(s, off, 1, deviation_grid(s, 1, 50), x, small(10000));
  CHECK(scan.max_improvement > 3 * scan.max_std_error);
  // The true best response to r is the equilibrium threshold.
  CHECK(std::abs(scan.argmax - eq.l) < 0.03);
}

TEST_CASE("naive monitoring error shrinks like the square root of the step") {
  const auto s = example_zero_sum();
  const ThresholdStrategy st{0.4, 0.6};
  const double x = 0.45, exact = hit_probability(x, st);
  std::vector<double> ldt, lerr;
  for (double dt : {1e-3, 2.5e-4, 6.25e-5}) {
    McOptions o = small(100000);
    o.dt = dt;
    o.crossing_correction = false;
    const auto e = estimate_hit_probability(s, st, x, o);
    ldt.push_back(std::log(dt));
    lerr.push_back(std::log(std::abs(e.mean - exact)));
  }
  const double mx = (ldt[0] + ldt[1] + ldt[2]) / 3, my = (lerr[0] + lerr[1] + lerr[2]) / 3;
  double num = 0, den = 0;
  for (int i = 0; i < 3; ++i) {
    num += (ldt[i] - mx) * (lerr[i] - my);
    den += (ldt[i] - mx) * (ldt[i] - mx);
  }
  const double slope = num / den;
  CHECK(slope >= 0.3);
  CHECK(slope <= 0.7);
}

TEST_CASE("bridge correction removes the monitoring bias") {
  const auto s = example_zero_sum();
  const ThresholdStrategy st{0.4, 0.6};
  McOptions o = small(50000);
  o.dt = 1e-3;
  const auto e = estimate_hit_probability(s, st, 0.45, o);
  CHECK(std::abs(e.mean - hit_probability(0.45, st)) < 3 * e.std_error + 2e-3);
}
