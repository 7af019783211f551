#include <cmath>

#include "doctest.h"
#include "dynkin/equilibrium.hpp"
#include "dynkin/errors.hpp"
#include "dynkin/examples.hpp"
#include "dynkin/montecarlo.hpp"
#include "dynkin/transform.hpp"

using namespace dynkin;

namespace {
Diffusion bm(double mu = 0.0, double sigma = 1.0) {
  return {PiecewisePoly::constant(mu), PiecewisePoly::constant(sigma), 0.0, 1.0};
}
}  // namespace

TEST_CASE("quintic Hermite cell reproduces its end data") {
  const auto c = hermite5(0.5, 1.0, -2.0, 3.0, 0.25, 0.5, -1.0);
  CHECK(poly::horner(c, 0.5) == doctest::Approx(0.25));
  CHECK(poly::horner(c, 0.5, 1) == doctest::Approx(0.5));
  CHECK(poly::horner(c, 0.5, 2) == doctest::Approx(-1.0));
  CHECK(poly::horner(c, 0.0, 2) == doctest::Approx(3.0));
}

TEST_CASE("driftless scale function is the identity") {
  const auto t = scale_function(bm());
  for (double x : {0.0, 0.1, 0.37, 1.0}) CHECK(std::abs(t.forward(x) - x) < 1e-12);
  CHECK(std::abs(t.inverse(0.42) - 0.42) < 1e-12);
}

TEST_CASE("scale function under unit drift matches 1 - exp(-2x)") {
  const auto t = scale_function(bm(1.0));
  const double z = 1.0 - std::exp(-2.0);
  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double x = i / 1000.0;
    worst = std::max(worst, std::abs(t.forward(x) - (1.0 - std::exp(-2.0 * x)) / z));
  }
  CHECK(worst < 1e-8);
  CHECK(t.ode_residual() < 1e-6);
  CHECK(std::abs(t.inverse(t.forward(0.3)) - 0.3) < 1e-8);
  CHECK(std::abs(t.forward(1.0, 1) - 2.0 * std::exp(-2.0) / z) < 1e-8);
}

TEST_CASE("scale function with linear drift is an error function") {
  Diffusion d{PiecewisePoly::polynomial({0.0, 1.0}), PiecewisePoly::constant(1.0), 0.0, 1.0};
  const auto t = scale_function(d);
  for (double x : {0.2, 0.5, 0.9}) CHECK(std::abs(t.forward(x) - std::erf(x) / std::erf(1.0)) < 1e-8);
}

TEST_CASE("round trip through the forward map") {
  const auto t = scale_function(bm(-0.7, 0.8));
  double worst = 0.0;
  for (int i = 0; i <= 500; ++i) {
    const double u = i / 500.0;
    worst = std::max(worst, std::abs(t.forward(t.inverse(u)) - u));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("eigenfunctions of discounted Brownian motion") {
  const auto t = discount_transform(bm(), 0.5);
  // w'' = w with flat ends: cosh(x) and cosh(1 - x).
  for (double x : {0.0, 0.3, 0.8, 1.0}) {
    CHECK(std::abs(t.psi(x) - std::cosh(x)) < 1e-9);
    CHECK(std::abs(t.phi(x) - std::cosh(1.0 - x)) < 1e-9);
  }
  CHECK(t.ode_residual() < 1e-6);
  const auto& g = t.grid();
  double min_slope = 1.0;
  for (std::size_t i = 0; i + 1 < g.size(); ++i)
    min_slope = std::min(min_slope, t.forward(g[i + 1]) - t.forward(g[i]));
  CHECK(min_slope > 0);
}

TEST_CASE("discounted Brownian motion makes exp(-lambda t) cosh(W) a martingale") {
  const double lambda = 0.5, x = 0.4, dt = 1e-2;
  const long n = 40000;
  double sum = 0.0, sq = 0.0;
  for (long p = 0; p < n; ++p) {
    CounterRng rng(11, static_cast<std::uint64_t>(p));
    double w = x;
    for (int k = 0; k < 100; ++k) w += std::sqrt(dt) * rng.normal();
    const double v = std::exp(-lambda) * std::cosh(w);
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n, se = std::sqrt((sq / n - mean * mean) / n);
  CHECK(std::abs(mean - std::cosh(x)) < 3 * se);
}

TEST_CASE("vanishing volatility is rejected") {
  Diffusion d{PiecewisePoly::constant(0.0), PiecewisePoly::polynomial({0.0, 1.0}), 0.0, 1.0};
  CHECK_THROWS_AS(scale_function(d), SpecError);
}

TEST_CASE("identity transform leaves the game unchanged up to refit") {
  auto s = example_global_stable();
  s.diffusion = bm();
  const auto tg = transform_game(s);
  CHECK(tg.fit_error < 1e-6);
  for (double x : {0.1, 0.5, 0.9}) CHECK(std::abs(tg.spec.rewards.f2(x) - s.rewards.f2(x)) < 1e-9);
  CHECK(tg.spec.geometry.b == doctest::Approx(s.geometry.b));
}

TEST_CASE("drifted zero-sum game still satisfies the standing assumptions after reduction") {
  auto s = example_zero_sum();
  s.diffusion = bm(1.0);
  const auto tg = transform_game(s);
  CHECK(tg.fit_error < 1e-6);
  CHECK(validate_assumption1(tg.spec).holds);
  CHECK(validate_G1(tg.spec).holds);
  CHECK(std::abs(tg.spec.rewards.f1(0.0)) < 1e-12);
  CHECK(std::abs(tg.spec.rewards.g2(1.0)) < 1e-12);
  const auto eq = gauss_seidel(tg.spec, 0.2);
  REQUIRE(eq.converged);
  const auto back = pull_back(eq.s, tg.transform);
  CHECK(back.l < back.r);
}

TEST_CASE("pulled-back discounted equilibrium matches simulation") {
  auto s = example_zero_sum();
  s.discount = 0.5;
  const auto tg = transform_game(s);
  const auto eq = gauss_seidel(tg.spec, 0.2);
  REQUIRE(eq.converged);
  const auto back = pull_back(eq.s, tg.transform);
  const auto M = threshold_payoff(tg.spec, 1, eq.s);
  McOptions opt;
  opt.n_paths = 20000;
  for (double x : {0.35, 0.6}) {
    const auto e = estimate_payoff(s, 1, back, x, opt);
    CHECK(std::abs(e.mean - pull_back_payoff(tg.transform, M, x)) < 3 * e.std_error);
  }
}
