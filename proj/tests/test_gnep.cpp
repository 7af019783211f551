#include <cmath>

#include "doctest.h"
#include "dynkin/errors.hpp"
#include "dynkin/examples.hpp"
#include "dynkin/gnep.hpp"
#include "oracles.hpp"

using namespace dynkin;

TEST_CASE("utilities at a hand-computed point") {
  const auto s = example_zero_sum();
  // f1(0.2) = 0.04, g1(0.7) = -0.03, f2(0.7) = 0.03, g2(0.2) = -0.04.
  CHECK(utility1(s, 0.2, 0.7).value() == doctest::Approx((0.04 + 0.03 * 0.2 / 0.7) / 0.5));
  CHECK(utility2(s, 0.2, 0.7).value() == doctest::Approx((0.03 + 0.04 * 0.3 / 0.8) / 0.5));
}

TEST_CASE("infeasible pairs have utility minus infinity") {
  const auto s = example_zero_sum();
  CHECK_FALSE(utility1(s, 0.5, 0.5).is_finite());
  CHECK_FALSE(utility2(s, 0.6, 0.4).is_finite());
  CHECK(utility1(s, 0.6, 0.4) < utility1(s, 0.2, 0.7));
  CHECK_THROWS_AS(utility1(s, 0.6, 0.4).value(), DomainError);
}

TEST_CASE("utilities refuse diffusion and discounted specs") {
  auto s = example_zero_sum();
  s.discount = 0.5;
  CHECK_THROWS_AS(utility1(s, 0.2, 0.7), ConditionError);
}

TEST_CASE("analytic partials agree with finite differences") {
  const auto s = example_global_stable();
  const double h = 1e-4;
  auto u1 = [&](double x, double y) { return utility1(s, x, y).value(); };
  auto u2 = [&](double x, double y) { return utility2(s, x, y).value(); };
  for (auto [x, y] : {std::pair{0.05, 0.9}, std::pair{0.15, 0.8}, std::pair{0.3, 0.6}}) {
    const auto p = partials1(s, x, y);
    CHECK(p.dx == doctest::Approx((u1(x + h, y) - u1(x - h, y)) / (2 * h)).epsilon(1e-6));
    CHECK(p.dy == doctest::Approx((u1(x, y + h) - u1(x, y - h)) / (2 * h)).epsilon(1e-6));
    CHECK(p.dxx == doctest::Approx((u1(x + h, y) - 2 * u1(x, y) + u1(x - h, y)) / (h * h)).epsilon(1e-4));
    CHECK(p.dxy == doctest::Approx((u1(x + h, y + h) - u1(x + h, y - h) - u1(x - h, y + h) + u1(x - h, y - h)) /
                                   (4 * h * h)).epsilon(1e-4));
    const auto q = partials2(s, x, y);
    CHECK(q.dy == doctest::Approx((u2(x, y + h) - u2(x, y - h)) / (2 * h)).epsilon(1e-6));
    CHECK(q.dyy == doctest::Approx((u2(x, y + h) - 2 * u2(x, y) + u2(x, y - h)) / (h * h)).epsilon(1e-4));
    CHECK(q.dxy == doctest::Approx((u2(x + h, y + h) - u2(x + h, y - h) - u2(x - h, y + h) + u2(x - h, y - h)) /
                                   (4 * h * h)).epsilon(1e-4));
  }
}

TEST_CASE("utilities of the zero-utility-sum example cancel on the rectangle") {
  const auto s = example_nonzero_sum_gnep_zero();
  for (double x : {0.0, 0.1, 0.25, 0.4})
    for (double y : {0.6, 0.7, 0.85, 1.0})
      CHECK(utility1(s, x, y).value() + utility2(s, x, y).value() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("the zero-sum game does not give a zero-sum GNEP") {
  const auto s = example_zero_sum();
  for (double x : {0.0, 0.4})
    for (double y : {0.7, 0.9}) CHECK(utility1(s, x, y).value() + utility2(s, x, y).value() > 0);
}

TEST_CASE("best responses at the zero-sum equilibrium are mutual") {
  const auto s = example_zero_sum();
  const auto r = best_response2(s, oracle::zero_sum_l);
  CHECK(r.argmax == doctest::Approx(oracle::zero_sum_r).epsilon(1e-9));
  const auto l = best_response1(s, oracle::zero_sum_r);
  CHECK(l.argmax == doctest::Approx(oracle::zero_sum_l).epsilon(1e-9));
  CHECK(l.quasi_concave);
  CHECK_FALSE(l.tie);
}

TEST_CASE("maximize returns the smallest of tied maximizers and flags it") {
  auto u = [](double x) { return Utility::finite(-std::pow((x - 0.2) * (x - 0.8), 2)); };
  const auto r = maximize(u, 0.0, 1.0, {});
  CHECK(r.tie);
  CHECK_FALSE(r.quasi_concave);
  CHECK(r.argmax == doctest::Approx(0.2).epsilon(1e-6));
}

TEST_CASE("maximize handles boundary maxima") {
  auto u = [](double x) { return Utility::finite(x); };
  const auto r = maximize(u, 0.0, 0.4, {});
  CHECK(r.on_boundary);
  CHECK(r.argmax == 0.4);
}

TEST_CASE("three-player utilities reduce to the two-player ones") {
  const auto s = example_g2_three_player();
  CHECK(utility_hat2(s, 0.3, 0.4, 0.8).value() == doctest::Approx(utility1(s, 0.4, 0.8).value()));
  CHECK(utility_hat3(s, 0.3, 0.4, 0.8).value() == doctest::Approx(utility2(s, 0.4, 0.8).value()));
  const double f = s.rewards.f1(0.3), g = s.rewards.g1(0.8);
  CHECK(utility_hat1(s, 0.3, 0.4, 0.8).value() == doctest::Approx((f - g * 0.3 / 0.8) / 0.3));
}
