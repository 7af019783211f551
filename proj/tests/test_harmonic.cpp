#include "doctest.h"
#include "dynkin/examples.hpp"
#include "dynkin/harmonic.hpp"

using namespace dynkin;

// Zero-sum rewards: f1 = x (0.4 - x) on [0, 0.4], g1 = (x - 0.6)(x - 1) on [0.6, 1].
TEST_CASE("threshold payoff interpolates linearly between the thresholds") {
  const auto spec = example_zero_sum();
  const ThresholdStrategy s{0.2, 0.7};
  const auto M1 = threshold_payoff(spec, 1, s);
  CHECK(M1(0.45) == doctest::Approx(0.5 * 0.04 + 0.5 * -0.03));
  CHECK(M1(0.1) == doctest::Approx(0.03));  // immediate stop: f1(0.1)
  CHECK(M1(0.8) == doctest::Approx(-0.04));  // player 2 stops: g1(0.8)
  const auto M2 = threshold_payoff(spec, 2, s);
  CHECK(M2(0.45) == doctest::Approx(-M1(0.45)));
}

TEST_CASE("hit probability is the linear interpolant") {
  CHECK(hit_probability(0.45, {0.2, 0.7}) == doctest::Approx(0.5));
  CHECK(hit_probability(0.1, {0.2, 0.7}) == doctest::Approx(1.0));
  CHECK(hit_probability(0.9, {0.2, 0.7}) == doctest::Approx(0.0));
}

TEST_CASE("reduction is affine on gaps and killed at the ends") {
  const auto spec = example_zero_sum();
  const auto up = reduce(spec.rewards.g1, Region::upper(0.7));
  CHECK(up(0.35) == doctest::Approx(-0.03 * 0.35 / 0.7));
  CHECK(up(0.0) == doctest::Approx(0.0));
  CHECK(up(0.8) == doctest::Approx(-0.04));
  CHECK(up.derivative(0.35) == doctest::Approx(-0.03 / 0.7));
  const auto mid = reduce(spec.rewards.f1, Region::inner(0.1, 0.2));
  CHECK(mid(0.05) == doctest::Approx(0.03 * 0.5));
  CHECK(mid(0.6) == doctest::Approx(0.04 * 0.4 / 0.8));
  const auto poly = up.as_poly();
  for (double x : {0.1, 0.5, 0.75}) CHECK(poly(x) == doctest::Approx(up(x)));
}

TEST_CASE("regions merge and describe themselves") {
  const auto r = Region::from_intervals({{0.5, 0.6}, {0.1, 0.2}, {0.55, 0.7}});
  REQUIRE(r.intervals().size() == 2);
  CHECK(r.intervals()[1].second == 0.7);
  CHECK(r.contains(0.15));
  CHECK_FALSE(r.contains(0.3));
  CHECK_FALSE(r.describe().empty());
  CHECK_THROWS(Region::inner(0.0, 0.2));
}

TEST_CASE("two-interval payoff uses the middle region") {
  const auto spec = example_g2_three_player();
  const TwoIntervalStrategy s{0.3, 0.4, 0.8};
  const auto M1 = two_interval_payoff(spec, 1, s);
  const double f_l1 = spec.rewards.f1(0.3), f_l2 = spec.rewards.f1(0.4), g_r = spec.rewards.g1(0.8);
  CHECK(M1(0.15) == doctest::Approx(f_l1 * 0.5));
  CHECK(M1(0.35) == doctest::Approx(spec.rewards.f1(0.35)));
  CHECK(M1(0.6) == doctest::Approx(0.5 * f_l2 + 0.5 * g_r));
}
