#include <cmath>

#include "doctest.h"
#include "dynkin/analysis.hpp"
#include "dynkin/equilibrium.hpp"
#include "dynkin/errors.hpp"
#include "dynkin/examples.hpp"
#include "oracles.hpp"

using namespace dynkin;

TEST_CASE("slope product vanishes at the zero-sum equilibrium") {
  const auto s = example_zero_sum();
  const ThresholdStrategy eq{oracle::zero_sum_l, oracle::zero_sum_r};
  CHECK(local_stability(s, eq) < 1e-6);
}

TEST_CASE("slope product matches the implicit-function slopes") {
  // Best-response slopes from finite differences of the replies.
  const auto s = example_global_stable();
  const double w = 0.1, h = 1e-5;
  const double y = best_response2(s, w).argmax;
  const double x = best_response1(s, y).argmax;
  const double dy = (best_response2(s, w + h).argmax - best_response2(s, w - h).argmax) / (2 * h);
  const double dx = (best_response1(s, y + h).argmax - best_response1(s, y - h).argmax) / (2 * h);
  const auto t = T_operator(s, w, x, y);
  CHECK(t.defined);
  CHECK(t.value == doctest::Approx(dx * dy).epsilon(1e-3));
}

TEST_CASE("stability requires an interior equilibrium") {
  const auto s = example_nonzero_sum_gnep_zero();
  CHECK_THROWS_AS(local_stability(s, {0.0, 0.6}), ConditionError);
}

TEST_CASE("global stability holds for the cut-off construction") {
  const auto s = example_global_stable();
  const auto r = global_stability(s, 256);
  CHECK(r.globally_stable);
  CHECK(r.global_sup < 1.0);
}

TEST_CASE("flattened example is locally but not globally stable") {
  const auto s = example_local_only();
  const auto eq = gauss_seidel(s, 0.1);
  REQUIRE(eq.converged);
  const auto r = stability_report(s, eq.s, 1024);
  REQUIRE(r.rho0);
  CHECK(*r.rho0 < 1.0);
  CHECK(r.global_sup >= 1.0);
  CHECK_FALSE(r.globally_stable);
}

TEST_CASE("Rosen quantities: H1 and H2 scale the second partials") {
  const auto s = example_global_stable();
  for (auto [x, y] : {std::pair{0.05, 0.8}, std::pair{0.18, 0.95}}) {
    const double d = y - x, h = 1e-4;
    auto u1 = [&](double a, double b) { return utility1(s, a, b).value(); };
    auto u2 = [&](double a, double b) { return utility2(s, a, b).value(); };
    const auto q = rosen_quantities(s, x, y);
    CHECK(q.h1 == doctest::Approx(d * d * d * (u1(x + h, y) - 2 * u1(x, y) + u1(x - h, y)) / (h * h)).epsilon(1e-4));
    CHECK(q.h2 == doctest::Approx(d * d * d * (u2(x, y + h) - 2 * u2(x, y) + u2(x, y - h)) / (h * h)).epsilon(1e-4));
  }
}

TEST_CASE("Rosen search succeeds on the cut-off construction and not on degenerate weights") {
  const auto gs = example_global_stable();
  const auto r = rosen_uniqueness(gs, 65, 51);
  CHECK(r.player1_concavity);
  CHECK(r.player2_concavity);
  CHECK(r.found);
  CHECK(r.min_margin > 0);
  CHECK(r.r1 + r.r2 == doctest::Approx(1.0));
  const auto zs = example_zero_sum();
  CHECK(rosen_margin(zs, 0.0, 1.0, 65) <= 0.0);
}
