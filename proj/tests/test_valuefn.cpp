#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "dynkin/equilibrium.hpp"
#include "dynkin/examples.hpp"
#include "dynkin/harmonic.hpp"
#include "dynkin/valuefn.hpp"
#include "oracles.hpp"

using namespace dynkin;

TEST_CASE("concave majorant of a hat-shaped sample") {
  const std::vector<double> x{0.0, 0.25, 0.5, 0.75, 1.0};
  const std::vector<double> v{0.0, 1.0, 0.2, 1.0, 0.0};
  const auto m = concave_majorant(x, v);
  CHECK(m[2] == doctest::Approx(1.0));
  CHECK(m[0] == 0.0);
  const auto h = upper_hull(x, v);
  CHECK(h == std::vector<std::size_t>{0, 1, 3, 4});
  const auto neg = concave_majorant({0.0, 0.5, 1.0}, {0.0, -1.0, 0.0});
  CHECK(neg[1] == 0.0);  // majorant of max(v, 0)
}

TEST_CASE("value function equals the equilibrium payoff and has the threshold contact set") {
  const auto s = example_zero_sum();
  const ThresholdStrategy eq{oracle::zero_sum_l, oracle::zero_sum_r};
  const auto v = solve_vs_region(s, 1, Region::upper(eq.r));
  const auto M = threshold_payoff(s, 1, eq);
  double worst = 0.0;
  for (std::size_t i = 0; i < v.x.size(); ++i) worst = std::max(worst, std::abs(v.value[i] - M(v.x[i])));
  CHECK(worst < 1e-6);
  const auto [lo, hi] = v.contact_hull();
  CHECK(lo == doctest::Approx(0.0));
  CHECK(hi == doctest::Approx(eq.l).epsilon(1e-6));
}

TEST_CASE("u_r closed form plus the reduced follower payoff is the value") {
  const auto s = example_global_stable();
  const ThresholdStrategy eq{oracle::global_stable_l, oracle::global_stable_r};
  const auto v = solve_vs_region(s, 1, Region::upper(eq.r));
  const auto ur = u_r_closed_form(s, eq);
  const auto red = reduce(s.rewards.g1, Region::upper(eq.r));
  double worst = 0.0;
  for (std::size_t i = 0; i < v.x.size(); ++i)
    worst = std::max(worst, std::abs(v.value[i] - (ur(v.x[i]) + red(v.x[i]))));
  CHECK(worst < 1e-6);
}

TEST_CASE("value is concave off the stopping region and dominates the obstacle") {
  const auto s = example_global_stable();
  const auto v = solve_vs_region(s, 2, Region::lower(0.1));
  for (std::size_t i = 1; i + 1 < v.x.size(); ++i) {
    if (v.x[i - 1] <= 0.1) continue;
    CHECK(v.value[i] >= v.obstacle[i] - 1e-12);
    CHECK(v.value[i - 1] - 2 * v.value[i] + v.value[i + 1] <= 1e-12);
  }
}

TEST_CASE("leader contact set in the three-player game is the middle interval") {
  const auto s = example_g2_three_player();
  const auto v = solve_vs_region(s, 1, Region::upper(oracle::g2_r));
  // Drop the trivial contact at the killed end.
  std::vector<std::pair<double, double>> inner;
  for (auto iv : v.contact)
    if (iv.second > 1e-9) inner.push_back(iv);
  REQUIRE(inner.size() == 1);
  CHECK(std::abs(inner[0].first - oracle::g2_l1) < 1e-4);
  CHECK(std::abs(inner[0].second - oracle::g2_l2) < 1e-4);
}
