#include <cmath>

#include "doctest.h"
#include "dynkin/errors.hpp"
#include "dynkin/poly.hpp"

using namespace dynkin;

TEST_CASE("horner evaluates values and derivatives") {
  const std::vector<double> c{1.0, -2.0, 3.0};  // 1 - 2t + 3t^2
  CHECK(poly::horner(c, 2.0) == doctest::Approx(9.0));
  CHECK(poly::horner(c, 2.0, 1) == doctest::Approx(10.0));
  CHECK(poly::horner(c, 2.0, 2) == doctest::Approx(6.0));
  CHECK(poly::horner(c, 2.0, 3) == 0.0);
}

TEST_CASE("shift re-expands around a new origin") {
  const std::vector<double> c{1.0, -2.0, 3.0};
  const auto s = poly::shift(c, 0.5);
  for (double t : {-1.0, 0.0, 0.3, 2.0}) CHECK(poly::horner(s, t) == doctest::Approx(poly::horner(c, t + 0.5)));
}

TEST_CASE("multiply convolves coefficients") {
  const auto p = poly::multiply({1.0, 1.0}, {-1.0, 1.0});  // (1 + t)(t - 1)
  REQUIRE(p.size() == 3);
  CHECK(p[0] == doctest::Approx(-1.0));
  CHECK(p[1] == doctest::Approx(0.0));
  CHECK(p[2] == doctest::Approx(1.0));
}

TEST_CASE("piecewise evaluation is right-continuous with local coefficients") {
  // x on [0, 0.5], 0.5 - (x - 0.5) on [0.5, 1]: a C0 tent.
  PiecewisePoly tent({0.0, 0.5, 1.0}, {{0.0, 1.0}, {0.5, -1.0}});
  CHECK(tent.smoothness() == Smoothness::C0);
  CHECK(tent(0.25) == doctest::Approx(0.25));
  CHECK(tent(0.75) == doctest::Approx(0.25));
  CHECK(tent(1.0) == doctest::Approx(0.0));
  CHECK(tent.eval_piece(0.5, 1, Side::Left) == doctest::Approx(1.0));
  CHECK(tent.eval_piece(0.5, 1, Side::Right) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(tent.eval(0.25, 1), DomainError);
  CHECK_THROWS_AS(tent.eval(1.5), DomainError);
}

TEST_CASE("smoothness is detected and declared classes are enforced") {
  // x^2 split at 0.5 is C2.
  PiecewisePoly sq({0.0, 0.5, 1.0}, {{0.0, 0.0, 1.0}, {0.25, 1.0, 1.0}});
  CHECK(sq.smoothness() == Smoothness::C2);
  CHECK(sq.eval(0.5, 2) == doctest::Approx(2.0));
  CHECK_THROWS_AS(PiecewisePoly({0.0, 0.5, 1.0}, {{0.0, 1.0}, {0.5, -1.0}}, Smoothness::C1), SpecError);
  CHECK_THROWS_AS(PiecewisePoly({0.0, 0.5, 1.0}, {{0.0, 1.0}, {0.7, -1.0}}), SpecError);
}

TEST_CASE("malformed inputs are rejected") {
  CHECK_THROWS_AS(PiecewisePoly({0.0, 1.0}, {{0, 1, 2, 3, 4, 5, 6, 7, 8}}), SpecError);
  CHECK_THROWS_AS(PiecewisePoly({0.0, 0.0, 1.0}, {{0.0}, {0.0}}), SpecError);
  CHECK_THROWS_AS(PiecewisePoly({0.0, 1.0}, {{0.0}, {1.0}}), SpecError);
}

TEST_CASE("arithmetic merges breakpoints") {
  PiecewisePoly a({0.0, 0.3, 1.0}, {{0.0, 1.0}, {0.3, 1.0}});   // x
  PiecewisePoly b({0.0, 0.6, 1.0}, {{1.0, 0.0, 1.0}, {1.36, 1.2, 1.0}});  // 1 + x^2
  const auto s = a + b, d = a - b, m = a * b;
  CHECK(s.breakpoints().size() == 4);
  for (double x : {0.1, 0.45, 0.8}) {
    CHECK(s(x) == doctest::Approx(x + 1 + x * x));
    CHECK(d(x) == doctest::Approx(x - 1 - x * x));
    CHECK(m(x) == doctest::Approx(x * (1 + x * x)));
  }
  CHECK(m.degree() == 3);
}

TEST_CASE("polynomial factory takes global coefficients") {
  const auto p = PiecewisePoly::polynomial({0.0, 1.0, -1.0}, 0.2, 0.9);  // x - x^2
  CHECK(p.lo() == 0.2);
  CHECK(p(0.5) == doctest::Approx(0.25));
  CHECK(p.derivative()(0.5) == doctest::Approx(0.0));
  const auto r = p.restricted(0.3, 0.6);
  CHECK(r.lo() == 0.3);
  CHECK(r(0.4) == doctest::Approx(0.24));
}
