#include "doctest.h"
#include "dynkin/errors.hpp"
#include "dynkin/examples.hpp"
#include "dynkin/io.hpp"
#include "dynkin/rewards.hpp"

using namespace dynkin;

TEST_CASE("builtin examples satisfy the conditions they are built for") {
  const auto zs = example_zero_sum();
  CHECK(validate_assumption1(zs).holds);
  CHECK(validate_G1(zs).holds);
  CHECK_FALSE(validate_G1_prime(zs).holds);  // kinks at the inflection points
  const auto gs = example_global_stable();
  CHECK(validate_G1_prime(gs).holds);
  CHECK(validate_U(gs).holds);
  const auto g2 = example_g2_three_player();
  CHECK(validate_assumption1(g2).holds);
  CHECK(validate_G2(g2).holds);
}

TEST_CASE("a convex leader reward fails G1 with a located witness") {
  auto s = example_zero_sum();
  auto pieces = s.rewards.f1.pieces();
  pieces[0] = {0.0, -0.04, 0.1};  // -0.1 x (0.4 - x): convex, still below h1
  s.rewards.f1 = PiecewisePoly(s.rewards.f1.breakpoints(), pieces);
  CHECK(validate_assumption1(s).holds);
  const auto rep = validate_G1(s);
  CHECK_FALSE(rep.holds);
  REQUIRE_FALSE(rep.witnesses.empty());
  CHECK(rep.witnesses.front().x <= 0.4);
  CHECK(rep.witnesses.front().margin < 0);
}

TEST_CASE("ordering f <= h <= g is checked") {
  auto s = example_zero_sum();
  s.rewards.h1 = s.rewards.g1 + PiecewisePoly::polynomial({0.0, 0.01, -0.01});
  CHECK_FALSE(validate_assumption1(s).holds);
}

TEST_CASE("boundary rewards are removed by their harmonic extension") {
  auto s = example_zero_sum();
  const double H0 = 0.3, H1 = -0.2;
  const auto ext = PiecewisePoly::polynomial({H0, H1 - H0});
  for (auto* p : {&s.rewards.f1, &s.rewards.g1, &s.rewards.h1, &s.rewards.f2, &s.rewards.g2, &s.rewards.h2})
    *p = *p + ext;
  s.boundary = {H0, H1};
  const auto n = normalize_boundary(s);
  CHECK(n.boundary[0] == 0.0);
  CHECK(n.boundary[1] == 0.0);
  CHECK(n.rewards.f1(0.0) == doctest::Approx(0.0));
  CHECK(n.rewards.g2(1.0) == doctest::Approx(0.0));
  CHECK(n.rewards.f1(0.2) == doctest::Approx(0.04));  // 0.2 (0.4 - 0.2)
  CHECK_NOTHROW(check_boundary_vanishing(n));
  CHECK_THROWS_AS(check_boundary_vanishing(s), SpecError);
}

TEST_CASE("geometry must be ordered inside the interval") {
  auto s = example_zero_sum();
  s.geometry = Geometry::two_player(0.4, 1.2);
  CHECK_THROWS_AS(check_geometry(s), SpecError);
}

TEST_CASE("spec JSON round trip is lossless and the digest is stable") {
  const auto s = example_global_stable();
  const auto j = spec_to_json(s);
  const auto back = spec_from_json(j);
  CHECK(spec_to_json(back) == j);
  CHECK(spec_digest(back) == spec_digest(s));
  CHECK(spec_digest(s) != spec_digest(example_zero_sum()));
  CHECK(spec_digest(s).size() == 16);
}

TEST_CASE("malformed spec text reports a spec error") {
  CHECK_THROWS_AS(load_spec_text("{not json"), SpecError);
  CHECK_THROWS_AS(load_spec_text(R"({"geometry": {"a": 0.4}})"), SpecError);
  auto j = spec_to_json(example_zero_sum());
  j["diffusion"] = {{"mu", poly_to_json(PiecewisePoly::constant(0.0))},
                    {"sigma", poly_to_json(PiecewisePoly::constant(1.0))},
                    {"interval", {0.0, 1.0}},
                    {"lambda", 0.5}};
  j["discount"] = 0.25;
  CHECK_THROWS_AS(load_spec(j), SpecError);
}
