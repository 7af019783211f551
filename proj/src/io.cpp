#include "dynkin/io.hpp"

#include <cstdint>
#include <cstdio>

#include "dynkin/errors.hpp"

namespace dynkin {

json poly_to_json(const PiecewisePoly& p) {
  return json{{"breakpoints", p.breakpoints()}, {"pieces", p.pieces()}, {"smoothness", to_string(p.smoothness())}};
}

PiecewisePoly poly_from_json(const json& j) {
  try {
    std::optional<Smoothness> s;
    if (j.contains("smoothness")) s = smoothness_from_string(j.at("smoothness").get<std::string>());
    return PiecewisePoly(j.at("breakpoints").get<std::vector<double>>(),
                         j.at("pieces").get<std::vector<std::vector<double>>>(), s);
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed piecewise polynomial: ") + e.what());
  }
}

json spec_to_json(const GameSpec& spec) {
  json j;
  const auto& g = spec.geometry;
  if (g.two_bounds)
    j["geometry"] = {{"a1", g.a1}, {"a2", g.a2}, {"b", g.b}};
  else
    j["geometry"] = {{"a", g.a()}, {"b", g.b}};
  j["discount"] = spec.discount;
  j["boundary"] = {spec.boundary[0], spec.boundary[1]};
  const auto& R = spec.rewards;
  j["rewards"] = {{"f1", poly_to_json(R.f1)}, {"g1", poly_to_json(R.g1)}, {"h1", poly_to_json(R.h1)},
                  {"f2", poly_to_json(R.f2)}, {"g2", poly_to_json(R.g2)}, {"h2", poly_to_json(R.h2)}};
  if (spec.diffusion) {
    const auto& d = *spec.diffusion;
    j["diffusion"] = {{"mu", poly_to_json(d.mu)},
                      {"sigma", poly_to_json(d.sigma)},
                      {"interval", {d.xl, d.xr}},
                      {"lambda", spec.discount}};
  }
  return j;
}

GameSpec spec_from_json(const json& j) {
  try {
    GameSpec s;
    const auto& g = j.at("geometry");
    if (g.contains("a1")) {
      s.geometry = Geometry::three_player(g.at("a1").get<double>(), g.at("a2").get<double>(), g.at("b").get<double>());
    } else {
      s.geometry = Geometry::two_player(g.at("a").get<double>(), g.at("b").get<double>());
    }
    s.discount = j.value("discount", 0.0);
    if (j.contains("boundary")) {
      const auto b = j.at("boundary").get<std::vector<double>>();
      if (b.size() != 2) throw SpecError("boundary must be [H0, H1]");
      s.boundary = {b[0], b[1]};
    }
    const auto& r = j.at("rewards");
    s.rewards = Rewards{poly_from_json(r.at("f1")), poly_from_json(r.at("g1")), poly_from_json(r.at("h1")),
                        poly_from_json(r.at("f2")), poly_from_json(r.at("g2")), poly_from_json(r.at("h2"))};
    if (j.contains("diffusion") && !j.at("diffusion").is_null()) {
      const auto& d = j.at("diffusion");
      const auto iv = d.at("interval").get<std::vector<double>>();
      if (iv.size() != 2) throw SpecError("diffusion interval must be [xl, xr]");
      s.diffusion = Diffusion{poly_from_json(d.at("mu")), poly_from_json(d.at("sigma")), iv[0], iv[1]};
      if (d.contains("lambda")) {
        const double lam = d.at("lambda").get<double>();
        if (j.contains("discount") && j.at("discount").get<double>() != lam)
          throw SpecError("diffusion.lambda and discount disagree");
        s.discount = lam;
      }
    }
    return s;
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed spec: ") + e.what());
  }
}

GameSpec load_spec(const json& j) {
  GameSpec raw = spec_from_json(j);
  check_geometry(raw);
  GameSpec s = normalize_boundary(raw);
  check_boundary_vanishing(s);
  return s;
}

GameSpec load_spec_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SpecError(std::string("spec is not valid JSON: ") + e.what());
  }
  return load_spec(j);
}

std::string spec_digest(const GameSpec& spec) {
  const std::string text = spec_to_json(spec).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace dynkin
