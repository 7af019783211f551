#pragma once

#include <string>

#include "json.hpp"
#include "dynkin/rewards.hpp"

namespace dynkin {

using json = nlohmann::json;

json poly_to_json(const PiecewisePoly& p);
PiecewisePoly poly_from_json(const json& j);

json spec_to_json(const GameSpec& spec);
// Parse only; no normalization or load-time checks.
GameSpec spec_from_json(const json& j);
// Parse, normalize the exit payoff away and run load-time checks.
GameSpec load_spec(const json& j);
GameSpec load_spec_text(const std::string& text);

// Stable 64-bit FNV-1a digest of the canonical JSON form.
std::string spec_digest(const GameSpec& spec);

}  // namespace dynkin
