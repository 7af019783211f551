#include <chrono>
#include <cmath>
#include <limits>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "dynkin/analysis.hpp"
#include "dynkin/equilibrium.hpp"
#include "dynkin/errors.hpp"
#include "dynkin/examples.hpp"
#include "dynkin/io.hpp"
#include "dynkin/montecarlo.hpp"
#include "dynkin/report.hpp"
#include "dynkin/transform.hpp"
#include "dynkin/valuefn.hpp"

using namespace dynkin;

namespace {

enum Exit { kOk = 0, kUsage = 1, kSpec = 2, kCondition = 3, kConvergence = 4, kCertification = 5 };

struct Flags {
  std::string spec_path = "-";
  int grid = 4096;
  double tol = 1e-10;
  int max_iter = 500;
  std::uint64_t seed = 42;
  long paths = 100000;
  double dt = 1e-4;
  double start = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> start_value() const { return std::isnan(start) ? std::nullopt : std::optional<double>(start); }
  std::string out_dir;
  std::string format = "json";
  bool timings = false;
  bool three_player = false;
  std::string region;
  int player = 1;
  std::string name;
  int points = 10;
};

// Condition failures carry an exit code distinct from other errors.
struct ExitError : std::runtime_error {
  int code;
  ExitError(int c, const std::string& m) : std::runtime_error(m), code(c) {}
};

class Clock {
 public:
  explicit Clock(bool on) : on_(on) {}
  template <class F>
  auto time(const std::string& label, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    auto result = f();
    if (on_) timings_[label] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
  }
  json dump() const { return on_ ? timings_ : json(nullptr); }

 private:
  bool on_;
  json timings_ = json::object();
};

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void emit(const Flags& f, const std::string& file, const std::string& text) {
  if (f.out_dir.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::create_directories(f.out_dir);
  const auto path = std::filesystem::path(f.out_dir) / file;
  std::ofstream(path) << text;
  std::cout << path.string() << "\n";
}

void emit_report(const Flags& f, const RunReport& r) { emit(f, "report.json", r.to_json().dump(2) + "\n"); }

std::string describe_failure(const ConditionReport& c) {
  std::ostringstream msg;
  msg << "condition " << c.name << " fails";
  if (!c.witnesses.empty()) {
    const auto& w = c.witnesses.front();
    msg << ": " << w.clause << " at x = " << w.x;
    if (w.y) msg << ", y = " << *w.y;
    msg << " (margin " << w.margin << ")";
  }
  return msg.str();
}

std::vector<ConditionReport> all_conditions(const GameSpec& s, bool three) {
  std::vector<ConditionReport> out{validate_assumption1(s), validate_assumption1_prime(s)};
  if (three) {
    out.push_back(validate_G2(s));
  } else {
    out.push_back(validate_G1(s));
    out.push_back(validate_G1_prime(s));
  }
  out.push_back(validate_U(s));
  return out;
}

// Conditions the solver relies on: Assumption 1 and G1 (G2 for the three-player mode).
const ConditionReport* first_required_failure(const std::vector<ConditionReport>& reps, bool three) {
  for (const auto& r : reps)
    if (!r.holds && (r.name == "assumption1" || r.name == (three ? "G2" : "G1"))) return &r;
  return nullptr;
}

struct Prepared {
  GameSpec original;
  GameSpec game;  // Brownian and undiscounted
  std::optional<TransformedGame> transformed;
};

Prepared prepare(const Flags& f) {
  Prepared p;
  p.original = load_spec_text(read_input(f.spec_path));
  p.game = p.original;
  if (p.original.diffusion || p.original.discount > 0) {
    p.transformed = transform_game(p.original);
    p.game = p.transformed->spec;
  }
  return p;
}

bool three_player_mode(const Flags& f, const GameSpec& s) { return f.three_player || s.geometry.two_bounds; }

RunReport base_report(const Flags& f, const Prepared& p, bool three, bool gate) {
  RunReport r;
  r.spec_digest = spec_digest(p.original);
  const auto reps = all_conditions(p.game, three);
  for (const auto& c : reps) r.conditions.push_back(to_json(c));
  if (gate)
    if (const auto* bad = first_required_failure(reps, three)) {
      emit_report(f, r);
      throw ExitError(kCondition, describe_failure(*bad));
    }
  return r;
}

BestResponseOptions br_options(const Flags& f) {
  BestResponseOptions o;
  o.tol = f.tol;
  return o;
}

void attach_original(json& eq, const Prepared& p, const ThresholdStrategy& s) {
  if (p.transformed) eq["original_thresholds"] = to_json(pull_back(s, p.transformed->transform));
}

void attach_original(json& eq, const Prepared& p, const TwoIntervalStrategy& s) {
  if (p.transformed) eq["original_thresholds"] = to_json(pull_back(s, p.transformed->transform));
}

EquilibriumResult solve_threshold(const Flags& f, const GameSpec& s, Clock& clock) {
  const double start = f.start_value().value_or(0.5 * s.geometry.a());
  return clock.time("solve", [&] { return gauss_seidel(s, start, f.tol, f.max_iter, br_options(f)); });
}

int cmd_validate(const Flags& f) {
  Prepared p = prepare(f);
  const bool three = three_player_mode(f, p.game);
  RunReport r = base_report(f, p, three, false);
  emit_report(f, r);
  const auto reps = all_conditions(p.game, three);
  if (const auto* bad = first_required_failure(reps, three)) {
    std::cerr << describe_failure(*bad) << "\n";
    return kCondition;
  }
  return kOk;
}

int cmd_solve(const Flags& f) {
  Prepared p = prepare(f);
  const bool three = three_player_mode(f, p.game);
  RunReport r = base_report(f, p, three, true);
  Clock clock(f.timings);
  int code = kOk;
  if (three) {
    auto res = clock.time("solve", [&] {
      std::optional<TwoIntervalStrategy> init;
      if (f.start_value()) init = TwoIntervalStrategy{f.start, p.game.geometry.a2, p.game.hi()};
      return solve_three_player(p.game, init, f.tol, f.max_iter, br_options(f));
    });
    r.equilibrium = to_json(res, f.tol);
    attach_original(r.equilibrium, p, res.s);
    if (!res.converged) {
      code = kConvergence;
    } else {
      auto cert = clock.time("certify", [&] { return certify_two_interval(p.game, res.s, std::min(f.grid, 2048)); });
      r.certificate = to_json(cert);
      if (!cert.is_equilibrium) code = kCertification;
    }
  } else {
    auto res = solve_threshold(f, p.game, clock);
    r.equilibrium = to_json(res, f.tol);
    attach_original(r.equilibrium, p, res.s);
    if (!res.converged) {
      code = kConvergence;
    } else {
      auto cert = clock.time("certify", [&] { return certify_threshold(p.game, res.s, f.grid); });
      r.certificate = to_json(cert);
      if (!cert.is_equilibrium) code = kCertification;
    }
  }
  r.timings = clock.dump();
  emit_report(f, r);
  if (code == kConvergence) std::cerr << "iteration did not converge within " << f.max_iter << " steps\n";
  if (code == kCertification) std::cerr << "equilibrium certificate failed\n";
  return code;
}

int cmd_iterate(const Flags& f) {
  Prepared p = prepare(f);
  RunReport r = base_report(f, p, false, true);
  Clock clock(f.timings);
  auto res = solve_threshold(f, p.game, clock);
  const double start = f.start_value().value_or(0.5 * p.game.geometry.a());
  auto dp = clock.time("dp", [&] {
    return dp_policy_iteration(p.game, Region::lower(start, p.game.lo()), f.tol, f.max_iter, f.grid);
  });
  if (f.format == "csv") {
    std::ostringstream out;
    out << "n,l,r\n";
    char buf[96];
    for (std::size_t i = 0; i < res.trace.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i + 1, res.trace[i].l, res.trace[i].r);
      out << buf;
    }
    emit(f, "trace.csv", out.str());
  } else {
    r.equilibrium = to_json(res, f.tol);
    attach_original(r.equilibrium, p, res.s);
    r.equilibrium["dynamic_programming"] = to_json(dp, f.tol);
    r.timings = clock.dump();
    emit_report(f, r);
  }
  return res.converged ? kOk : kConvergence;
}

int cmd_stability(const Flags& f) {
  Prepared p = prepare(f);
  RunReport r = base_report(f, p, false, true);
  Clock clock(f.timings);
  auto res = solve_threshold(f, p.game, clock);
  r.equilibrium = to_json(res, f.tol);
  if (!res.converged) {
    emit_report(f, r);
    return kConvergence;
  }
  const int grid = f.grid == 4096 ? 1024 : f.grid;
  auto st = clock.time("stability", [&] { return stability_report(p.game, res.s, grid, br_options(f)); });
  r.stability = to_json(st);
  r.timings = clock.dump();
  emit_report(f, r);
  return kOk;
}

int cmd_uniqueness(const Flags& f) {
  Prepared p = prepare(f);
  RunReport r = base_report(f, p, false, true);
  Clock clock(f.timings);
  const int grid = f.grid == 4096 ? 129 : f.grid;
  auto rr = clock.time("rosen", [&] { return rosen_uniqueness(p.game, grid); });
  r.rosen = to_json(rr);
  r.timings = clock.dump();
  emit_report(f, r);
  return kOk;
}

Region parse_region(const std::string& text, const GameSpec& s) {
  // upper:Y, lower:X, inner:L1,L2, or intervals "u1,v1;u2,v2".
  auto nums = [](const std::string& t) {
    std::vector<double> v;
    std::stringstream ss(t);
    std::string tok;
    while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
    return v;
  };
  try {
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
      const std::string kind = text.substr(0, colon);
      const auto v = nums(text.substr(colon + 1));
      if (kind == "upper" && v.size() == 1) return Region::upper(v[0], s.hi());
      if (kind == "lower" && v.size() == 1) return Region::lower(v[0], s.lo());
      if (kind == "inner" && v.size() == 2) return Region::inner(v[0], v[1], s.lo());
      throw SpecError("unknown region form " + text);
    }
    std::vector<std::pair<double, double>> iv;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ';')) {
      const auto v = nums(part);
      if (v.size() != 2) throw SpecError("interval needs two numbers: " + part);
      iv.emplace_back(v[0], v[1]);
    }
    return Region::from_intervals(iv);
  } catch (const std::invalid_argument&) {
    throw SpecError("region is not numeric: " + text);
  }
}

int cmd_value(const Flags& f) {
  Prepared p = prepare(f);
  if (f.region.empty()) throw SpecError("--region is required");
  const Region region = parse_region(f.region, p.game);
  const auto v = solve_vs_region(p.game, f.player, region, f.grid);
  for (const auto& w : v.warnings) std::cerr << "warning: " << w << "\n";
  if (f.format == "json") {
    json contact = json::array();
    for (auto [a, b] : v.contact) contact.push_back(json::array({a, b}));
    json j{{"spec_digest", spec_digest(p.original)},
           {"player", f.player},
           {"region", region.describe()},
           {"contact", contact},
           {"resolution", v.resolution},
           {"warnings", v.warnings},
           {"x", v.x},
           {"obstacle", v.obstacle},
           {"value", v.value}};
    emit(f, "value.json", j.dump(2) + "\n");
  } else {
    emit(f, "value.csv", value_csv(v));
  }
  return kOk;
}

int cmd_transform(const Flags& f) {
  GameSpec spec = load_spec_text(read_input(f.spec_path));
  auto tg = transform_game(spec);
  const Transform& t = tg.transform;
  json out{{"spec_digest", spec_digest(spec)},
           {"kind", t.kind == TransformKind::Scale ? "scale" : "discount"},
           {"fit_error", tg.fit_error},
           {"fit_tol", 1e-6},
           {"ode_residual", t.ode_residual()},
           {"grid_points", t.grid().size()},
           {"transformed_spec", spec_to_json(tg.spec)}};
  int code = kOk;
  const auto reps = all_conditions(tg.spec, tg.spec.geometry.two_bounds);
  json conds = json::array();
  for (const auto& c : reps) conds.push_back(to_json(c));
  out["conditions"] = conds;
  if (!tg.spec.geometry.two_bounds && !first_required_failure(reps, false)) {
    const double start = f.start_value().value_or(0.5 * tg.spec.geometry.a());
    auto res = gauss_seidel(tg.spec, start, f.tol, f.max_iter, br_options(f));
    out["equilibrium"] = to_json(res.s);
    out["converged"] = res.converged;
    out["original_thresholds"] = to_json(pull_back(res.s, t));
    if (!res.converged) code = kConvergence;
  }
  emit(f, "transform.json", out.dump(2) + "\n");
  return code;
}

int cmd_mc_verify(const Flags& f) {
  Prepared p = prepare(f);
  RunReport r = base_report(f, p, false, true);
  Clock clock(f.timings);
  auto res = solve_threshold(f, p.game, clock);
  r.equilibrium = to_json(res, f.tol);
  attach_original(r.equilibrium, p, res.s);
  if (!res.converged) {
    emit_report(f, r);
    return kConvergence;
  }
  McOptions opt;
  opt.n_paths = f.paths;
  opt.dt = f.dt;
  opt.seed = f.seed;
  // Simulate the original game; compare with the closed form pulled back.
  const GameSpec& sim = p.original;
  ThresholdStrategy s = res.s;
  if (p.transformed) s = pull_back(res.s, p.transformed->transform);
  auto closed = [&](int player, double x) {
    const auto M = threshold_payoff(p.game, player, res.s);
    return p.transformed ? pull_back_payoff(p.transformed->transform, M, x) : M.eval_piece(x);
  };
  json payoffs = json::array();
  bool ok = true;
  clock.time("mc", [&] {
    for (int i = 1; i <= f.points; ++i) {
      const double x = s.l + (s.r - s.l) * i / (f.points + 1);
      for (int player : {1, 2}) {
        const auto e = estimate_payoff(sim, player, s, x, opt);
        const double c = closed(player, x);
        const bool pass = std::abs(e.mean - c) <= 3 * e.std_error + 1e-12;
        ok = ok && pass;
        json row = to_json(e);
        row["x"] = x;
        row["player"] = player;
        row["closed_form"] = c;
        row["within_3se"] = pass;
        payoffs.push_back(row);
      }
    }
    return 0;
  });
  const double mid = 0.5 * (s.l + s.r);
  json scans = json::array();
  clock.time("deviation_scan", [&] {
    for (int player : {1, 2}) {
      const auto sc = deviation_scan(sim, s, player, deviation_grid(sim, player, 50), mid, opt);
      json j = to_json(sc);
      j["within_3se"] = sc.max_improvement <= 3 * sc.max_std_error + 1e-12;
      ok = ok && j["within_3se"].get<bool>();
      scans.push_back(j);
    }
    return 0;
  });
  r.mc = json{{"payoffs", payoffs}, {"deviation_scans", scans}, {"passed", ok}};
  if (!p.transformed) {
    const auto h = estimate_hit_probability(sim, s, mid, opt);
    json hj = to_json(h);
    hj["x"] = mid;
    hj["closed_form"] = hit_probability(mid, s);
    r.mc["hit_probability"] = hj;
  }
  r.timings = clock.dump();
  emit_report(f, r);
  return ok ? kOk : kCertification;
}

int cmd_example(const Flags& f) {
  const auto names = example_names();
  if (std::find(names.begin(), names.end(), f.name) == names.end()) {
    std::string all;
    for (const auto& n : names) all += " " + n;
    throw SpecError("unknown example '" + f.name + "'; available:" + all);
  }
  emit(f, f.name + ".json", spec_to_json(builtin_example(f.name)).dump(2) + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Threshold equilibria of two-player stopping games on an interval"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&f](CLI::App* c, bool spec = true) {
    if (spec) c->add_option("spec", f.spec_path, "Spec JSON file, '-' for stdin")->capture_default_str();
    c->add_option("--grid", f.grid, "Grid size")->capture_default_str();
    c->add_option("--tol", f.tol, "Tolerance")->capture_default_str();
    c->add_option("--max-iter", f.max_iter, "Iteration cap")->capture_default_str();
    c->add_option("--seed", f.seed, "Random seed")->capture_default_str();
    c->add_option("--paths", f.paths, "Monte Carlo paths")->capture_default_str();
    c->add_option("--dt", f.dt, "Monte Carlo time step")->capture_default_str();
    c->add_option("--start", f.start, "Initial threshold of player 1");
    c->add_option("--out", f.out_dir, "Write output files into this directory");
    c->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    c->add_flag("--timings", f.timings, "Record wall-clock timings in the report");
  };

  std::function<int(const Flags&)> run;
  auto sub = [&](const char* name, const char* help, int (*fn)(const Flags&)) {
    auto* c = app.add_subcommand(name, help);
    c->callback([&run, fn] { run = fn; });
    return c;
  };
  common(sub("validate", "Check the structural conditions", cmd_validate));
  auto* solve = sub("solve", "Solve and certify an equilibrium", cmd_solve);
  common(solve);
  solve->add_flag("--three-player", f.three_player, "Two-interval leader strategies");
  common(sub("iterate", "Dump the best-response trace", cmd_iterate));
  common(sub("stability", "Local and global stability", cmd_stability));
  common(sub("uniqueness", "Diagonal strict concavity search", cmd_uniqueness));
  auto* value = sub("value", "Value function against a fixed stopping region", cmd_value);
  common(value);
  value->add_option("--region", f.region, "upper:Y, lower:X, inner:L1,L2 or u1,v1;u2,v2")->required();
  value->add_option("--player", f.player, "Player who stops optimally")->check(CLI::Range(1, 2));
  common(sub("transform", "Reduce a diffusion or discounted game to Brownian motion", cmd_transform));
  auto* mc = sub("mc-verify", "Monte Carlo check of the solved equilibrium", cmd_mc_verify);
  common(mc);
  mc->add_option("--points", f.points, "Number of start points")->capture_default_str();
  auto* ex = sub("example", "Print a builtin spec", cmd_example);
  common(ex, false);
  ex->add_option("--name", f.name, "Example name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  // CSV is the natural default for value dumps.
  if (value->parsed() && value->count("--format") == 0) f.format = "csv";

  try {
    return run(f);
  } catch (const ExitError& e) {
    std::cerr << e.what() << "\n";
    return e.code;
  } catch (const SpecError& e) {
    std::cerr << "invalid spec: " << e.what() << "\n";
    return kSpec;
  } catch (const ConditionError& e) {
    std::cerr << "condition failure: " << e.what() << "\n";
    return kCondition;
  } catch (const ConvergenceError& e) {
    std::cerr << "no convergence: " << e.what() << "\n";
    return kConvergence;
  } catch (const CertificationError& e) {
    std::cerr << "certification failure: " << e.what() << "\n";
    return kCertification;
  } catch (const DomainError& e) {
    std::cerr << "invalid spec: " << e.what() << "\n";
    return kSpec;
  }
}
