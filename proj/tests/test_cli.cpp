#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "dynkin/report.hpp"

using namespace dynkin;

namespace {

struct Run {
  int code;
  std::string out, err;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const std::string& args) {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path() / "dynkin_cli_test";
  std::filesystem::create_directories(dir);
  const auto out = dir / ("out" + std::to_string(counter) + ".txt");
  const auto err = dir / ("err" + std::to_string(counter++) + ".txt");
  const std::string cmd = args + " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  return {WEXITSTATUS(status), slurp(out), slurp(err)};
}

const std::string cli = DYNKIN_CLI_PATH;

std::string example_file(const std::string& name) {
  const auto path = std::filesystem::temp_directory_path() / ("dynkin_" + name + ".json");
  run(cli + " example --name " + name + " --out " + path.parent_path().string());
  std::filesystem::rename(path.parent_path() / (name + ".json"), path);
  return path.string();
}

}  // namespace

TEST_CASE("example piped into solve converges and certifies") {
  const auto r = run(cli + " example --name zero_sum | " + cli + " solve");
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["equilibrium"]["converged"].get<bool>());
  CHECK(j["certificate"]["is_equilibrium"].get<bool>());
  CHECK(j["spec_digest"].get<std::string>().size() == 16);
  const auto rep = RunReport::from_json(j);
  CHECK(rep.to_json() == j);
}

TEST_CASE("a spec failing G1 exits with the condition code and a witness") {
  const auto path = example_file("zero_sum");
  auto j = json::parse(slurp(path));
  j["rewards"]["f1"]["pieces"][0] = {0.0, -0.04, 0.1};
  std::ofstream(path) << j.dump();
  const auto r = run(cli + " solve " + path);
  CHECK(r.code == 3);
  CHECK(r.err.find("G1") != std::string::npos);
  CHECK(r.err.find("x = ") != std::string::npos);
}

TEST_CASE("invalid specs exit with the spec code") {
  const auto path = std::filesystem::temp_directory_path() / "dynkin_bad.json";
  std::ofstream(path) << "{ nope";
  CHECK(run(cli + " solve " + path.string()).code == 2);
  CHECK(run(cli + " example --name nothing").code == 2);
}

TEST_CASE("iteration cap exits with the convergence code") {
  const auto r = run(cli + " example --name zero_sum | " + cli + " solve --max-iter 1 --tol 1e-15");
  CHECK(r.code == 4);
}

TEST_CASE("stability on the cut-off example is global") {
  const auto r = run(cli + " example --name global_stable | " + cli + " stability");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["stability"]["globally_stable"].get<bool>());
}

TEST_CASE("value export is CSV with the documented columns") {
  const auto path = example_file("zero_sum");
  const auto r = run(cli + " value " + path + " --region upper:0.72 --grid 512");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("x,obstacle,value,in_contact\n", 0) == 0);
}

TEST_CASE("outputs are byte-identical across runs, including Monte Carlo") {
  const auto path = example_file("zero_sum");
  const std::string cmd = cli + " mc-verify " + path + " --paths 2000 --points 2 --dt 1e-3";
  const auto a = run(cmd), b = run(cmd);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(json::parse(a.out)["mc"]["passed"].get<bool>());
}

TEST_CASE("three-player solve on the G2 example") {
  const auto r = run(cli + " example --name g2_three_player | " + cli + " solve --three-player");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["equilibrium"]["mode"] == "three_player");
}

TEST_CASE("transform command reduces a discounted game") {
  const auto path = example_file("zero_sum");
  auto j = json::parse(slurp(path));
  j["discount"] = 0.5;
  std::ofstream(path) << j.dump();
  const auto r = run(cli + " transform " + path);
  REQUIRE(r.code == 0);
  const auto out = json::parse(r.out);
  CHECK(out["kind"] == "discount");
  CHECK(out["fit_error"].get<double>() < 1e-6);
  CHECK(out["original_thresholds"]["l"].get<double>() < out["original_thresholds"]["r"].get<double>());
}
