#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <unistd.h>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "reluland/errors.hpp"
#include "reluland_cli/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace reluland;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Result run(std::initializer_list<std::string> args) {
  std::vector<std::string> store{"reluland"};
  store.insert(store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& s : store) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return std::string(RELULAND_TEST_DATA) + "/" + name; }

fs::path scratch(const char* name) {
  const fs::path p = fs::temp_directory_path() / ("reluland_cli_test_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("real-number flags accept fractions") {
  CHECK(cli::parse_real("1/3") == doctest::Approx(1.0 / 3.0).epsilon(1e-16));
  CHECK(cli::parse_real("-2.5e-1") == -0.25);
  CHECK(cli::parse_real("3/4") == 0.75);
  CHECK_THROWS_AS(cli::parse_real("1/0"), ParseError);
  CHECK_THROWS_AS(cli::parse_real("abc"), ParseError);
  CHECK_THROWS_AS(cli::parse_real("1.5x"), ParseError);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run({"minima", "--no-such-flag"}).code == cli::kExitUsage);
  CHECK(run({"minima", "--alpha", "zero"}).code == cli::kExitUsage);
  const Result help = run({"--help"});
  CHECK(help.code == cli::kExitOk);
  CHECK(help.out.find("enumerate") != std::string::npos);
  CHECK(run({"train", "--help"}).code == cli::kExitOk);
}

TEST_CASE("minima") {
  const Result r = run({"minima", "--alpha", "1/3", "--beta", "2/3", "--H", "4", "--samples", "10"});
  REQUIRE(r.code == cli::kExitOk);
  const json rep = r.report();
  CHECK(rep["schema_version"] == cli::kSchemaVersion);
  CHECK(rep["samples"].size() == 10);
  for (const json& s : rep["samples"]) CHECK(s["grad_norm"].get<double>() < 1e-10);
  CHECK(rep["passed"] == true);
  CHECK(rep["gap"].is_null());

  CHECK(run({"minima", "--x", "0.9"}).code == cli::kExitUsage);
  CHECK(run({"minima", "--alpha", "2/3", "--beta", "1/3"}).code == cli::kExitUsage);
  CHECK(run({"minima", "--target", data("square.json")}).code == cli::kExitUsage);

  const Result gap = run({"minima", "--samples", "2", "--gap", "--p", "0.5", "--eps", "0.05"});
  REQUIRE(gap.code == cli::kExitOk);
  CHECK(gap.report()["gap"]["gap"].get<double>() > 0.0);
  CHECK(run({"minima", "--samples", "1", "--gap", "--eps", "0.3"}).code == cli::kExitUsage);
}

TEST_CASE("enumerate") {
  const Result sq = run({"enumerate", "--target", data("square.json")});
  REQUIRE(sq.code == cli::kExitOk);
  const json rep = sq.report();
  REQUIRE(rep["entries"].size() == 3);
  CHECK(rep["entries"][2]["kind"] == "increasing_kink");
  CHECK(rep["entries"][2]["q"].get<double>() == doctest::Approx(1.0 / 3.0));
  CHECK(rep["entries"][2]["c"].get<double>() == doctest::Approx(1.0 / 27.0));
  CHECK(rep["entries"][2]["vw"].get<double>() == doctest::Approx(4.0 / 3.0));
  CHECK(rep["oracle"]["agrees"] == true);

  const Result one = run({"enumerate", "--target", data("constant.json")});
  REQUIRE(one.code == cli::kExitOk);
  CHECK(one.report()["entries"].size() == 1);

  CHECK(run({"enumerate", "--target", data("malformed.json")}).code == cli::kExitUsage);
  CHECK(run({"enumerate", "--target", data("missing.json")}).code == cli::kExitUsage);
  CHECK(run({"enumerate"}).code == cli::kExitUsage);
  const Result bench = run({"enumerate", "--target", data("benchmark.json")});
  CHECK(bench.code == cli::kExitUsage);
  CHECK(bench.err.find("finiteness hypothesis violated") != std::string::npos);
}

TEST_CASE("enumerate writes csv files and refuses to overwrite") {
  const fs::path dir = scratch("enum");
  REQUIRE(run({"enumerate", "--target", data("kinked.json"), "--out", dir.string(), "--csv-points", "11"}).code ==
          cli::kExitOk);
  CHECK(fs::exists(dir / "catalog.json"));
  const json rep = json::parse(slurp(dir / "catalog.json"));
  int csvs = 0;
  for (const auto& e : fs::directory_iterator(dir)) csvs += e.path().extension() == ".csv";
  CHECK(csvs == static_cast<int>(rep["entries"].size()));
  const Result again = run({"enumerate", "--target", data("kinked.json"), "--out", dir.string()});
  CHECK(again.code == cli::kExitUsage);
  CHECK(again.err.find("--force") != std::string::npos);
  CHECK(run({"enumerate", "--target", data("kinked.json"), "--out", dir.string(), "--force"}).code == cli::kExitOk);
  fs::remove_all(dir);
}

TEST_CASE("train") {
  const Result a = run({"train", "--runs", "1", "--seed", "7"});
  const Result b = run({"train", "--runs", "1", "--seed", "7"});
  REQUIRE(a.code == cli::kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.report()["config"]["prng"] == "splitmix64-v1");
  CHECK(run({"train", "--lr", "0"}).code == cli::kExitUsage);
  CHECK(run({"train", "--lr", "-1/20"}).code == cli::kExitUsage);
  CHECK(run({"train", "--svg"}).code == cli::kExitUsage);
  CHECK(run({"train", "--runs", "0"}).code == cli::kExitUsage);
  // a step cap too small to converge is a certificate failure
  CHECK(run({"train", "--runs", "1", "--max-iters", "3"}).code == cli::kExitCertificate);
}

TEST_CASE("train defaults reproduce the pinned regression") {
  const Result r = run({"train"});
  REQUIRE(r.code == cli::kExitOk);
  const json rep = r.report();
  CHECK(rep["config"]["master_seed"] == 42);
  CHECK(rep["config"]["runs"] == 50);
  CHECK(rep["clusters"].size() == 17);
  CHECK(rep["risk_spread"].get<double>() == doctest::Approx(0.024909604499746326).epsilon(1e-9));
}

TEST_CASE("train svg overlay") {
  const fs::path dir = scratch("train");
  REQUIRE(run({"train", "--runs", "4", "--seed", "1", "--out", dir.string(), "--svg"}).code == cli::kExitOk);
  const json rep = json::parse(slurp(dir / "ensemble.json"));
  const std::string svg = slurp(dir / "ensemble.svg");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("viewBox") != std::string::npos);
  const std::regex poly("<polyline");
  const auto n = std::distance(std::sregex_iterator(svg.begin(), svg.end(), poly), std::sregex_iterator());
  CHECK(n == static_cast<long>(rep["clusters"].size()) + 1);
  CHECK(fs::exists(dir / "cluster_0.csv"));
  fs::remove_all(dir);
}

TEST_CASE("gf") {
  const Result r = run({"gf", "--target", data("square.json"), "--seed", "2", "--t-end", "20"});
  REQUIRE(r.code == cli::kExitOk);
  const json rep = r.report();
  CHECK(rep["step_underflow"] == false);
  CHECK(rep["t_end"].get<double>() == doctest::Approx(20.0));

  const fs::path dir = scratch("gf");
  fs::create_directories(dir);
  std::ofstream(dir / "theta.json") << R"({"H": 1, "theta": [1.0, -0.3, 1.3, 0.05]})";
  const Result t = run({"gf", "--target", data("square.json"), "--theta", (dir / "theta.json").string()});
  REQUIRE(t.code == cli::kExitOk);
  CHECK(t.report()["final_risk"].get<double>() == doctest::Approx(1.0973936899862826e-3).epsilon(1e-6));
  CHECK(run({"gf", "--theta", (dir / "nope.json").string()}).code == cli::kExitUsage);
  CHECK(run({"gf", "--rtol", "0"}).code == cli::kExitUsage);
  fs::remove_all(dir);
}
