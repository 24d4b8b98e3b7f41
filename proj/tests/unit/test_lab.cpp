#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>
#ifndef _WIN32
#include <sys/wait.h>
#endif

#include "vislab/errors.hpp"
#include "vislab/lab.hpp"

using namespace vislab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "vislab_unit";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json sidecar(const RunResult& r) { return json::parse(slurp(r.json_path)); }

ExperimentConfig config(Experiment e, const std::string& out) {
  ExperimentConfig c;
  c.experiment = e;
  c.out = scratch(out).string();
  return c;
}

int cli(const std::string& args) {
  const std::string cmd = std::string("\"") + VISLAB_CLI_PATH + "\" " + args + " > " +
                          scratch("cli.log").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
#ifdef _WIN32
  return status;
#else
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#endif
}

}  // namespace

TEST_SUITE("lab") {

TEST_CASE("parsing helpers") {
  int lo = 0, hi = 0;
  CHECK(parse_depth_range("1..6", lo, hi));
  CHECK(lo == 1);
  CHECK(hi == 6);
  CHECK(parse_depth_range("5", lo, hi));
  CHECK(lo == 5);
  CHECK(hi == 5);
  CHECK(parse_depth_range("6..1", lo, hi));  // ordering is left to validate()
  CHECK_FALSE(parse_depth_range("a..b", lo, hi));
  CHECK_FALSE(parse_depth_range("", lo, hi));

  Point2 p;
  CHECK(parse_point("0.5,-10", p));
  CHECK(p == Point2{0.5, -10});
  CHECK_FALSE(parse_point("0.5", p));
  CHECK_FALSE(parse_point("x,1", p));

  CHECK(parse_experiment("favard-scaling") == Experiment::favard_scaling);
  CHECK_FALSE(parse_experiment("bogus").has_value());
  for (const auto& name : experiment_names()) CHECK(experiment_name(*parse_experiment(name)) == name);
}

TEST_CASE("validation") {
  ExperimentConfig c;
  CHECK(validate(c).empty());

  c.ifs = "no-such-ifs";
  CHECK_FALSE(validate(c).empty());
  c = {};
  c.n_lo = 3;
  c.n_hi = 1;
  CHECK_FALSE(validate(c).empty());
  c = {};
  c.k = 11;
  CHECK_FALSE(validate(c).empty());
  c.k = 10;
  CHECK_FALSE(validate(c).empty());
  c = {};
  c.alpha = 2.5;
  CHECK_FALSE(validate(c).empty());
  c = {};
  c.delta = -1.0;
  CHECK_FALSE(validate(c).empty());

  c = {};
  c.experiment = Experiment::energy;
  c.n_lo = c.n_hi = 12;
  const auto v = validate(c);
  REQUIRE_FALSE(v.empty());
  CHECK(v[0].resource);
  CHECK(v[0].constraint.find("node budget") != std::string::npos);
}

TEST_CASE("defaults are materialised") {
  ExperimentConfig c;
  c.experiment = Experiment::vis_delta_sweep;
  const auto e = effective_config(c);
  REQUIRE(e.delta.has_value());
  CHECK(*e.delta == doctest::Approx(std::pow(4.0, -4)));
  CHECK(e.angles.value_or(0) == 4096);
  CHECK_FALSE(e.vantages.empty());
  CHECK(e.out == "vis-delta-sweep.csv");
  CHECK(e.lambdas.size() == 6);

  ExperimentConfig b;
  b.experiment = Experiment::box_dim_sweep;
  CHECK(effective_config(b).angles.value_or(0) == 360);
}

TEST_CASE("json overlay") {
  ExperimentConfig c;
  apply_json_config(c, R"({"n": "2..5", "c": 3.0, "seed": 9, "vantages": [[0.5, -10]]})");
  CHECK(c.n_lo == 2);
  CHECK(c.n_hi == 5);
  CHECK(c.c == 3.0);
  CHECK(c.seed == 9);
  REQUIRE(c.vantages.size() == 1);
  CHECK(c.vantages[0] == Point2{0.5, -10});
  CHECK_THROWS_AS(apply_json_config(c, R"({"unknown_key": 1})"), InvalidInput);
  CHECK_THROWS_AS(apply_json_config(c, "{broken"), InvalidInput);

  ExperimentConfig round;
  apply_json_config(round, config_to_json(c));
  CHECK(config_to_json(round) == config_to_json(c));
}

TEST_CASE("favard-scaling writes one non-increasing row per depth") {
  auto c = config(Experiment::favard_scaling, "favard.csv");
  c.n_lo = 1;
  c.n_hi = 6;
  const auto r = run(c);
  REQUIRE(r.exit_code == kExitOk);
  const auto j = sidecar(r);
  const auto& rows = j["results"]["rows"];
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(rows[i]["favard"].get<double>() <= rows[i - 1]["favard"].get<double>() + 1e-12);
  CHECK(j["experiment"] == "favard-scaling");
  CHECK(j["config"]["seed"] == 1);
  CHECK(j.contains("version"));
  CHECK(j.contains("wall_time_s"));
}

TEST_CASE("visibility-point") {
  auto c = config(Experiment::visibility_point, "vis.csv");
  c.vantages = {{0.5, -10}};
  const auto r = run(c);
  REQUIRE(r.exit_code == kExitOk);
  const double v = sidecar(r)["results"]["rows"][0]["vis"].get<double>();
  CHECK(v > 0);
  CHECK(v < 1);
}

TEST_CASE("certify-set outcome depends on C through the line condition") {
  auto c = config(Experiment::certify_set, "cert64.csv");
  c.C = 64;
  const auto low = run(c);
  REQUIRE(low.exit_code == kExitOk);
  CHECK(sidecar(low)["results"]["passes"] == false);

  c.C = 256;
  c.out = scratch("cert256.csv").string();
  const auto high = run(c);
  REQUIRE(high.exit_code == kExitOk);
  CHECK(sidecar(high)["results"]["passes"] == true);
}

TEST_CASE("fixed seed reproduces the csv byte for byte") {
  auto c = config(Experiment::generic_census, "census_a.csv");
  c.n_lo = 4;
  c.n_hi = 8;
  c.samples = 5000;
  c.seed = 77;
  const auto a = run(c);
  c.out = scratch("census_b.csv").string();
  const auto b = run(c);
  REQUIRE(a.exit_code == kExitOk);
  REQUIRE(b.exit_code == kExitOk);
  CHECK(slurp(a.csv_path) == slurp(b.csv_path));
  CHECK_FALSE(slurp(a.csv_path).empty());
}

TEST_CASE("exit codes from run") {
  ExperimentConfig bad;
  bad.k = 3;
  CHECK(run(bad).exit_code == kExitValidation);

  ExperimentConfig huge;
  huge.experiment = Experiment::energy;
  huge.n_lo = huge.n_hi = 12;
  const auto r = run(huge);
  CHECK(r.exit_code == kExitResource);
  CHECK(r.message.find("node budget") != std::string::npos);
}

TEST_CASE("command line") {
  CHECK(cli("--version") == 0);
  CHECK(cli("bogus") == kExitValidation);
  CHECK(slurp(scratch("cli.log")).find("favard-scaling") != std::string::npos);
  CHECK(cli("energy --n 12 --out " + scratch("e.csv").string()) == kExitResource);
  CHECK(cli("favard-scaling --n 1..3 --k 7 --out " + scratch("f.csv").string()) == kExitValidation);

  const auto out = scratch("cli_fav.csv");
  REQUIRE(cli("favard-scaling --n 1..3 --angles 512 --out " + out.string()) == 0);
  const auto j = json::parse(slurp(fs::path(out).replace_extension(".json")));
  CHECK(j["results"]["rows"].size() == 3);
  CHECK(j["config"]["angles"] == 512);

  // config file first, explicit flags win
  const auto cfg = scratch("cfg.json");
  std::ofstream(cfg) << R"({"n": "1..2", "angles": 256})";
  const auto out2 = scratch("cli_cfg.csv");
  REQUIRE(cli("favard-scaling --config " + cfg.string() + " --angles 128 --out " + out2.string()) == 0);
  const auto j2 = json::parse(slurp(fs::path(out2).replace_extension(".json")));
  CHECK(j2["config"]["angles"] == 128);
  CHECK(j2["results"]["rows"].size() == 2);
}

}  // TEST_SUITE
