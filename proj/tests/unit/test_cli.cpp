#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "exlab/cli/config.hpp"
#include "exlab/cli/run.hpp"
#include "exlab/cli/scenarios.hpp"
#include "exlab/errors.hpp"

using namespace exlab;
using namespace exlab::cli;
using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

ExperimentConfig small(const std::string& scenario) {
  ExperimentConfig c;
  c.scenario = scenario;
  c.n = 16;
  c.samples = 200;
  return c;
}

}  // namespace

TEST_CASE("scenario registry") {
  const auto& reg = scenario_registry();
  REQUIRE(reg.size() == 8);
  std::set<std::string> names;
  for (const auto& s : reg) {
    names.insert(s.name);
    CHECK_FALSE(s.anchor.empty());
    CHECK_FALSE(s.description.empty());
  }
  CHECK(names == std::set<std::string>{"gbm", "linear-exact-index", "single-bm-sim", "qwiener-sim",
                                       "lp-moments", "fractional-renewal", "bounds",
                                       "stwn-best-effort"});
  try {
    find_scenario("heat");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("fractional-renewal") != std::string::npos);
  }
}

TEST_CASE("config parsing") {
  const auto c = config_from_json(json{{"scenario", "gbm"}, {"lambda_grid", "1,2,3"}, {"samples", 10}});
  CHECK(c.lambda_grid == std::vector<double>{1, 2, 3});
  CHECK(c.samples == std::size_t{10});
  CHECK_THROWS_AS(config_from_json(json{{"scenario", "gbm"}, {"lamda_grid", "1"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"scenario", "gbm"}, {"samples", "many"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::array()), ConfigError);
  // summary.json documents are unwrapped
  const auto wrapped = config_from_json(json{{"config", {{"scenario", "bounds"}}}, {"energies", json::array()}});
  CHECK(wrapped.scenario == "bounds");

  CHECK(parse_lambda_grid(" 4, 8,16 ") == std::vector<double>{4, 8, 16});
  CHECK_THROWS_AS(parse_lambda_grid("4,x"), ConfigError);
  CHECK(parse_tilt("none") == 0.0);
  CHECK_FALSE(parse_tilt("auto").has_value());
  CHECK(parse_tilt("1.5") == 1.5);
  CHECK_THROWS_AS(parse_tilt("sideways"), ConfigError);
}

TEST_CASE("resolve fills defaults and validates") {
  ExperimentConfig c;
  c.scenario = "linear-exact-index";
  const auto r = resolve(c);
  CHECK(r.t == 0.5);
  CHECK(r.lambda_grid == std::vector<double>{4, 8, 16, 32});
  CHECK(r.sampler == std::string("exact"));

  c.scenario = "fractional-renewal";
  CHECK(resolve(c).u0 == std::string("delta"));
  c.alpha = 2.5;
  CHECK_THROWS_AS(resolve(c), ConfigError);

  ExperimentConfig d;
  d.scenario = "linear-exact-index";
  d.lambda_grid = std::vector<double>{4, 2};
  CHECK_THROWS_AS(resolve(d), ConfigError);
  d.lambda_grid.reset();
  d.sigma = "scaled_sin_plus_linear";
  CHECK_THROWS_AS(resolve(d), ConfigError);  // exact sampler needs sigma(u) = u

  ExperimentConfig e;
  e.scenario = "nope";
  CHECK_THROWS_AS(resolve(e), ConfigError);
}

TEST_CASE("csv formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0 / 0.0) == "inf");
  CHECK(format_double(-1.0 / 0.0) == "-inf");
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");

  excitation::EnergyCurve curve;
  curve.t = 0.5;
  curve.p = 2;
  curve.lambdas = {4};
  curve.log_energy = {1.25};
  curve.stderr_log = {0.0};
  curve.samples = {10};
  std::ostringstream out;
  write_energy_curve_csv(out, curve);
  CHECK(out.str() == "lambda,t,p,log_energy,stderr,samples\r\n4,0.5,2,1.25,0,10\r\n");

  std::ostringstream b;
  write_bounds_csv(b, {{2, 0.5, excitation::kGronwallUpper, 1, 2, 1, 0, true}});
  CHECK(b.str() == "lambda,t,check_name,measured,bound,slack,pass\r\n2,0.5,gronwall_upper,1,2,1,true\r\n");
}

TEST_CASE("outputs are reproducible from the echoed config") {
  const auto dir = std::filesystem::temp_directory_path() / "exlab_cli_roundtrip";
  std::filesystem::remove_all(dir);
  auto cfg = small("linear-exact-index");
  cfg.estimator = "mc";
  cfg.out = (dir / "a").string();
  const auto first = run(resolve(cfg));
  write_outputs(first, dir / "a");
  for (const char* f : {"energy_curve.csv", "bounds.csv", "summary.json", "timing.json"})
    CHECK(std::filesystem::exists(dir / "a" / f));

  const auto reread = resolve(load_config((dir / "a" / "summary.json").string()));
  const auto second = run(reread);
  write_outputs(second, dir / "b");
  CHECK(slurp(dir / "a" / "summary.json") == slurp(dir / "b" / "summary.json"));
  CHECK(slurp(dir / "a" / "energy_curve.csv") == slurp(dir / "b" / "energy_curve.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("thread count does not change results") {
  auto cfg = resolve([] {
    auto c = small("single-bm-sim");
    c.t = 0.05;
    c.samples = 40;
    c.lambda_grid = std::vector<double>{1, 2};
    return c;
  }());
  ::setenv("EXLAB_THREADS", "1", 1);
  const auto one = run(cfg).summary.dump();
  ::setenv("EXLAB_THREADS", "3", 1);
  const auto three = run(cfg).summary.dump();
  ::unsetenv("EXLAB_THREADS");
  CHECK(one == three);
}

TEST_CASE("every scenario runs on a small configuration") {
  for (const auto& s : scenario_registry()) {
    CAPTURE(s.name);
    auto c = small(s.name);
    if (s.name == "fractional-renewal") {
      c.samples.reset();
      c.volterra_steps = 2000;
    } else if (s.name != "gbm") {
      c.t = 0.05;
      c.lambda_grid = std::vector<double>{1, 2};
    }
    const auto r = run(resolve(c));
    CHECK(r.summary["scenario"] == s.name);
    CHECK(r.summary["anchor"] == s.anchor);
    CHECK(r.curve.size() == r.config.lambda_grid->size());
    if (s.name == "bounds") CHECK(r.bounds.size() == 4);
  }
}
