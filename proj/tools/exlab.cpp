// exlab: run excitation-index experiments and write CSV/JSON results.
//
//   exlab list
//   exlab run --scenario gbm --samples 100000 --out out/gbm
//   exlab run --config experiment.json --lambda-grid 4,8,16,32
//
// Exit codes: 0 success, 2 configuration error, 3 numeric overflow,
// 4 bound-check failure under --strict, 1 anything else.

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "exlab/cli/config.hpp"
#include "exlab/cli/run.hpp"
#include "exlab/cli/scenarios.hpp"
#include "exlab/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitOverflow = 3;
constexpr int kExitStrict = 4;

struct RunFlags {
  std::string config_path;
  std::optional<std::string> scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> lambda_grid;
  std::optional<std::size_t> samples;
  std::optional<double> t;
  std::optional<double> alpha;
  std::optional<double> p;
  bool strict = false;
};

int do_run(const RunFlags& flags) {
  using namespace exlab::cli;
  ExperimentConfig cfg = flags.config_path.empty() ? ExperimentConfig{} : load_config(flags.config_path);
  if (flags.scenario) cfg.scenario = *flags.scenario;
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.out) cfg.out = *flags.out;
  if (flags.lambda_grid) cfg.lambda_grid = parse_lambda_grid(*flags.lambda_grid);
  if (flags.samples) cfg.samples = *flags.samples;
  if (flags.t) cfg.t = *flags.t;
  if (flags.alpha) cfg.alpha = *flags.alpha;
  if (flags.p) cfg.p = *flags.p;
  if (flags.strict) cfg.strict = true;

  const ExperimentConfig resolved = resolve(cfg);
  const RunResult result = run(resolved);
  write_outputs(result, resolved.out);

  const auto& s = result.summary;
  std::cout << "scenario " << resolved.scenario << " -> " << resolved.out << "\n";
  for (const auto& e : s["energies"]) {
    std::cout << "  lambda=" << e["lambda"].get<double>() << "  log_energy=" << e["log_energy"].get<double>()
              << "  stderr=" << e["stderr"].get<double>() << "\n";
  }
  if (!s["index"].is_null()) {
    std::cout << "  index proxies: lower=" << s["index"]["lower"].get<double>()
              << " upper=" << s["index"]["upper"].get<double>() << "\n";
  } else if (s.contains("index_note")) {
    std::cout << "  index: " << s["index_note"].get<std::string>() << "\n";
  }
  const auto failed = s["bounds"]["failed"].get<std::size_t>();
  if (s["bounds"]["checked"].get<std::size_t>() > 0) {
    std::cout << "  bounds: " << s["bounds"]["passed"].get<std::size_t>() << " passed, " << failed
              << " failed\n";
  }
  if (resolved.strict && failed > 0) {
    std::cerr << "exlab: " << failed << " bound check(s) failed (--strict)\n";
    return kExitStrict;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noise-excitation experiments for stochastic heat equations"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List the available scenarios");
  auto* run = app.add_subcommand("run", "Run one scenario and write energy_curve.csv, bounds.csv, summary.json");
  RunFlags flags;
  run->add_option("--config", flags.config_path, "JSON config (flat keys; a summary.json also works)");
  run->add_option("--scenario", flags.scenario, "Scenario name (see `exlab list`)");
  run->add_option("--seed", flags.seed, "Base seed");
  run->add_option("--out", flags.out, "Output directory");
  run->add_option("--lambda-grid", flags.lambda_grid, "Comma-separated ascending lambda values");
  run->add_option("--samples", flags.samples, "Monte Carlo sample count");
  run->add_option("--t", flags.t, "Time horizon");
  run->add_option("--alpha", flags.alpha, "Stable index for fractional-renewal");
  run->add_option("--p", flags.p, "Moment order");
  run->add_flag("--strict", flags.strict, "Exit with code 4 if any bound check fails");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (list->parsed()) {
      for (const auto& s : exlab::cli::scenario_registry()) {
        std::cout << s.name << "\t[" << s.anchor << "]\t" << s.description << "\n";
      }
      return kExitOk;
    }
    return do_run(flags);
  } catch (const exlab::ConfigError& e) {
    std::cerr << "exlab: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const exlab::NumericOverflow& e) {
    std::cerr << "exlab: numeric overflow: " << e.what() << "\n";
    return kExitOverflow;
  } catch (const std::exception& e) {
    std::cerr << "exlab: " << e.what() << "\n";
    return kExitOther;
  }
}
