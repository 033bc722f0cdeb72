#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace exlab::cli {

// Flat experiment configuration. Optional fields get scenario-dependent
// defaults in resolve(); the resolved form is what runs and what is echoed
// into summary.json.
struct ExperimentConfig {
  std::string scenario;
  // grid
  double L = 1.0;
  std::size_t n = 64;
  // time
  std::optional<double> t;
  double dt = 1e-4;
  // excitation
  std::optional<std::vector<double>> lambda_grid;
  std::optional<std::size_t> samples;
  double p = 2.0;
  double alpha = 1.5;
  std::string sigma = "linear";
  // initial data: eigenfunction | indicator | delta | constant-band
  std::optional<std::string> u0;
  double u0_c1 = 200.0;
  double u0_c2 = 200.0;
  double u0_l = 0.25;  // indicator half width
  // noise: single_bm | q_wiener | space_time_white (bounds scenario)
  std::optional<std::string> noise;
  std::optional<std::string> kernel;  // constant | exponential
  double q0 = 1.0;                     // constant kernel value
  double kernel_length = 1.0;          // exponential kernel length scale
  // sampler: exact | scheme; estimator: closed_form | mc
  std::optional<std::string> sampler;
  std::optional<std::string> estimator;
  std::optional<std::string> tilt;  // none | auto | <number>
  std::size_t volterra_steps = 20000;
  std::size_t fit_window = 3;
  double gbm_x = 1.0;
  std::uint64_t seed = 20240601;
  std::string out = "out";
  bool strict = false;
};

// Parses a flat JSON object. A document of the form {"config": {...}, ...}
// (such as a summary.json) is unwrapped first. Unknown keys and wrong types
// throw ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

// Fills scenario defaults and validates; throws ConfigError.
ExperimentConfig resolve(ExperimentConfig config);

// All keys, including resolved optionals.
nlohmann::json config_to_json(const ExperimentConfig& config);

// "4,8,16,32" -> {4, 8, 16, 32}
std::vector<double> parse_lambda_grid(const std::string& text);

// "none" -> 0, "auto" -> nullopt (the zero-variance drift for each lambda),
// otherwise the number itself.
std::optional<double> parse_tilt(const std::string& text);

}  // namespace exlab::cli
