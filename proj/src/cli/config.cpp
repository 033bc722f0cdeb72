#include "exlab/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "exlab/cli/scenarios.hpp"
#include "exlab/errors.hpp"
#include "exlab/solvers/sigma.hpp"

namespace exlab::cli {
namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "scenario", "L",     "n",      "t",       "dt",            "lambda_grid",    "samples",
      "p",        "alpha", "sigma",  "u0",      "u0_c1",         "u0_c2",          "u0_l",
      "noise",    "kernel", "q0",    "kernel_length", "sampler", "estimator",      "tilt",
      "volterra_steps", "fit_window", "gbm_x", "seed", "out",    "strict"};
  return keys;
}

template <class T>
T get_as(const json& doc, const std::string& key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

double get_number(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return v.get<double>();
}

std::size_t get_count(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError("config key '" + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::string get_string(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void require_one_of(const std::string& key, const std::string& value,
                    std::initializer_list<const char*> allowed) {
  std::string list;
  for (const char* a : allowed) {
    if (value == a) return;
    if (!list.empty()) list += ", ";
    list += a;
  }
  throw ConfigError(key + " '" + value + "' is not one of: " + list);
}

struct ScenarioDefaults {
  double t;
  std::vector<double> lambda_grid;
  std::size_t samples;
  const char* u0;
  const char* noise;
  const char* kernel;
  const char* sampler;
  const char* estimator;
  const char* tilt;
};

ScenarioDefaults defaults_for(const std::string& scenario) {
  const std::vector<double> sims{4, 8, 16, 32};
  // Tilted scheme trajectories grow like exp(3 lambda^2 t / 2); at lambda = 32
  // that leaves double range, so the time-stepped scenarios stop at 24.
  const std::vector<double> stepped{3, 6, 12, 24};
  if (scenario == "gbm")
    return {1.0, {1}, 100000, "constant-band", "single_bm", "constant", "exact", "mc", "none"};
  if (scenario == "linear-exact-index")
    return {0.5, sims, 1000, "constant-band", "single_bm", "constant", "exact", "closed_form", "auto"};
  if (scenario == "single-bm-sim")
    return {0.5, stepped, 500, "constant-band", "single_bm", "constant", "scheme", "mc", "auto"};
  if (scenario == "qwiener-sim")
    return {0.5, stepped, 200, "constant-band", "q_wiener", "exponential", "scheme", "mc", "auto"};
  if (scenario == "lp-moments")
    return {0.5, sims, 1000, "constant-band", "single_bm", "constant", "exact", "mc", "auto"};
  if (scenario == "fractional-renewal")
    return {1.0, {8, 16, 32, 64}, 0, "delta", "single_bm", "constant", "exact", "closed_form", "none"};
  if (scenario == "bounds")
    return {0.5, {2, 4, 8}, 5000, "eigenfunction", "single_bm", "constant", "exact", "mc", "auto"};
  // stwn-best-effort
  return {0.5, {0.5, 1, 2, 4}, 200, "constant-band", "space_time_white", "constant", "scheme", "mc", "none"};
}

}  // namespace

ExperimentConfig config_from_json(const json& input) {
  const json* doc = &input;
  if (doc->is_object() && doc->contains("config") && (*doc)["config"].is_object()) {
    doc = &(*doc)["config"];
  }
  if (!doc->is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : doc->items()) {
    if (!known_keys().count(key)) throw ConfigError("unknown config key '" + key + "'");
  }

  ExperimentConfig c;
  const json& d = *doc;
  auto has = [&](const char* key) { return d.contains(key) && !d[key].is_null(); };

  if (has("scenario")) c.scenario = get_string(d, "scenario");
  if (has("L")) c.L = get_number(d, "L");
  if (has("n")) c.n = get_count(d, "n");
  if (has("t")) c.t = get_number(d, "t");
  if (has("dt")) c.dt = get_number(d, "dt");
  if (has("lambda_grid")) {
    const json& g = d["lambda_grid"];
    if (g.is_string()) {
      c.lambda_grid = parse_lambda_grid(g.get<std::string>());
    } else {
      c.lambda_grid = get_as<std::vector<double>>(d, "lambda_grid");
    }
  }
  if (has("samples")) c.samples = get_count(d, "samples");
  if (has("p")) c.p = get_number(d, "p");
  if (has("alpha")) c.alpha = get_number(d, "alpha");
  if (has("sigma")) c.sigma = get_string(d, "sigma");
  if (has("u0")) c.u0 = get_string(d, "u0");
  if (has("u0_c1")) c.u0_c1 = get_number(d, "u0_c1");
  if (has("u0_c2")) c.u0_c2 = get_number(d, "u0_c2");
  if (has("u0_l")) c.u0_l = get_number(d, "u0_l");
  if (has("noise")) c.noise = get_string(d, "noise");
  if (has("kernel")) c.kernel = get_string(d, "kernel");
  if (has("q0")) c.q0 = get_number(d, "q0");
  if (has("kernel_length")) c.kernel_length = get_number(d, "kernel_length");
  if (has("sampler")) c.sampler = get_string(d, "sampler");
  if (has("estimator")) c.estimator = get_string(d, "estimator");
  if (has("tilt")) {
    const json& v = d["tilt"];
    if (v.is_number()) {
      std::ostringstream s;
      s.precision(17);
      s << v.get<double>();
      c.tilt = s.str();
    } else {
      c.tilt = get_string(d, "tilt");
    }
  }
  if (has("volterra_steps")) c.volterra_steps = get_count(d, "volterra_steps");
  if (has("fit_window")) c.fit_window = get_count(d, "fit_window");
  if (has("gbm_x")) c.gbm_x = get_number(d, "gbm_x");
  if (has("seed")) {
    const json& seed = d["seed"];
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
      throw ConfigError("config key 'seed' must be a non-negative integer");
    }
    c.seed = seed.get<std::uint64_t>();
  }
  if (has("out")) c.out = get_string(d, "out");
  if (has("strict")) c.strict = get_as<bool>(d, "strict");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(doc);
}

ExperimentConfig resolve(ExperimentConfig c) {
  require(!c.scenario.empty(), "config has no scenario");
  find_scenario(c.scenario);
  const ScenarioDefaults def = defaults_for(c.scenario);
  if (!c.t) c.t = def.t;
  if (!c.lambda_grid) c.lambda_grid = def.lambda_grid;
  if (!c.samples) c.samples = def.samples;
  if (!c.u0) c.u0 = def.u0;
  if (!c.noise) c.noise = def.noise;
  if (!c.kernel) c.kernel = def.kernel;
  if (!c.sampler) c.sampler = def.sampler;
  if (!c.estimator) c.estimator = def.estimator;
  if (!c.tilt) c.tilt = def.tilt;

  const bool renewal = c.scenario == "fractional-renewal";
  const bool gbm = c.scenario == "gbm";

  require(std::isfinite(c.L) && c.L > 0.0, "L must be positive");
  require(c.n >= 1, "n must be at least 1");
  require(std::isfinite(*c.t) && *c.t > 0.0, "t must be positive");
  require(std::isfinite(c.dt) && c.dt > 0.0, "dt must be positive");
  require(!c.lambda_grid->empty(), "lambda_grid must not be empty");
  for (std::size_t i = 0; i < c.lambda_grid->size(); ++i) {
    const double l = (*c.lambda_grid)[i];
    require(std::isfinite(l) && l >= 0.0, "lambda_grid entries must be finite and >= 0");
    require(i == 0 || l > (*c.lambda_grid)[i - 1], "lambda_grid must ascend strictly");
  }
  require(std::isfinite(c.p) && c.p > 0.0, "p must be positive");
  require(c.fit_window >= 1, "fit_window must be at least 1");
  require(!c.out.empty(), "out must not be empty");
  solvers::sigma_from_name(c.sigma);
  require_one_of("sampler", *c.sampler, {"exact", "scheme"});
  require_one_of("estimator", *c.estimator, {"closed_form", "mc"});
  require_one_of("noise", *c.noise, {"single_bm", "q_wiener", "space_time_white"});
  require_one_of("kernel", *c.kernel, {"constant", "exponential"});
  require(c.q0 > 0.0 && std::isfinite(c.q0), "q0 must be positive");
  require(c.kernel_length > 0.0 && std::isfinite(c.kernel_length), "kernel_length must be positive");
  parse_tilt(*c.tilt);

  if (renewal) {
    require(c.alpha > 1.0 && c.alpha <= 2.0, "alpha must lie in (1, 2]");
    require_one_of("u0 (fractional-renewal)", *c.u0, {"delta", "indicator"});
    require(c.u0_l > 0.0, "u0_l must be positive");
    require(c.volterra_steps >= 2, "volterra_steps must be at least 2");
    require(c.p == 2.0, "fractional-renewal computes second moments; p must be 2");
  } else if (gbm) {
    require(c.gbm_x > 0.0 && std::isfinite(c.gbm_x), "gbm_x must be positive");
    require(*c.samples >= 2, "samples must be at least 2");
  } else {
    require_one_of("u0", *c.u0, {"eigenfunction", "indicator", "constant-band"});
    if (*c.u0 == "constant-band") {
      require(c.u0_c1 > 0.0 && c.u0_c1 <= c.u0_c2, "constant-band needs 0 < u0_c1 <= u0_c2");
    }
    if (*c.u0 == "indicator") {
      require(c.u0_l > 0.0 && 2.0 * c.u0_l < c.L, "indicator needs 0 < 2 u0_l < L");
    }
    const bool closed_form = c.scenario == "linear-exact-index" && *c.estimator == "closed_form";
    if (!closed_form) require(*c.samples >= 2, "samples must be at least 2");
    if (*c.noise == "q_wiener") require(c.n <= 1024, "q_wiener noise uses a dense factor; n must be <= 1024");
    if (*c.sampler == "exact") {
      require(c.sigma == "linear", "sampler=exact requires sigma=linear");
      require(*c.noise != "space_time_white", "sampler=exact is not available for space_time_white noise");
      require(*c.noise != "q_wiener" || *c.kernel == "constant",
              "sampler=exact with q_wiener noise requires kernel=constant");
    } else {
      const double steps = std::round(*c.t / c.dt);
      require(steps >= 1.0 && std::abs(steps * c.dt - *c.t) <= 1e-9 * *c.t, "t must be a multiple of dt");
      require(*c.noise != "space_time_white" || parse_tilt(*c.tilt) == 0.0,
              "tilting is not available for space_time_white noise (use tilt=none)");
    }
    const char* fixed_noise = c.scenario == "single-bm-sim" ? "single_bm"
                              : c.scenario == "qwiener-sim" ? "q_wiener"
                              : c.scenario == "stwn-best-effort" ? "space_time_white"
                                                                   : nullptr;
    if (fixed_noise != nullptr) {
      require(*c.noise == fixed_noise, c.scenario + " requires noise=" + fixed_noise);
    }
    require(*c.noise != "space_time_white" || *c.sampler == "scheme",
            "space_time_white noise requires sampler=scheme");
    if (c.scenario == "bounds") require(c.p == 2.0, "bounds compares second moments; p must be 2");
    if (c.scenario == "linear-exact-index") {
      require(c.sigma == "linear", "linear-exact-index requires sigma=linear");
    }
  }
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["scenario"] = c.scenario;
  j["L"] = c.L;
  j["n"] = c.n;
  j["t"] = c.t ? json(*c.t) : json(nullptr);
  j["dt"] = c.dt;
  j["lambda_grid"] = c.lambda_grid ? json(*c.lambda_grid) : json(nullptr);
  j["samples"] = c.samples ? json(*c.samples) : json(nullptr);
  j["p"] = c.p;
  j["alpha"] = c.alpha;
  j["sigma"] = c.sigma;
  j["u0"] = c.u0 ? json(*c.u0) : json(nullptr);
  j["u0_c1"] = c.u0_c1;
  j["u0_c2"] = c.u0_c2;
  j["u0_l"] = c.u0_l;
  j["noise"] = c.noise ? json(*c.noise) : json(nullptr);
  j["kernel"] = c.kernel ? json(*c.kernel) : json(nullptr);
  j["q0"] = c.q0;
  j["kernel_length"] = c.kernel_length;
  j["sampler"] = c.sampler ? json(*c.sampler) : json(nullptr);
  j["estimator"] = c.estimator ? json(*c.estimator) : json(nullptr);
  j["tilt"] = c.tilt ? json(*c.tilt) : json(nullptr);
  j["volterra_steps"] = c.volterra_steps;
  j["fit_window"] = c.fit_window;
  j["gbm_x"] = c.gbm_x;
  j["seed"] = c.seed;
  j["out"] = c.out;
  j["strict"] = c.strict;
  return j;
}

std::vector<double> parse_lambda_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw ConfigError("empty entry in lambda grid '" + text + "'");
    const std::string token = item.substr(first, last - first + 1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw ConfigError("lambda grid entry '" + token + "' is not a number");
    }
    out.push_back(value);
  }
  if (out.empty()) throw ConfigError("lambda grid is empty");
  return out;
}

std::optional<double> parse_tilt(const std::string& text) {
  if (text == "auto") return std::nullopt;
  if (text == "none") return 0.0;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ConfigError("tilt must be 'none', 'auto' or a number (got '" + text + "')");
  }
  return value;
}

}  // namespace exlab::cli
