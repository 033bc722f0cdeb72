#include "exlab/cli/scenarios.hpp"

#include "exlab/errors.hpp"

namespace exlab::cli {

const std::vector<ScenarioInfo>& scenario_registry() {
  static const std::vector<ScenarioInfo> registry{
      {"gbm", "scalar GBM moments x^p exp(lambda^2 p(p-1) t/2)",
       "Monte Carlo p-th moment of dX = lambda X dB against its closed form"},
      {"linear-exact-index", "index 2 for the linear equation, single Brownian noise",
       "closed-form energy curve of the exact linear solution and its double-log slopes"},
      {"single-bm-sim", "index 2 for Lipschitz sigma, single Brownian noise",
       "semi-implicit simulation of du = u_xx dt + lambda sigma(u) dB_t and index fit"},
      {"qwiener-sim", "index 2 for Lipschitz sigma, Q-Wiener noise with q >= q0 > 0",
       "semi-implicit simulation with spatially correlated noise and index fit"},
      {"lp-moments", "index 2 for p-th moments, initial data in a positive band",
       "exact-sampler Monte Carlo of [E ||u(t)||_p^p]^{1/p} and index fit"},
      {"fractional-renewal", "index 2 alpha/(alpha-1) for the fractional equation",
       "second-moment Volterra renewal equation on the line and index fit"},
      {"bounds", "Gronwall upper bound and spectral (principal eigenpair) lower bound",
       "Monte Carlo certificates of the exponential moment bounds per lambda"},
      {"stwn-best-effort", "space-time white noise (index 4 expected)",
       "best-effort direct simulation; not resolvable at large lambda^2 t"},
  };
  return registry;
}

const ScenarioInfo& find_scenario(std::string_view name) {
  for (const auto& s : scenario_registry()) {
    if (s.name == name) return s;
  }
  std::string valid;
  for (const auto& s : scenario_registry()) {
    if (!valid.empty()) valid += ", ";
    valid += s.name;
  }
  throw ConfigError("unknown scenario '" + std::string(name) + "'; valid scenarios: " + valid);
}

}  // namespace exlab::cli
