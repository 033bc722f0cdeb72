#include "exlab/solvers/sigma.hpp"

#include <cmath>
#include <stdexcept>

#include "exlab/errors.hpp"

namespace exlab::solvers {
namespace {
// min of sin(z)/z, attained near z = 4.4934
constexpr double kSincMin = -0.21723362821122166;
}  // namespace

SigmaSpec sigma_linear() {
  return {"linear", [](double z) { return z; }, 1.0, 1.0, true, true};
}

SigmaSpec sigma_scaled_sin_plus_linear(double a, double b) {
  if (!(b >= 0.0 && a + kSincMin * b > 0.0)) {
    throw std::invalid_argument("scaled_sin_plus_linear: need b >= 0 and a > 0.2172 b");
  }
  return {"scaled_sin_plus_linear", [a, b](double z) { return a * z + b * std::sin(z); },
          a + kSincMin * b, a + b, true, false};
}

SigmaSpec sigma_from_name(std::string_view name) {
  if (name == "linear") return sigma_linear();
  if (name == "scaled_sin_plus_linear") return sigma_scaled_sin_plus_linear();
  throw ConfigError("unknown sigma '" + std::string(name) +
                    "' (valid: linear, scaled_sin_plus_linear)");
}

std::vector<std::string> sigma_names() { return {"linear", "scaled_sin_plus_linear"}; }

}  // namespace exlab::solvers
