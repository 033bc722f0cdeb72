#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace exlab::solvers {

// Multiplicative noise coefficient with its Lipschitz envelope
//   l_sigma |z| <= |sigma(z)| <= L_sigma |z|.
struct SigmaSpec {
  std::string name;
  std::function<double(double)> eval;
  double l_sigma;
  double L_sigma;
  bool sign_definite;  // sigma(z) has the sign of z
  bool is_linear;      // sigma(z) = z exactly
};

SigmaSpec sigma_linear();

// a z + b sin z. |sigma(z)/z| = |a + b sinc z| with sinc ranging over
// [-0.2172336..., 1], so for a > 0.2172336 b both envelopes are positive.
SigmaSpec sigma_scaled_sin_plus_linear(double a = 1.0, double b = 0.5);

// Registry used by configs: "linear" | "scaled_sin_plus_linear".
SigmaSpec sigma_from_name(std::string_view name);
std::vector<std::string> sigma_names();

}  // namespace exlab::solvers
