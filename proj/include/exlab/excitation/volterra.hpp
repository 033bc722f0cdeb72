#pragma once

#include <cstddef>
#include <functional>
#include <variant>
#include <vector>

namespace exlab::excitation {

// g(t) = coef * t^exponent, exponent > -1.
struct PowerLawForcing {
  double coef;
  double exponent;
};

// g at the nodes t_j = j T / n, j = 0..n.
struct SampledForcing {
  std::vector<double> values;
};

using Forcing = std::variant<PowerLawForcing, std::function<double(double)>, SampledForcing>;

enum class VolterraMode {
  // f itself. Holding f at the left node under-counts its growth, so the
  // log error is about r^2 h T, and f overflows once r T reaches ~700.
  plain,
  // h(t) = e^{-r t} f(t) with r = (k Gamma(beta))^{1/beta}. The kernel
  // k e^{-r u} u^{beta-1} then has unit mass, h stays O(1) and log f = r t + log h.
  tempered,
  // tempered when k > 0
  automatic,
};

// f(t) = g(t) + k int_0^t (t - s)^{beta - 1} f(s) ds on [0, horizon].
struct RenewalProblem {
  Forcing forcing;
  double gain = 0.0;  // k
  double beta = 1.0;
  double horizon = 1.0;
  std::size_t steps = 1000;
  VolterraMode mode = VolterraMode::automatic;

  void validate() const;
  // (k Gamma(beta))^{1/beta}
  double tempering_rate() const;
};

struct VolterraSolution {
  double step;
  double rate;                      // r used for tempering, 0 for plain
  std::vector<double> log_values;   // log f(t_j), j = 0..n
  std::vector<double> scaled;       // e^{-rate t_j} f(t_j)

  double log_final() const { return log_values.back(); }
  // f(t_j); throws NumericOverflow if any value exceeds double range
  std::vector<double> values() const;
};

// Product integration: on each panel [t_j, t_{j+1}] f is held at t_j and the
// kernel is integrated exactly, giving the explicit recursion
//   f_n = g_n + sum_{j<n} w_{n-j} f_j,  w_m = int_{(m-1)h}^{mh} k u^{beta-1} du
// (tempered: the same with e^{-ru} in the kernel). A power-law forcing that is
// singular at 0 uses its mean over the first panel at t_0.
// Plain-mode overflow throws NumericOverflow advising the tempered mode.
VolterraSolution volterra_solve(const RenewalProblem& problem);

}  // namespace exlab::excitation
