#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "exlab/excitation/index.hpp"
#include "exlab/excitation/monte_carlo.hpp"
#include "exlab/solvers/spde.hpp"

namespace exlab::excitation {

// measured and bound are natural logs of the compared quantities, so rows stay
// finite where the quantities themselves would overflow. slack is
// bound - measured for upper checks and measured - bound for lower checks.
struct BoundCheckRow {
  double lambda;
  double t;
  std::string check_name;
  double measured;
  double bound;
  double slack;
  double allowance;  // relative Monte Carlo allowance that was granted
  bool pass;
};

struct BoundCheckReport {
  std::vector<BoundCheckRow> rows;

  std::size_t passed() const noexcept;
  std::size_t failed() const noexcept { return rows.size() - passed(); }
  bool all_pass() const noexcept { return failed() == 0; }
};

inline constexpr char kGronwallUpper[] = "gronwall_upper";
inline constexpr char kSpectralLower[] = "spectral_lower";

// Relative allowances below this are raised to it, so a zero-variance
// estimator that attains a bound with equality is not failed by rounding.
inline constexpr double kRoundoffAllowance = 1e-9;

// E ||u(t)||^2 <= ||u0||^2 exp(L_sigma^2 q1 lambda^2 t) with allowance
// 3 x (relative standard error of the second moment). q1 = 1 for a single
// Brownian motion, sup_x q(x, x) for Q-Wiener noise. Requires p = 2.
BoundCheckReport gronwall_upper_check(const EnergyCurve& curve, double L_sigma, double u0_energy,
                                      double q1 = 1.0);

// E u_hat(t)^2 >= (u0, phi)^2 exp((lambda^2 l_sigma^2 q0 - 2 lambda_1) t), with
// q0 = 1 for a single Brownian motion and the declared lower envelope of the
// kernel for Q-Wiener noise. Estimates the left side by Monte Carlo per lambda.
BoundCheckReport spectral_lower_check(const solvers::SpdeProblem& problem,
                                      std::span<const double> lambdas,
                                      const MonteCarloOptions& options);

// Rows ordered by lambda, then check name.
void sort_rows(std::vector<BoundCheckRow>& rows);

}  // namespace exlab::excitation
