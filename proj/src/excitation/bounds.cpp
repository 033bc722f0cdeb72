#include "exlab/excitation/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "exlab/errors.hpp"
#include "exlab/simd/kernels.hpp"

namespace exlab::excitation {
namespace {

double allowance_for(double relative_stderr) {
  return std::max(3.0 * relative_stderr, kRoundoffAllowance);
}

}  // namespace

std::size_t BoundCheckReport::passed() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const BoundCheckRow& r) { return r.pass; }));
}

BoundCheckReport gronwall_upper_check(const EnergyCurve& curve, double L_sigma, double u0_energy,
                                      double q1) {
  curve.validate();
  if (curve.p != 2.0) throw std::invalid_argument("gronwall_upper_check: curve must have p = 2");
  if (!(u0_energy > 0.0)) throw std::invalid_argument("gronwall_upper_check: ||u0|| must be positive");
  BoundCheckReport report;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double lambda = curve.lambdas[i];
    const double measured = 2.0 * curve.log_energy[i];
    const double bound =
        2.0 * std::log(u0_energy) + L_sigma * L_sigma * q1 * lambda * lambda * curve.t;
    // relative error of E^2 is twice that of E
    const double allowance = allowance_for(2.0 * curve.stderr_log[i]);
    const double slack = bound - measured;
    report.rows.push_back({lambda, curve.t, kGronwallUpper, measured, bound, slack, allowance,
                           slack >= -std::log1p(allowance)});
  }
  return report;
}

BoundCheckReport spectral_lower_check(const solvers::SpdeProblem& problem,
                                      std::span<const double> lambdas,
                                      const MonteCarloOptions& options) {
  if (!problem.eigenpair) throw std::invalid_argument("spectral_lower_check: no eigenpair attached");
  if (!(problem.sigma.l_sigma > 0.0)) {
    throw std::invalid_argument("spectral_lower_check: requires l_sigma > 0");
  }
  double q0 = 1.0;
  if (const auto* qn = std::get_if<solvers::QWienerNoise>(&problem.noise)) {
    if (!qn->kernel.lower) {
      throw ConfigError("spectral_lower_check: kernel has no declared lower envelope q0");
    }
    if (!problem.sigma.sign_definite) {
      throw ConfigError("spectral_lower_check: Q-Wiener noise needs a sign-definite sigma");
    }
    q0 = *qn->kernel.lower;
  } else if (std::holds_alternative<solvers::SpaceTimeWhiteNoise>(problem.noise)) {
    throw ConfigError("spectral_lower_check: not defined for space-time white noise");
  }

  const auto& pair = *problem.eigenpair;
  const double proj0 = problem.grid.dx() * simd::dot(problem.u0, pair.phi);
  const double l2 = problem.sigma.l_sigma * problem.sigma.l_sigma;

  BoundCheckReport report;
  for (double lambda : lambdas) {
    const MomentEstimate est = mc_projection_second_moment(problem, lambda, options);
    const double measured = est.log_moment;
    const double bound =
        2.0 * std::log(std::abs(proj0)) + (lambda * lambda * l2 * q0 - 2.0 * pair.lambda1) * options.t;
    const double allowance = allowance_for(est.stderr_log_moment);
    const double slack = measured - bound;
    const bool pass = allowance >= 1.0 || slack >= std::log1p(-allowance);
    report.rows.push_back({lambda, options.t, kSpectralLower, measured, bound, slack, allowance, pass});
  }
  return report;
}

void sort_rows(std::vector<BoundCheckRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const BoundCheckRow& a, const BoundCheckRow& b) {
    return std::tie(a.lambda, a.check_name) < std::tie(b.lambda, b.check_name);
  });
}

}  // namespace exlab::excitation
