#include "exlab/excitation/renewal.hpp"

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <stdexcept>

#include "exlab/ops/stable.hpp"

namespace exlab::excitation {
namespace {

constexpr double kPi = boost::math::constants::pi<double>();
constexpr double kDecayExponent = 37.0;  // e^{-37} < 1e-16
constexpr int kGradedLevels = 30;

void check_alpha(double alpha) {
  if (!(alpha > 1.0 && alpha <= 2.0)) {
    throw std::invalid_argument("fractional renewal: alpha must lie in (1, 2]");
  }
}

template <class F>
double gl(F&& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 20>::integrate(f, a, b);
}

}  // namespace

double renewal_gain(double alpha, double lambda) {
  check_alpha(alpha);
  return lambda * lambda * std::pow(2.0, -1.0 / alpha) * ops::StableDensity(alpha).at_origin(1.0);
}

double renewal_beta(double alpha) {
  check_alpha(alpha);
  return 1.0 - 1.0 / alpha;
}

PowerLawForcing delta_forcing(double alpha) {
  check_alpha(alpha);
  return {std::pow(2.0, -1.0 / alpha) * ops::StableDensity(alpha).at_origin(1.0), -1.0 / alpha};
}

IndicatorForcing::IndicatorForcing(double alpha, double half_width) : alpha_(alpha), l_(half_width) {
  check_alpha(alpha);
  if (!(half_width > 0.0)) throw std::invalid_argument("IndicatorForcing: half width must be positive");
}

double IndicatorForcing::operator()(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("IndicatorForcing: t must be non-negative");
  if (t == 0.0) return 2.0 * l_;
  const double c = 2.0 * t;
  const double a = alpha_;
  const double l = l_;
  auto integrand = [c, a, l](double xi) {
    const double s = std::sin(l * xi) / xi;
    return 2.0 * s * s * std::exp(-c * std::pow(xi, a));
  };

  const double decay_cut = std::pow(kDecayExponent / c, 1.0 / a);
  const double osc_cut = 400.0 / l;
  const double upper = std::min(decay_cut, osc_cut);
  const double width = std::min(kPi / (2.0 * l), 0.5 * std::pow(c, -1.0 / a));

  double total = 0.0;
  const double first = std::min(width, upper);
  double hi = first;
  for (int level = 0; level < kGradedLevels; ++level) {
    total += gl(integrand, hi / 2.0, hi);
    hi /= 2.0;
  }
  total += gl(integrand, 0.0, hi);
  for (double lo = first; lo < upper; lo += width) total += gl(integrand, lo, std::min(lo + width, upper));

  if (upper == osc_cut && decay_cut > osc_cut) {
    // int_X^inf (1 - cos 2 l xi) F(xi) d xi with F = e^{-c xi^a} xi^{-2}
    const double x = osc_cut;
    const double z = c * std::pow(x, a);
    const double non_osc =
        std::exp(-z) / x - std::pow(c, 1.0 / a) * boost::math::tgamma(1.0 - 1.0 / a, z);
    const double w = 2.0 * l;
    const double fx = std::exp(-z) / (x * x);
    const double dfx = fx * (-c * a * std::pow(x, a - 1.0) - 2.0 / x);
    const double osc = -std::sin(w * x) * fx / w - std::cos(w * x) * dfx / (w * w);
    total += non_osc - osc;
  }
  return 2.0 / kPi * total;
}

Forcing fractional_forcing(double alpha, const FractionalInitial& u0, double t, std::size_t steps) {
  if (u0.kind == InitialKind::delta) return delta_forcing(alpha);
  const IndicatorForcing g(alpha, u0.half_width);
  SampledForcing samples{std::vector<double>(steps + 1)};
  const double h = t / static_cast<double>(steps);
  for (std::size_t j = 0; j <= steps; ++j) samples.values[j] = g(h * static_cast<double>(j));
  return samples;
}

namespace {

VolterraSolution solve_with(double alpha, double gain, double t, Forcing forcing, std::size_t steps) {
  RenewalProblem prob;
  prob.forcing = std::move(forcing);
  prob.gain = gain;
  prob.beta = renewal_beta(alpha);
  prob.horizon = t;
  prob.steps = steps;
  prob.mode = VolterraMode::automatic;
  return volterra_solve(prob);
}

}  // namespace

VolterraSolution fractional_moment_exact(double alpha, double lambda, double t,
                                         const FractionalInitial& u0, std::size_t steps) {
  return solve_with(alpha, renewal_gain(alpha, lambda), t, fractional_forcing(alpha, u0, t, steps),
                    steps);
}

FractionalBracket fractional_moment_bracket(double alpha, double lambda, double t,
                                            const FractionalInitial& u0, std::size_t steps,
                                            double l_sigma, double L_sigma) {
  if (!(0.0 <= l_sigma && l_sigma <= L_sigma)) {
    throw std::invalid_argument("fractional_moment_bracket: need 0 <= l_sigma <= L_sigma");
  }
  const Forcing forcing = fractional_forcing(alpha, u0, t, steps);
  const double k = renewal_gain(alpha, lambda);
  return {solve_with(alpha, l_sigma * l_sigma * k, t, forcing, steps),
          solve_with(alpha, L_sigma * L_sigma * k, t, forcing, steps)};
}

RenewalIndexResult renewal_index(double alpha, std::span<const double> lambdas, double t,
                                 const FractionalInitial& u0, std::size_t steps,
                                 IndexWindow window) {
  EnergyCurve curve;
  curve.t = t;
  curve.p = 2.0;
  const Forcing forcing = fractional_forcing(alpha, u0, t, steps);
  for (double lambda : lambdas) {
    const VolterraSolution sol = solve_with(alpha, renewal_gain(alpha, lambda), t, forcing, steps);
    curve.lambdas.push_back(lambda);
    curve.log_energy.push_back(0.5 * sol.log_final());
    curve.stderr_log.push_back(0.0);
    curve.samples.push_back(0);
  }
  IndexEstimate index = index_fit(curve, window);
  return {std::move(curve), std::move(index)};
}

}  // namespace exlab::excitation
