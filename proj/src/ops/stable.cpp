#include "exlab/ops/stable.hpp"

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace exlab::ops {
namespace {

using boost::math::quadrature::gauss;
constexpr double kPi = boost::math::constants::pi<double>();
// -log(1e-16)
constexpr double kCutoffExponent = 36.841361487904734;
constexpr int kGradedLevels = 40;
constexpr int kTailTerms = 4;

template <class F>
double gl(F&& f, double a, double b) {
  return gauss<double, 20>::integrate(f, a, b);
}

}  // namespace

StableDensity::StableDensity(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw std::invalid_argument("StableDensity: alpha must lie in (0, 2]");
  }
}

double StableDensity::at_origin(double t) const {
  if (!(t > 0.0)) throw std::invalid_argument("stable density: t must be positive");
  return std::tgamma(1.0 + 1.0 / alpha_) / (kPi * std::pow(t, 1.0 / alpha_));
}

double StableDensity::tail_coefficient(int k) const {
  const double sign = (k % 2 == 1) ? 1.0 : -1.0;
  return sign * std::exp(std::lgamma(alpha_ * k + 1.0) - std::lgamma(k + 1.0)) *
         std::sin(k * kPi * alpha_ / 2.0) / kPi;
}

double StableDensity::operator()(double t, double x) const {
  if (!(t > 0.0)) throw std::invalid_argument("stable density: t must be positive");
  if (alpha_ == 2.0) return std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * kPi * t);

  const double ax = std::abs(x);
  const double cutoff = std::pow(kCutoffExponent / t, 1.0 / alpha_);
  const double width = kPi / (ax + 1.0);
  const double alpha = alpha_;
  auto integrand = [ax, t, alpha](double xi) {
    return std::cos(ax * xi) * std::exp(-t * std::pow(xi, alpha));
  };

  double total = 0.0;
  // Geometric refinement of [0, min(width, cutoff)] towards the origin.
  const double first = std::min(width, cutoff);
  double hi = first;
  for (int level = 0; level < kGradedLevels; ++level) {
    const double lo = hi / 2.0;
    total += gl(integrand, lo, hi);
    hi = lo;
  }
  total += gl(integrand, 0.0, hi);

  for (double a = first; a < cutoff; a += width) {
    total += gl(integrand, a, std::min(a + width, cutoff));
  }
  return total / kPi;
}

double stable_density(double alpha, double t, double x) { return StableDensity(alpha)(t, x); }

namespace {

// 2 * int_0^Y f(y) dy on unit-scaled panels.
template <class F>
double symmetric_integral(F&& f, double scale, double extent) {
  const double panel = 0.25 * scale;
  double total = 0.0;
  for (double a = 0.0; a < extent; a += panel) total += gl(f, a, std::min(a + panel, extent));
  return 2.0 * total;
}

}  // namespace

StableIdentityReport stable_identity_suite(double alpha, double t, double s, double x) {
  if (!(t > 0.0 && s > 0.0)) throw std::invalid_argument("stable_identity_suite: t, s must be > 0");
  const StableDensity p(alpha);
  StableIdentityReport report{alpha, 0.0, 0.0, 0.0};

  const double lhs = p(s * t, x);
  const double shrink = std::pow(t, -1.0 / alpha);
  const double rhs = shrink * p(s, shrink * x);
  report.scaling_residual = std::abs(lhs - rhs) / std::abs(lhs);

  const double scale_small = std::pow(std::min(t, s), 1.0 / alpha);
  const double extent = 40.0 * std::pow(std::max(t, s), 1.0 / alpha);

  // Tail expansions beyond the integration extent (identically zero for the
  // Gaussian, whose coefficients carry sin(k pi)).
  double mass_tail = 0.0;
  double product_tail = 0.0;
  if (alpha < 2.0) {
    for (int k = 1; k <= kTailTerms; ++k) {
      const double ak = p.tail_coefficient(k);
      mass_tail += ak * std::pow(t, k) * std::pow(extent, -alpha * k) / (alpha * k);
      for (int j = 1; j <= kTailTerms; ++j) {
        const double e = alpha * (j + k) + 1.0;
        product_tail += p.tail_coefficient(j) * ak * std::pow(t, j) * std::pow(s, k) *
                        std::pow(extent, -e) / e;
      }
    }
  }

  const double convolution =
      symmetric_integral([&](double y) { return p(t, y) * p(s, y); }, scale_small, extent) +
      2.0 * product_tail;
  const double target = p.at_origin(t + s);
  report.convolution_residual = std::abs(convolution - target) / target;

  const double mass = symmetric_integral([&](double y) { return p(t, y); },
                                         std::pow(t, 1.0 / alpha), extent) +
                      2.0 * mass_tail;
  report.normalization_residual = std::abs(mass - 1.0);
  return report;
}

ProductBoundReport stable_product_bound_check(double alpha, double t, double a,
                                              std::span<const double> points) {
  const StableDensity p(alpha);
  ProductBoundReport report{t, a, 0, 0, std::numeric_limits<double>::infinity()};
  for (double x : points) {
    const double px = p(t, x);
    for (double y : points) {
      const double margin = p(t, (x - y) / a) - px * p(t, y);
      ++report.checked;
      if (margin < 0.0) ++report.violations;
      report.worst_margin = std::min(report.worst_margin, margin);
    }
  }
  return report;
}

}  // namespace exlab::ops
