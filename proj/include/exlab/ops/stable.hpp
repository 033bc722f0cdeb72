#pragma once

#include <cstddef>
#include <span>

namespace exlab::ops {

// Transition density p(t, x) of the symmetric alpha-stable process with
// E exp(i xi X_t) = exp(-t |xi|^alpha).
//
// alpha = 2 uses the Gaussian closed form (4 pi t)^{-1/2} exp(-x^2 / 4t).
// Otherwise p(t, x) = (1/pi) int_0^Xi cos(x xi) exp(-t xi^alpha) d xi with Xi
// chosen so exp(-t Xi^alpha) < 1e-16, integrated by 20-point Gauss-Legendre
// on panels of width pi/(|x|+1). The first panel is refined geometrically
// towards 0, where exp(-t xi^alpha) is not smooth. The quadrature is applied
// at the requested t directly (no reduction through the scaling law), so the
// scaling identity is an actual check.
//
// Accepts alpha in (0, 2]; alpha = 1 (Cauchy) is useful as a validation point
// even though the fractional equations need alpha in (1, 2].
class StableDensity {
 public:
  explicit StableDensity(double alpha);

  double alpha() const noexcept { return alpha_; }
  double operator()(double t, double x) const;
  // Gamma(1 + 1/alpha) / (pi t^{1/alpha})
  double at_origin(double t) const;

  // Coefficient a_k of the large-|x| expansion
  //   p(t, x) ~ sum_k a_k t^k |x|^{-alpha k - 1}.
  double tail_coefficient(int k) const;

 private:
  double alpha_;
};

double stable_density(double alpha, double t, double x);

struct StableIdentityReport {
  double alpha;
  // |p(s t, x) - t^{-1/a} p(s, t^{-1/a} x)| / p(s t, x)
  double scaling_residual;
  // |int p(t,y) p(s,y) dy - p(t+s, 0)| / p(t+s, 0)
  double convolution_residual;
  // |int p(t,y) dy - 1|
  double normalization_residual;
};

// The y-integrals are Gauss-Legendre sums over [-Y, Y] with
// Y = 40 max(t, s)^{1/alpha}, plus the analytic integral of the tail
// expansion beyond Y.
StableIdentityReport stable_identity_suite(double alpha, double t, double s, double x);

struct ProductBoundReport {
  double t;
  double a;
  std::size_t checked;
  std::size_t violations;
  double worst_margin;  // min over pairs of p(t,(x-y)/a) - p(t,x) p(t,y)
};

// Diagnostic for p(t,(x-y)/a) >= p(t,x) p(t,y) over all pairs from `points`.
// Only meaningful for t with p(t,0) <= 1 and a > 2.
ProductBoundReport stable_product_bound_check(double alpha, double t, double a,
                                              std::span<const double> points);

}  // namespace exlab::ops
