#pragma once

#include <cstddef>
#include <span>

#include "exlab/excitation/index.hpp"
#include "exlab/excitation/volterra.hpp"

namespace exlab::excitation {

// Second-moment renewal equation of the fractional equation on the line with
// sigma(u) = u:
//   f(t) = g(t) + lambda^2 int_0^t p(2(t-s), 0) f(s) ds,
// and p(2u, 0) = 2^{-1/alpha} p(1, 0) u^{-1/alpha}, so
//   k = lambda^2 2^{-1/alpha} p(1, 0),  beta = 1 - 1/alpha.
double renewal_gain(double alpha, double lambda);
double renewal_beta(double alpha);

// g(t) = ||e^{-t(-Delta)^{alpha/2}} u0||^2_{L^2(R)}.
// delta: p(2t, 0), a power law in t.
PowerLawForcing delta_forcing(double alpha);

// indicator of [-l, l]:
//   g(t) = (2/pi) int_0^inf 2 sin^2(l xi) xi^{-2} exp(-2 t xi^alpha) d xi,
// g(0) = 2l. Gauss-Legendre panels up to where the exponential drops below
// 1e-16 or xi = 400/l, whichever is first; in the latter case the remainder
// is added analytically (incomplete gamma for the non-oscillatory half, two
// integrations by parts for the cosine half).
class IndicatorForcing {
 public:
  IndicatorForcing(double alpha, double half_width);
  double operator()(double t) const;

 private:
  double alpha_;
  double l_;
};

enum class InitialKind { delta, indicator };

struct FractionalInitial {
  InitialKind kind = InitialKind::delta;
  double half_width = 0.5;  // indicator only
};

Forcing fractional_forcing(double alpha, const FractionalInitial& u0, double t, std::size_t steps);

// f(t) ~ E ||u(t)||^2 for sigma(u) = u, on [0, t] with `steps` Volterra steps.
VolterraSolution fractional_moment_exact(double alpha, double lambda, double t,
                                         const FractionalInitial& u0, std::size_t steps);

// For general sigma the second moment lies between the solutions with gains
// l_sigma^2 k and L_sigma^2 k.
struct FractionalBracket {
  VolterraSolution lower;
  VolterraSolution upper;
};
FractionalBracket fractional_moment_bracket(double alpha, double lambda, double t,
                                            const FractionalInitial& u0, std::size_t steps,
                                            double l_sigma, double L_sigma);

struct RenewalIndexResult {
  EnergyCurve curve;  // log_energy = log f(t) / 2, stderr 0, samples 0
  IndexEstimate index;
};

RenewalIndexResult renewal_index(double alpha, std::span<const double> lambdas, double t,
                                 const FractionalInitial& u0, std::size_t steps,
                                 IndexWindow window = {});

}  // namespace exlab::excitation
