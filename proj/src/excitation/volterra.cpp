#include "exlab/excitation/volterra.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "exlab/errors.hpp"
#include "exlab/simd/kernels.hpp"

namespace exlab::excitation {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// m^beta - (m-1)^beta without cancellation
double power_increment(std::size_t m, double beta) {
  if (m == 1) return 1.0;
  const double md = static_cast<double>(m);
  return -std::pow(md, beta) * std::expm1(beta * std::log1p(-1.0 / md));
}

// int_{(m-1)h}^{mh} e^{-r u} u^{beta-1} du * r^beta / Gamma(beta)
double tempered_increment(std::size_t m, double beta, double rh) {
  using boost::math::gamma_p;
  using boost::math::gamma_q;
  const double lo = rh * static_cast<double>(m - 1);
  const double hi = rh * static_cast<double>(m);
  if (lo < 1.0) return gamma_p(beta, hi) - (lo > 0.0 ? gamma_p(beta, lo) : 0.0);
  return gamma_q(beta, lo) - gamma_q(beta, hi);
}

// e^{-r t_j} g(t_j) for j = 0..n (r = 0 in plain mode).
std::vector<double> forcing_samples(const RenewalProblem& prob, double rate) {
  const std::size_t n = prob.steps;
  const double h = prob.horizon / static_cast<double>(n);
  std::vector<double> g(n + 1, 0.0);
  auto damp = [&](std::size_t j) { return std::exp(-rate * h * static_cast<double>(j)); };

  std::visit(
      Overloaded{
          [&](const PowerLawForcing& pl) {
            const double gam = pl.exponent;
            if (gam >= 0.0) {
              g[0] = gam == 0.0 ? pl.coef : 0.0;
            } else if (rate > 0.0) {
              // mean of e^{-r s} c s^gamma over [0, h]
              g[0] = pl.coef * std::exp(-(gam + 1.0) * std::log(rate) + std::lgamma(gam + 1.0)) *
                     boost::math::gamma_p(gam + 1.0, rate * h) / h;
            } else {
              g[0] = pl.coef * std::pow(h, gam) / (gam + 1.0);
            }
            for (std::size_t j = 1; j <= n; ++j) {
              const double d = damp(j);
              g[j] = d == 0.0 ? 0.0 : d * pl.coef * std::pow(h * static_cast<double>(j), gam);
            }
          },
          [&](const std::function<double(double)>& f) {
            for (std::size_t j = 0; j <= n; ++j) {
              const double d = damp(j);
              g[j] = d == 0.0 ? 0.0 : d * f(h * static_cast<double>(j));
            }
          },
          [&](const SampledForcing& s) {
            for (std::size_t j = 0; j <= n; ++j) {
              const double d = damp(j);
              g[j] = d == 0.0 ? 0.0 : d * s.values[j];
            }
          }},
      prob.forcing);
  return g;
}

}  // namespace

void RenewalProblem::validate() const {
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("RenewalProblem: beta must lie in (0, 1]");
  if (!(gain >= 0.0) || !std::isfinite(gain)) throw std::invalid_argument("RenewalProblem: gain must be >= 0");
  if (!(horizon > 0.0)) throw std::invalid_argument("RenewalProblem: horizon must be positive");
  if (steps < 2) throw std::invalid_argument("RenewalProblem: need at least 2 steps");
  if (const auto* pl = std::get_if<PowerLawForcing>(&forcing)) {
    if (!(pl->exponent > -1.0)) {
      throw std::invalid_argument("RenewalProblem: power-law forcing must have exponent > -1");
    }
    if (!(pl->coef >= 0.0)) throw std::invalid_argument("RenewalProblem: forcing must be nonnegative");
  } else if (const auto* s = std::get_if<SampledForcing>(&forcing)) {
    if (s->values.size() != steps + 1) {
      throw std::invalid_argument("RenewalProblem: sampled forcing needs steps + 1 values");
    }
  } else if (!std::get<std::function<double(double)>>(forcing)) {
    throw std::invalid_argument("RenewalProblem: forcing function is empty");
  }
}

double RenewalProblem::tempering_rate() const {
  if (gain == 0.0) return 0.0;
  return std::exp((std::log(gain) + std::lgamma(beta)) / beta);
}

std::vector<double> VolterraSolution::values() const {
  std::vector<double> out(scaled.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = rate == 0.0 ? scaled[j] : std::exp(log_values[j]);
    if (!std::isfinite(out[j])) {
      throw NumericOverflow("VolterraSolution::values: f exceeds double range; use log_values");
    }
  }
  return out;
}

VolterraSolution volterra_solve(const RenewalProblem& prob) {
  prob.validate();
  const std::size_t n = prob.steps;
  const double h = prob.horizon / static_cast<double>(n);
  const double beta = prob.beta;
  const double k = prob.gain;

  const double r_natural = prob.tempering_rate();
  bool tempered = false;
  switch (prob.mode) {
    case VolterraMode::plain: tempered = false; break;
    case VolterraMode::tempered:
    case VolterraMode::automatic: tempered = k > 0.0; break;
  }
  const double rate = tempered ? r_natural : 0.0;

  // rev[n - m] = w_m, so sum_{j<i} w_{i-j} f_j = dot(f[0..i), rev[n-i..n)).
  std::vector<double> rev(n, 0.0);
  if (tempered) {
    // k Gamma(beta) r^{-beta} = 1 by the choice of r.
    for (std::size_t m = 1; m <= n; ++m) rev[n - m] = tempered_increment(m, beta, rate * h);
  } else {
    const double scale = k * std::pow(h, beta) / beta;
    for (std::size_t m = 1; m <= n; ++m) rev[n - m] = scale * power_increment(m, beta);
  }

  const std::vector<double> g = forcing_samples(prob, rate);
  std::vector<double> f(n + 1);
  const auto& kern = simd::kernels();
  f[0] = g[0];
  for (std::size_t i = 1; i <= n; ++i) {
    f[i] = g[i] + kern.dot(f.data(), rev.data() + (n - i), i);
    if (!std::isfinite(f[i])) {
      std::ostringstream msg;
      msg << "volterra_solve: solution exceeds double range at t=" << h * static_cast<double>(i)
          << " (k=" << k << ", beta=" << beta << "); use the tempered (log-domain) mode";
      throw NumericOverflow(msg.str());
    }
  }

  VolterraSolution sol{h, rate, std::vector<double>(n + 1), f};
  for (std::size_t j = 0; j <= n; ++j) {
    sol.log_values[j] = rate * h * static_cast<double>(j) + std::log(f[j]);
  }
  return sol;
}

}  // namespace exlab::excitation
