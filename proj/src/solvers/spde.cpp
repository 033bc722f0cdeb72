#include "exlab/solvers/spde.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "exlab/errors.hpp"
#include "exlab/simd/kernels.hpp"

namespace exlab::solvers {
namespace {

constexpr char kOverflowMessage[] = "overflow: lambda^2 t too large for direct simulation";

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_finite(std::span<const double> u, double t) {
  for (double v : u) {
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << kOverflowMessage << " (non-finite state at t=" << t << ")";
      throw NumericOverflow(msg.str());
    }
  }
}

ops::GridFunction sigma_of(const SigmaSpec& sigma, std::span<const double> u) {
  ops::GridFunction s(u.size());
  if (sigma.is_linear) {
    std::copy(u.begin(), u.end(), s.begin());
  } else {
    for (std::size_t i = 0; i < u.size(); ++i) s[i] = sigma.eval(u[i]);
  }
  return s;
}

SolverState pointwise_step(const SolverState& state, const ImplicitHeatSolver& heat,
                           const SpdeProblem& problem, std::span<const double> noise) {
  if (noise.size() != state.u.size()) {
    throw std::invalid_argument("step: noise vector size does not match the grid");
  }
  const ops::GridFunction s = sigma_of(problem.sigma, state.u);
  SolverState next{state.t + heat.dt(), ops::GridFunction(state.u.size()), state.brownian};
  simd::kernels().noise_update(state.u.data(), s.data(), noise.data(), problem.lambda,
                               next.u.data(), next.u.size());
  heat.solve(next.u);
  check_finite(next.u, next.t);
  return next;
}

}  // namespace

QWienerNoise make_qwiener_noise(noise::CovKernelSpec kernel, const ops::Grid1D& grid) {
  auto factor = std::make_shared<const noise::CovarianceFactor>(noise::qwiener_factor(kernel, grid));
  return QWienerNoise{std::move(kernel), std::move(factor)};
}

void SpdeProblem::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("SpdeProblem: lambda must be finite and >= 0");
  }
  if (u0.size() != grid.size()) throw std::invalid_argument("SpdeProblem: u0 size does not match grid");
  bool positive = false;
  for (double v : u0) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("SpdeProblem: u0 must be finite and nonnegative");
    }
    positive = positive || v > 0.0;
  }
  if (!positive) throw std::invalid_argument("SpdeProblem: u0 must not vanish identically");
  if (!sigma.eval) throw std::invalid_argument("SpdeProblem: sigma evaluator is empty");
  if (const auto* q = std::get_if<QWienerNoise>(&noise)) {
    if (!q->factor || !(q->factor->grid == grid)) {
      throw std::invalid_argument("SpdeProblem: Q-Wiener factor missing or built on another grid");
    }
  }
  if (eigenpair && eigenpair->phi.size() != grid.size()) {
    throw std::invalid_argument("SpdeProblem: eigenpair does not match grid");
  }
}

SolverState initial_state(const SpdeProblem& problem) { return SolverState{0.0, problem.u0, 0.0}; }

ImplicitHeatSolver::ImplicitHeatSolver(const ops::Grid1D& grid, double dt)
    : grid_(grid), dt_(dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("ImplicitHeatSolver: dt must be positive");
  const std::size_t n = grid.size();
  const double r = dt / (grid.dx() * grid.dx());
  const double diag = 1.0 + 2.0 * r;
  off_ = -r;
  c_prime_.resize(n);
  inv_denom_.resize(n);
  double denom = diag;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) denom = diag - off_ * c_prime_[i - 1];
    inv_denom_[i] = 1.0 / denom;
    c_prime_[i] = off_ * inv_denom_[i];
  }
}

void ImplicitHeatSolver::solve(std::span<double> rhs) const {
  const std::size_t n = rhs.size();
  if (n != grid_.size()) throw std::invalid_argument("ImplicitHeatSolver: size mismatch");
  if (n == 0) return;
  rhs[0] *= inv_denom_[0];
  for (std::size_t i = 1; i < n; ++i) rhs[i] = (rhs[i] - off_ * rhs[i - 1]) * inv_denom_[i];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c_prime_[i] * rhs[i + 1];
}

SolverState step_single_bm(const SolverState& state, const ImplicitHeatSolver& heat,
                           const SpdeProblem& problem, double dB) {
  ops::GridFunction s = sigma_of(problem.sigma, state.u);
  SolverState next{state.t + heat.dt(), state.u, state.brownian + dB};
  simd::axpy(problem.lambda * dB, s, next.u);
  heat.solve(next.u);
  check_finite(next.u, next.t);
  return next;
}

SolverState step_qwiener(const SolverState& state, const ImplicitHeatSolver& heat,
                         const SpdeProblem& problem, std::span<const double> dW) {
  return pointwise_step(state, heat, problem, dW);
}

SolverState step_space_time_white(const SolverState& state, const ImplicitHeatSolver& heat,
                                  const SpdeProblem& problem, std::span<const double> xi) {
  return pointwise_step(state, heat, problem, xi);
}

SolverState step_single_bm(const SolverState& state, double dt, const SpdeProblem& problem,
                           double dB) {
  return step_single_bm(state, ImplicitHeatSolver(problem.grid, dt), problem, dB);
}

SolverState step_qwiener(const SolverState& state, double dt, const SpdeProblem& problem,
                         std::span<const double> dW) {
  return step_qwiener(state, ImplicitHeatSolver(problem.grid, dt), problem, dW);
}

SolverState step_space_time_white(const SolverState& state, double dt, const SpdeProblem& problem,
                                  std::span<const double> xi) {
  return step_space_time_white(state, ImplicitHeatSolver(problem.grid, dt), problem, xi);
}

Trajectory simulate(const SpdeProblem& problem, double T, double dt, noise::RngStream& stream,
                    double tilt) {
  if (!(dt > 0.0)) throw std::invalid_argument("simulate: dt must be positive");
  if (!(T >= 0.0)) throw std::invalid_argument("simulate: T must be non-negative");
  const double steps_real = std::round(T / dt);
  if (std::abs(steps_real * dt - T) > 1e-9 * std::max(T, dt)) {
    throw std::invalid_argument("simulate: T must be an integer multiple of dt");
  }
  const auto steps = static_cast<std::size_t>(steps_real);
  const ImplicitHeatSolver heat(problem.grid, dt);
  const double sqrt_dt = std::sqrt(dt);
  const std::size_t n = problem.grid.size();

  Trajectory traj;
  traj.state = initial_state(problem);
  double latent_endpoint = 0.0;

  std::visit(
      Overloaded{
          [&](const SingleBrownian&) {
            for (std::size_t k = 0; k < steps; ++k) {
              const double dB = sqrt_dt * stream.next_gaussian() + tilt * dt;
              traj.state = step_single_bm(traj.state, heat, problem, dB);
            }
            latent_endpoint = traj.state.brownian;
          },
          [&](const QWienerNoise& q) {
            std::vector<double> z(n);
            for (std::size_t k = 0; k < steps; ++k) {
              for (double& v : z) v = sqrt_dt * stream.next_gaussian();
              if (n > 0) {
                z[0] += tilt * dt;
                latent_endpoint += z[0];
              }
              const auto dW = noise::qwiener_from_latent(*q.factor, z, 1.0);
              traj.state = step_qwiener(traj.state, heat, problem, dW);
            }
          },
          [&](const SpaceTimeWhiteNoise&) {
            if (tilt != 0.0) {
              throw std::invalid_argument("simulate: space-time white noise does not support tilting");
            }
            std::vector<double> xi(n);
            for (std::size_t k = 0; k < steps; ++k) {
              noise::white_noise_row(problem.grid, dt, stream, xi);
              traj.state = step_space_time_white(traj.state, heat, problem, xi);
            }
          }},
      problem.noise);

  // Re-anchor t to avoid accumulated rounding in the recorded horizon.
  traj.state.t = T;
  if (tilt != 0.0) traj.log_weight = -tilt * latent_endpoint + 0.5 * tilt * tilt * T;
  if (problem.eigenpair) {
    traj.projection = problem.grid.dx() * simd::dot(traj.state.u, problem.eigenpair->phi);
  }
  traj.negative_nodes = static_cast<std::size_t>(
      std::count_if(traj.state.u.begin(), traj.state.u.end(), [](double v) { return v < 0.0; }));
  return traj;
}

ops::GridFunction deterministic_v(const ops::EigenDecomposition& decomp,
                                  std::span<const double> u0, double lambda, double t) {
  ops::GridFunction v = ops::heat_apply(decomp, t, u0);
  const double damp = std::exp(-0.5 * lambda * lambda * t);
  for (double& x : v) x *= damp;
  return v;
}

ops::GridFunction linear_exact_sample(const ops::EigenDecomposition& decomp,
                                      std::span<const double> u0, double lambda, double t,
                                      double B_t) {
  const double exponent = lambda * B_t - 0.5 * lambda * lambda * t;
  ops::GridFunction u = ops::heat_apply(decomp, t, u0);
  const double factor = std::exp(exponent);
  for (double& x : u) x *= factor;
  for (double x : u) {
    if (!std::isfinite(x)) {
      std::ostringstream msg;
      msg << "linear_exact_sample: overflow, lambda B_t - lambda^2 t/2 = " << exponent
          << " (lambda=" << lambda << ", t=" << t << ", B_t=" << B_t
          << "); use the log-domain moment instead";
      throw NumericOverflow(msg.str());
    }
  }
  return u;
}

double linear_exact_log_moment(const ops::EigenDecomposition& decomp, std::span<const double> u0,
                               double lambda, double t, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("linear_exact_log_moment: p must be positive");
  const ops::GridFunction h = ops::heat_apply(decomp, t, u0);
  double sum = 0.0;
  for (double x : h) sum += std::pow(std::abs(x), p);
  return 0.5 * p * (p - 1.0) * lambda * lambda * t + std::log(decomp.grid().dx() * sum);
}

double gbm_exact(double x, double lambda, double t, double B_t) {
  return x * std::exp(lambda * B_t - 0.5 * lambda * lambda * t);
}

double gbm_moment(double x, double lambda, double t, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("gbm_moment: p must be positive");
  return std::pow(x, p) * std::exp(0.5 * lambda * lambda * p * (p - 1.0) * t);
}

}  // namespace exlab::solvers
