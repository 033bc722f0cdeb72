#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include "exlab/solvers/spde.hpp"

namespace exlab::excitation {

enum class Sampler {
  exact_linear,  // closed form given the driving Brownian endpoint; sigma(u) = u only
  scheme,        // semi-implicit time stepping
};

struct MonteCarloOptions {
  double t = 0.5;
  double p = 2.0;
  std::size_t samples = 1000;
  std::uint64_t base_seed = 0;
  Sampler sampler = Sampler::exact_linear;
  double dt = 1e-4;  // scheme only
  // Drift of the driving Brownian coordinate under the sampling measure;
  // trajectories are reweighted by the likelihood ratio. 0 disables tilting.
  double tilt = 0.0;
  unsigned threads = 0;  // 0: EXLAB_THREADS if set, else hardware concurrency
};

// Estimate of E Y with Y > 0, from per-trajectory log Y_i. Everything is kept
// in the log domain; the standard error of log E Y is the delta-method
// relative error sqrt(var(Y) / M) / E Y.
struct MomentEstimate {
  double log_moment;         // log of the sample mean of Y
  double stderr_log_moment;  // standard error of log_moment
  double p;                  // Y is a p-th moment; energy = moment^{1/p}
  std::size_t samples;
  // Scheme sampler only: mean fraction of grid nodes with u < 0 at t.
  double negative_fraction = 0.0;

  double log_energy() const noexcept { return log_moment / p; }
  double stderr_log_energy() const noexcept { return stderr_log_moment / p; }
  double moment() const;
  double moment_stderr() const;
};

// Log-sum-exp reduction of log Y_0..log Y_{M-1} in index order.
MomentEstimate reduce_log_samples(std::span<const double> log_values, double p);

// Worker count after applying EXLAB_THREADS and the request.
unsigned worker_count(unsigned requested);

// Evaluates f(0..count-1) on worker threads, results stored by index so the
// output does not depend on scheduling. The exception of the lowest failing
// index is rethrown.
std::vector<double> parallel_map(std::size_t count, unsigned threads,
                                 const std::function<double(std::size_t)>& f);

// Drift that makes the p-th moment estimator of the exact linear sampler
// zero-variance: p lambda sqrt(q(x, x)) (q = 1 for a single Brownian motion).
double optimal_tilt(const solvers::SpdeProblem& problem, double lambda, double p);

// Estimate of [E ||u(t)||_p^p]^{1/p} for the problem with its lambda replaced
// by `lambda`. Trajectory i uses RngStream(base_seed, i). Overflow in any
// trajectory throws NumericOverflow naming (lambda, t).
MomentEstimate mc_energy(const solvers::SpdeProblem& problem, double lambda,
                         const MonteCarloOptions& options);

// Estimate of E u_hat(t)^2 for u_hat = dx sum u phi; requires an attached
// eigenpair. options.p is ignored.
MomentEstimate mc_projection_second_moment(const solvers::SpdeProblem& problem, double lambda,
                                           const MonteCarloOptions& options);

// Estimate of E X_t^p for the scalar GBM X_t = x e^{-lambda^2 t/2 + lambda B_t}.
MomentEstimate mc_gbm_moment(double x, double lambda, const MonteCarloOptions& options);

}  // namespace exlab::excitation
