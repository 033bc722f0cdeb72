#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "exlab/noise/noise.hpp"
#include "exlab/ops/grid.hpp"
#include "exlab/ops/spectral.hpp"
#include "exlab/solvers/sigma.hpp"

namespace exlab::solvers {

// du = Delta u dt + lambda sigma(u) dB_t, one Brownian motion for all x.
struct SingleBrownian {};

// du = Delta u dt + lambda sigma(u) dW(t, x), W white in time with spatial
// covariance q.
struct QWienerNoise {
  noise::CovKernelSpec kernel;
  std::shared_ptr<const noise::CovarianceFactor> factor;
};

// du = Delta u dt + lambda sigma(u) dw(t, x), w space-time white noise.
struct SpaceTimeWhiteNoise {};

using NoiseKind = std::variant<SingleBrownian, QWienerNoise, SpaceTimeWhiteNoise>;

QWienerNoise make_qwiener_noise(noise::CovKernelSpec kernel, const ops::Grid1D& grid);

struct SpdeProblem {
  ops::Grid1D grid;
  NoiseKind noise;
  double lambda;
  SigmaSpec sigma;
  ops::GridFunction u0;
  // Attach to record the projection u_hat(t) = dx sum u phi.
  std::shared_ptr<const ops::PrincipalEigenpair> eigenpair;

  // Throws std::invalid_argument naming the broken invariant.
  void validate() const;
};

struct SolverState {
  double t = 0.0;
  ops::GridFunction u;
  double brownian = 0.0;  // B_t, single Brownian noise only
};

SolverState initial_state(const SpdeProblem& problem);

// Backward-Euler heat factor (I - dt Delta_h)^{-1} by the Thomas algorithm,
// with the elimination coefficients computed once per (grid, dt).
class ImplicitHeatSolver {
 public:
  ImplicitHeatSolver(const ops::Grid1D& grid, double dt);

  const ops::Grid1D& grid() const noexcept { return grid_; }
  double dt() const noexcept { return dt_; }
  // In place: rhs <- (I - dt Delta_h)^{-1} rhs.
  void solve(std::span<double> rhs) const;

 private:
  ops::Grid1D grid_;
  double dt_;
  double off_;                     // -dt/dx^2
  std::vector<double> c_prime_;    // modified super-diagonal
  std::vector<double> inv_denom_;  // 1 / modified diagonal
};

// One semi-implicit step u_{n+1} = (I - dt Delta_h)^{-1}(u_n + lambda sigma(u_n) dnoise).
// Non-finite output throws NumericOverflow.
SolverState step_single_bm(const SolverState& state, const ImplicitHeatSolver& heat,
                           const SpdeProblem& problem, double dB);
SolverState step_qwiener(const SolverState& state, const ImplicitHeatSolver& heat,
                         const SpdeProblem& problem, std::span<const double> dW);
SolverState step_space_time_white(const SolverState& state, const ImplicitHeatSolver& heat,
                                  const SpdeProblem& problem, std::span<const double> xi);

SolverState step_single_bm(const SolverState& state, double dt, const SpdeProblem& problem,
                           double dB);
SolverState step_qwiener(const SolverState& state, double dt, const SpdeProblem& problem,
                         std::span<const double> dW);
SolverState step_space_time_white(const SolverState& state, double dt, const SpdeProblem& problem,
                                  std::span<const double> xi);

struct Trajectory {
  SolverState state;
  // log dP/dQ of the path when drawn under a tilted measure Q, else 0.
  double log_weight = 0.0;
  std::optional<double> projection;  // u_hat(T) when an eigenpair is attached
  std::size_t negative_nodes = 0;    // nodes with u < 0 at T
};

// Steps to T = m dt drawing noise from `stream`. A nonzero `tilt` theta draws
// the driving Brownian motion (for Q-Wiener noise: the first latent
// coordinate) with drift theta and returns the Girsanov log weight
// -theta W_T + theta^2 T / 2, where W_T is the drifted endpoint.
// Space-time white noise does not support tilting.
Trajectory simulate(const SpdeProblem& problem, double T, double dt, noise::RngStream& stream,
                    double tilt = 0.0);

// e^{-lambda^2 t / 2} e^{t Delta} u0
ops::GridFunction deterministic_v(const ops::EigenDecomposition& decomp,
                                  std::span<const double> u0, double lambda, double t);

// e^{lambda B_t} deterministic_v: the exact solution of the linear single-BM
// equation given the endpoint B_t.
ops::GridFunction linear_exact_sample(const ops::EigenDecomposition& decomp,
                                      std::span<const double> u0, double lambda, double t,
                                      double B_t);

// log E ||u(t)||_p^p = p(p-1) lambda^2 t / 2 + log(dx sum |e^{t Delta} u0|^p)
double linear_exact_log_moment(const ops::EigenDecomposition& decomp, std::span<const double> u0,
                               double lambda, double t, double p);

// x e^{-lambda^2 t / 2} e^{lambda B_t}
double gbm_exact(double x, double lambda, double t, double B_t);
// x^p e^{lambda^2 p (p-1) t / 2}
double gbm_moment(double x, double lambda, double t, double p);

}  // namespace exlab::solvers
