#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "exlab/noise/rng.hpp"
#include "exlab/ops/grid.hpp"

namespace exlab::noise {

struct BrownianPath {
  double dt;
  std::vector<double> values;  // B_0 = 0, ..., B_N
};

BrownianPath brownian_path(RngStream& stream, std::size_t n_steps, double dt);

// Increments of discretised space-time white noise: entries i.i.d.
// N(0, dt/dx), so the solver multiplies by them directly.
struct WhiteNoiseField {
  ops::Grid1D grid;
  double dt;
  std::size_t n_steps;
  std::vector<double> cells;  // row-major, n_steps x grid.size()

  std::span<const double> row(std::size_t step) const {
    return {cells.data() + step * grid.size(), grid.size()};
  }
};

WhiteNoiseField white_noise_field(const ops::Grid1D& grid, std::size_t n_steps, double dt,
                                  RngStream& stream);
// One row of the field, drawn in the same order white_noise_field uses.
void white_noise_row(const ops::Grid1D& grid, double dt, RngStream& stream, std::span<double> out);

struct CovKernelSpec {
  std::function<double(double, double)> q;
  std::optional<double> lower;  // q0: q(x, y) >= q0 everywhere
  std::optional<double> upper;  // q1: q(x, x) <= q1 everywhere
};

CovKernelSpec constant_kernel(double q0);
// exp(-|x - y| / length); declared envelopes exp(-L/length) and 1 on (0, L).
CovKernelSpec exponential_kernel(double length, double domain_length);

struct CovarianceFactor {
  ops::Grid1D grid;
  Eigen::MatrixXd lower;  // F with F F^T = Q + jitter I
  double jitter;
};

// Dense Cholesky of Q_ij = q(x_i, x_j), retried with diagonal jitter
// 1e-12, 1e-10, 1e-8 (relative to max diag Q) until it succeeds. Zero pivots
// are accepted, so a rank-deficient Q such as a constant kernel factors with
// no jitter and yields exactly rank-one increments.
CovarianceFactor qwiener_factor(const CovKernelSpec& spec, const ops::Grid1D& grid);

// F z * scale, with z a latent standard normal vector.
std::vector<double> qwiener_from_latent(const CovarianceFactor& factor, std::span<const double> z,
                                        double scale);

// Gaussian vector with covariance dt F F^T.
std::vector<double> qwiener_increment(const CovarianceFactor& factor, double dt,
                                      RngStream& stream);

}  // namespace exlab::noise
