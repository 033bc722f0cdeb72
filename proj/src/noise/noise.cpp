#include "exlab/noise/noise.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace exlab::noise {
namespace {

// Lower-triangular F with F F^T = a for symmetric positive semidefinite a.
// Pivots within roundoff of zero give a zero column (the rank-deficient case,
// e.g. a constant kernel), provided the rest of that column also vanishes.
std::optional<Eigen::MatrixXd> semidefinite_cholesky(const Eigen::MatrixXd& a, double scale) {
  const Eigen::Index n = a.rows();
  const double eps = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double d = a(k, k) - f.row(k).head(k).squaredNorm();
    if (d > eps) {
      const double pivot = std::sqrt(d);
      f(k, k) = pivot;
      for (Eigen::Index i = k + 1; i < n; ++i) {
        f(i, k) = (a(i, k) - f.row(i).head(k).dot(f.row(k).head(k))) / pivot;
      }
    } else if (d >= -eps) {
      for (Eigen::Index i = k + 1; i < n; ++i) {
        if (std::abs(a(i, k) - f.row(i).head(k).dot(f.row(k).head(k))) > eps) return std::nullopt;
      }
    } else {
      return std::nullopt;
    }
  }
  if (!f.allFinite()) return std::nullopt;
  return f;
}

}  // namespace

BrownianPath brownian_path(RngStream& stream, std::size_t n_steps, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("brownian_path: dt must be positive");
  BrownianPath path{dt, std::vector<double>(n_steps + 1, 0.0)};
  const double scale = std::sqrt(dt);
  for (std::size_t i = 1; i <= n_steps; ++i) {
    path.values[i] = path.values[i - 1] + scale * stream.next_gaussian();
  }
  return path;
}

void white_noise_row(const ops::Grid1D& grid, double dt, RngStream& stream, std::span<double> out) {
  const double scale = std::sqrt(dt / grid.dx());
  for (double& v : out) v = scale * stream.next_gaussian();
}

WhiteNoiseField white_noise_field(const ops::Grid1D& grid, std::size_t n_steps, double dt,
                                  RngStream& stream) {
  if (!(dt > 0.0)) throw std::invalid_argument("white_noise_field: dt must be positive");
  WhiteNoiseField field{grid, dt, n_steps, std::vector<double>(n_steps * grid.size())};
  for (std::size_t step = 0; step < n_steps; ++step) {
    white_noise_row(grid, dt, stream,
                    std::span<double>(field.cells.data() + step * grid.size(), grid.size()));
  }
  return field;
}

CovKernelSpec constant_kernel(double q0) {
  return {[q0](double, double) { return q0; }, q0, q0};
}

CovKernelSpec exponential_kernel(double length, double domain_length) {
  if (!(length > 0.0)) throw std::invalid_argument("exponential_kernel: length must be positive");
  return {[length](double x, double y) { return std::exp(-std::abs(x - y) / length); },
          std::exp(-domain_length / length), 1.0};
}

CovarianceFactor qwiener_factor(const CovKernelSpec& spec, const ops::Grid1D& grid) {
  if (!spec.q) throw std::invalid_argument("qwiener_factor: kernel evaluator is empty");
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd q(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      q(i, j) = spec.q(grid.node(static_cast<std::size_t>(i)), grid.node(static_cast<std::size_t>(j)));
    }
  }
  const double scale = std::max(q.diagonal().cwiseAbs().maxCoeff(), 1e-300);
  if (!((q - q.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale)) {
    throw std::invalid_argument("qwiener_factor: kernel is not symmetric on the grid");
  }

  constexpr std::array<double, 4> kJitter{0.0, 1e-12, 1e-10, 1e-8};
  for (double rel : kJitter) {
    const double jitter = rel * scale;
    Eigen::MatrixXd shifted = q;
    shifted.diagonal().array() += jitter;
    if (auto lower = semidefinite_cholesky(shifted, scale)) {
      return CovarianceFactor{grid, std::move(*lower), jitter};
    }
  }
  throw std::runtime_error("kernel not positive semidefinite on grid");
}

std::vector<double> qwiener_from_latent(const CovarianceFactor& factor, std::span<const double> z,
                                        double scale) {
  const auto n = factor.lower.rows();
  if (static_cast<Eigen::Index>(z.size()) != n) {
    throw std::invalid_argument("qwiener_from_latent: latent size mismatch");
  }
  const Eigen::Map<const Eigen::VectorXd> latent(z.data(), n);
  std::vector<double> out(static_cast<std::size_t>(n));
  Eigen::Map<Eigen::VectorXd> result(out.data(), n);
  result.noalias() = factor.lower.triangularView<Eigen::Lower>() * latent;
  result *= scale;
  return out;
}

std::vector<double> qwiener_increment(const CovarianceFactor& factor, double dt,
                                      RngStream& stream) {
  if (!(dt >= 0.0)) throw std::invalid_argument("qwiener_increment: dt must be non-negative");
  std::vector<double> z(static_cast<std::size_t>(factor.lower.rows()));
  for (double& v : z) v = stream.next_gaussian();
  return qwiener_from_latent(factor, z, std::sqrt(dt));
}

}  // namespace exlab::noise
