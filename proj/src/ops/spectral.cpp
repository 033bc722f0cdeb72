#include "exlab/ops/spectral.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "exlab/simd/kernels.hpp"

namespace exlab::ops {

EigenDecomposition::EigenDecomposition(Grid1D grid, std::vector<double> eigenvalues,
                                       Eigen::MatrixXd vectors)
    : grid_(grid), eigenvalues_(std::move(eigenvalues)), vectors_(std::move(vectors)) {
  const auto n = static_cast<Eigen::Index>(grid_.size());
  if (static_cast<Eigen::Index>(eigenvalues_.size()) != n || vectors_.rows() != n ||
      vectors_.cols() != n) {
    throw std::invalid_argument("EigenDecomposition: dimensions do not match the grid");
  }
}

std::span<const double> EigenDecomposition::vector(std::size_t k) const {
  if (k >= size()) throw std::out_of_range("EigenDecomposition::vector");
  return {vectors_.col(static_cast<Eigen::Index>(k)).data(), size()};
}

GridFunction EigenDecomposition::coefficients(std::span<const double> u) const {
  if (u.size() != size()) throw std::invalid_argument("coefficients: size mismatch");
  const auto& table = simd::kernels();
  const double dx = grid_.dx();
  GridFunction c(size());
  for (std::size_t k = 0; k < size(); ++k) {
    c[k] = dx * table.dot(u.data(), vectors_.col(static_cast<Eigen::Index>(k)).data(), size());
  }
  return c;
}

GridFunction EigenDecomposition::synthesize(std::span<const double> coefficients) const {
  if (coefficients.size() != size()) throw std::invalid_argument("synthesize: size mismatch");
  const auto& table = simd::kernels();
  GridFunction out(size(), 0.0);
  for (std::size_t k = 0; k < size(); ++k) {
    if (coefficients[k] == 0.0) continue;
    table.axpy(coefficients[k], vectors_.col(static_cast<Eigen::Index>(k)).data(), out.data(),
               size());
  }
  return out;
}

EigenDecomposition eigenpairs(const TridiagOperator& op, const Grid1D& grid) {
  const std::size_t n = op.size();
  if (n != grid.size()) throw std::invalid_argument("eigenpairs: operator and grid disagree");
  if (!op.symmetric()) throw std::invalid_argument("eigenpairs: operator is not symmetric");

  // Work with -L so the spectrum comes out positive and ascending.
  Eigen::VectorXd diag(static_cast<Eigen::Index>(n));
  Eigen::VectorXd off(static_cast<Eigen::Index>(n > 0 ? n - 1 : 0));
  for (std::size_t i = 0; i < n; ++i) diag[static_cast<Eigen::Index>(i)] = -op.diag[i];
  for (std::size_t i = 0; i + 1 < n; ++i) off[static_cast<Eigen::Index>(i)] = -op.sub[i];

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigenpairs: tridiagonal QL iteration did not converge (n=" +
                             std::to_string(n) + ")");
  }

  std::vector<double> values(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  Eigen::MatrixXd vectors = solver.eigenvectors() / std::sqrt(grid.dx());
  // Fix the sign so the largest-magnitude entry is positive; makes the result
  // independent of the LAPACK-style sign choice.
  for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
    Eigen::Index arg = 0;
    vectors.col(k).cwiseAbs().maxCoeff(&arg);
    if (vectors(arg, k) < 0.0) vectors.col(k) *= -1.0;
  }
  return EigenDecomposition(grid, std::move(values), std::move(vectors));
}

std::shared_ptr<const EigenDecomposition> dirichlet_decomposition(const Grid1D& grid) {
  static std::mutex mutex;
  static std::map<std::pair<double, std::size_t>, std::shared_ptr<const EigenDecomposition>> cache;
  const auto key = std::make_pair(grid.length(), grid.size());
  std::lock_guard lock(mutex);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  auto decomp =
      std::make_shared<const EigenDecomposition>(eigenpairs(laplacian_dirichlet(grid), grid));
  cache.emplace(key, decomp);
  return decomp;
}

PrincipalEigenpair principal_eigenpair(const EigenDecomposition& decomp) {
  const auto first = decomp.vector(0);
  const double dx = decomp.grid().dx();
  double total = 0.0;
  for (double v : first) total += v;
  total *= dx;
  if (total == 0.0) throw std::runtime_error("principal_eigenpair: eigenvector has zero mean");

  PrincipalEigenpair pair{decomp.eigenvalues()[0], GridFunction(first.begin(), first.end())};
  for (double& v : pair.phi) v /= total;
  for (double v : pair.phi) {
    if (!(v > 0.0)) {
      throw std::runtime_error("principal_eigenpair: first eigenvector changes sign on the grid");
    }
  }
  return pair;
}

namespace {

template <class Multiplier>
GridFunction spectral_filter(const EigenDecomposition& decomp, std::span<const double> u0,
                             Multiplier&& multiplier) {
  GridFunction c = decomp.coefficients(u0);
  const auto mu = decomp.eigenvalues();
  for (std::size_t k = 0; k < c.size(); ++k) c[k] *= multiplier(mu[k]);
  return decomp.synthesize(c);
}

}  // namespace

GridFunction heat_apply(const EigenDecomposition& decomp, double t, std::span<const double> u0) {
  if (!(t >= 0.0)) throw std::invalid_argument("heat_apply: t must be non-negative");
  return spectral_filter(decomp, u0, [t](double mu) { return std::exp(-mu * t); });
}

GridFunction fractional_semigroup_apply(const EigenDecomposition& decomp, double alpha, double t,
                                        std::span<const double> u0) {
  if (!(alpha > 1.0 && alpha <= 2.0)) {
    throw std::invalid_argument("fractional_semigroup_apply: alpha must lie in (1, 2]");
  }
  if (!(t >= 0.0)) throw std::invalid_argument("fractional_semigroup_apply: t must be non-negative");
  const double half = alpha / 2.0;
  return spectral_filter(decomp, u0,
                         [t, half](double mu) { return std::exp(-std::pow(mu, half) * t); });
}

}  // namespace exlab::ops
