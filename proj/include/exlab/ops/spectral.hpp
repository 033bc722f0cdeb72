#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <vector>

#include "exlab/ops/grid.hpp"

namespace exlab::ops {

// Spectrum of -L for a symmetric tridiagonal L with eigenvectors normalised in
// the dx-weighted inner product. Immutable; share it by const reference or
// shared_ptr<const>.
class EigenDecomposition {
 public:
  EigenDecomposition(Grid1D grid, std::vector<double> eigenvalues, Eigen::MatrixXd vectors);

  const Grid1D& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return eigenvalues_.size(); }

  // Ascending, all positive for the Dirichlet Laplacian.
  std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
  std::span<const double> vector(std::size_t k) const;

  // c_k = <u, e_k> in the grid inner product.
  GridFunction coefficients(std::span<const double> u) const;
  // sum_k c_k e_k
  GridFunction synthesize(std::span<const double> coefficients) const;

 private:
  Grid1D grid_;
  std::vector<double> eigenvalues_;
  Eigen::MatrixXd vectors_;  // column k is e_k
};

EigenDecomposition eigenpairs(const TridiagOperator& op, const Grid1D& grid);

// Decomposition of the Dirichlet Laplacian on `grid`, computed once per
// (length, n) and shared afterwards.
std::shared_ptr<const EigenDecomposition> dirichlet_decomposition(const Grid1D& grid);

struct PrincipalEigenpair {
  double lambda1;
  GridFunction phi;  // phi > 0 at every node, dx * sum(phi) = 1
};

PrincipalEigenpair principal_eigenpair(const EigenDecomposition& decomp);

// sum_k exp(-mu_k t) <u0, e_k> e_k
GridFunction heat_apply(const EigenDecomposition& decomp, double t, std::span<const double> u0);

// sum_k exp(-mu_k^(alpha/2) t) <u0, e_k> e_k, alpha in (1, 2]
GridFunction fractional_semigroup_apply(const EigenDecomposition& decomp, double alpha, double t,
                                        std::span<const double> u0);

}  // namespace exlab::ops
