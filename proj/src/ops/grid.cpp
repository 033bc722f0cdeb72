#include "exlab/ops/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "exlab/simd/kernels.hpp"

namespace exlab::ops {

Grid1D::Grid1D(double length, std::size_t interior_points) : length_(length), n_(interior_points) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("Grid1D: length must be positive and finite");
  }
  if (interior_points == 0) throw std::invalid_argument("Grid1D: need at least one interior node");
}

double inner(const Grid1D& grid, std::span<const double> a, std::span<const double> b) {
  if (a.size() != grid.size() || b.size() != grid.size()) {
    throw std::invalid_argument("inner: grid function size mismatch");
  }
  return grid.dx() * simd::dot(a, b);
}

double norm_l2(const Grid1D& grid, std::span<const double> u) {
  if (u.size() != grid.size()) throw std::invalid_argument("norm_l2: grid function size mismatch");
  return std::sqrt(grid.dx() * simd::sum_squares(u));
}

GridFunction TridiagOperator::apply(std::span<const double> u) const {
  const std::size_t n = size();
  if (u.size() != n) throw std::invalid_argument("TridiagOperator::apply: size mismatch");
  GridFunction out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = diag[i] * u[i];
    if (i > 0) v += sub[i - 1] * u[i - 1];
    if (i + 1 < n) v += super[i] * u[i + 1];
    out[i] = v;
  }
  return out;
}

TridiagOperator laplacian_dirichlet(const Grid1D& grid) {
  const std::size_t n = grid.size();
  const double inv_h2 = 1.0 / (grid.dx() * grid.dx());
  TridiagOperator op;
  op.diag.assign(n, -2.0 * inv_h2);
  op.sub.assign(n - 1, inv_h2);
  op.super.assign(n - 1, inv_h2);
  return op;
}

}  // namespace exlab::ops
