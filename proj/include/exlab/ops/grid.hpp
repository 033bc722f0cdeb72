#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace exlab::ops {

using GridFunction = std::vector<double>;

// Uniform interior grid of (0, L) with homogeneous Dirichlet ends:
// dx = L/(n+1), node(i) = (i+1)*dx for i = 0..n-1.
class Grid1D {
 public:
  Grid1D(double length, std::size_t interior_points);

  double length() const noexcept { return length_; }
  std::size_t size() const noexcept { return n_; }
  double dx() const noexcept { return length_ / static_cast<double>(n_ + 1); }
  double node(std::size_t i) const noexcept { return static_cast<double>(i + 1) * dx(); }

  template <class F>
  GridFunction sample(F&& f) const {
    GridFunction out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = f(node(i));
    return out;
  }

  friend bool operator==(const Grid1D&, const Grid1D&) = default;

 private:
  double length_;
  std::size_t n_;
};

// All grid norms and inner products are dx-weighted rectangle sums.
double inner(const Grid1D& grid, std::span<const double> a, std::span<const double> b);
double norm_l2(const Grid1D& grid, std::span<const double> u);

struct TridiagOperator {
  std::vector<double> sub;    // size n-1, sub[i] couples row i+1 to column i
  std::vector<double> diag;   // size n
  std::vector<double> super;  // size n-1

  std::size_t size() const noexcept { return diag.size(); }
  bool symmetric() const noexcept { return sub == super; }
  GridFunction apply(std::span<const double> u) const;
};

// Three-point Dirichlet Laplacian: diag -2/dx^2, off-diagonals 1/dx^2.
TridiagOperator laplacian_dirichlet(const Grid1D& grid);

}  // namespace exlab::ops
