#include "exlab/excitation/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "exlab/simd/kernels.hpp"

namespace exlab::excitation {

double l2_energy(std::span<const double> u, const ops::Grid1D& grid) {
  return std::sqrt(grid.dx() * simd::sum_squares(u));
}

double lp_energy(std::span<const double> u, const ops::Grid1D& grid, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("lp_energy: p must be positive");
  if (p == 2.0) return l2_energy(u, grid);
  double sum = 0.0;
  for (double v : u) sum += std::pow(std::abs(v), p);
  return std::pow(grid.dx() * sum, 1.0 / p);
}

double log_lp_moment(std::span<const double> u, const ops::Grid1D& grid, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("log_lp_moment: p must be positive");
  double peak = 0.0;
  for (double v : u) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  if (p == 2.0) {
    const double inv = 1.0 / peak;
    for (double v : u) sum += (v * inv) * (v * inv);
  } else {
    for (double v : u) sum += std::pow(std::abs(v) / peak, p);
  }
  return p * std::log(peak) + std::log(grid.dx() * sum);
}

}  // namespace exlab::excitation
