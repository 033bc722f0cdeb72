#pragma once

#include <span>

#include "exlab/ops/grid.hpp"

namespace exlab::excitation {

// sqrt(dx sum u^2)
double l2_energy(std::span<const double> u, const ops::Grid1D& grid);
// (dx sum |u|^p)^{1/p}
double lp_energy(std::span<const double> u, const ops::Grid1D& grid, double p);
// log(dx sum |u|^p) computed after scaling by max |u|, so it stays finite
// whenever every entry of u is. -inf for u = 0.
double log_lp_moment(std::span<const double> u, const ops::Grid1D& grid, double p);

}  // namespace exlab::excitation
