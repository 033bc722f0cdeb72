#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace exlab::excitation {

// Energy E_t(lambda) = [E ||u(t)||_p^p]^{1/p} over an ascending lambda grid,
// stored as logs since the energies themselves overflow quickly.
struct EnergyCurve {
  double t = 0.0;
  double p = 2.0;
  std::vector<double> lambdas;
  std::vector<double> log_energy;
  std::vector<double> stderr_log;  // standard error of log_energy
  std::vector<std::size_t> samples;

  std::size_t size() const noexcept { return lambdas.size(); }
  // Throws std::invalid_argument unless lambdas ascend strictly and the
  // per-point vectors have matching sizes.
  void validate() const;
};

// Slopes s_i, i = first .. first+count-1, where s_i joins curve points i and
// i+1. Default: the top `count` slopes of the grid.
struct IndexWindow {
  std::optional<std::size_t> first;
  std::size_t count = 3;
};

struct IndexEstimate {
  // s_i = (log log E_{i+1} - log log E_i) / (log lambda_{i+1} - log lambda_i)
  std::vector<double> slopes;  // the window only
  double lower;                // min over the window
  double upper;                // max over the window
  std::size_t window_first;
  std::size_t window_count;
};

// Throws std::invalid_argument("lambda grid too small for double-log fit")
// if some energy in the window is <= e.
IndexEstimate index_fit(const EnergyCurve& curve, IndexWindow window = {});

}  // namespace exlab::excitation
