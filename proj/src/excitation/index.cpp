#include "exlab/excitation/index.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace exlab::excitation {

void EnergyCurve::validate() const {
  const std::size_t n = lambdas.size();
  if (log_energy.size() != n || stderr_log.size() != n || samples.size() != n) {
    throw std::invalid_argument("EnergyCurve: per-lambda vectors differ in length");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(lambdas[i] > lambdas[i - 1])) {
      throw std::invalid_argument("EnergyCurve: lambda grid must ascend strictly");
    }
  }
}

IndexEstimate index_fit(const EnergyCurve& curve, IndexWindow window) {
  curve.validate();
  const std::size_t n = curve.size();
  if (n < 2) throw std::invalid_argument("index_fit: need at least two lambda values");
  if (curve.lambdas.front() <= 0.0) throw std::invalid_argument("index_fit: lambda must be positive");
  const std::size_t pairs = n - 1;
  const std::size_t count = std::min(std::max<std::size_t>(window.count, 1), pairs);
  const std::size_t first = window.first.value_or(pairs - count);
  if (first + count > pairs) throw std::invalid_argument("index_fit: window exceeds the lambda grid");

  for (std::size_t i = first; i <= first + count; ++i) {
    if (!(curve.log_energy[i] > 1.0)) {
      throw std::invalid_argument("lambda grid too small for double-log fit");
    }
  }

  IndexEstimate est{{}, 0.0, 0.0, first, count};
  for (std::size_t i = first; i < first + count; ++i) {
    const double num = std::log(curve.log_energy[i + 1]) - std::log(curve.log_energy[i]);
    const double den = std::log(curve.lambdas[i + 1]) - std::log(curve.lambdas[i]);
    est.slopes.push_back(num / den);
  }
  const auto [lo, hi] = std::minmax_element(est.slopes.begin(), est.slopes.end());
  est.lower = *lo;
  est.upper = *hi;
  return est;
}

}  // namespace exlab::excitation
