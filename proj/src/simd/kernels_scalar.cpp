#include "exlab/simd/kernels.hpp"

namespace exlab::simd::scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum_squares(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void noise_update(const double* u, const double* s, const double* xi, double lambda, double* out,
                  std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = u[i] + lambda * s[i] * xi[i];
}

}  // namespace exlab::simd::scalar
