#pragma once

// Data-parallel inner loops used by the solvers, the energy functionals and
// the Volterra convolution. Every kernel has a scalar reference version; the
// AVX2 and NEON variants are selected once at runtime and must agree with the
// reference to rounding (reductions reassociate, so agreement is not bitwise).

#include <cstddef>
#include <span>
#include <string_view>

namespace exlab::simd {

enum class Level { scalar, avx2, neon };

struct KernelTable {
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i x[i]^2
  double (*sum_squares)(const double* x, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out[i] = u[i] + lambda * s[i] * xi[i]
  void (*noise_update)(const double* u, const double* s, const double* xi,
                       double lambda, double* out, std::size_t n);
};

std::string_view level_name(Level level) noexcept;
bool level_available(Level level) noexcept;

// Table for an explicit level; throws std::invalid_argument if the level was
// not compiled in or the CPU lacks it.
const KernelTable& kernels(Level level);

// Active table. Chosen on first use from the CPU, overridable with
// EXLAB_SIMD=scalar|avx2|neon.
const KernelTable& kernels();
Level active_level();
void set_active_level(Level level);

// Restores the previous level on destruction. Intended for tests.
class ScopedLevel {
 public:
  explicit ScopedLevel(Level level) : previous_(active_level()) { set_active_level(level); }
  ~ScopedLevel() { set_active_level(previous_); }
  ScopedLevel(const ScopedLevel&) = delete;
  ScopedLevel& operator=(const ScopedLevel&) = delete;

 private:
  Level previous_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  return kernels().dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

inline double sum_squares(std::span<const double> x) {
  return kernels().sum_squares(x.data(), x.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  kernels().axpy(alpha, x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum_squares(const double* x, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void noise_update(const double* u, const double* s, const double* xi, double lambda, double* out,
                  std::size_t n);
}  // namespace scalar

#if defined(EXLAB_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double sum_squares(const double* x, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void noise_update(const double* u, const double* s, const double* xi, double lambda, double* out,
                  std::size_t n);
}  // namespace avx2
#endif

#if defined(EXLAB_HAVE_NEON)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
double sum_squares(const double* x, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void noise_update(const double* u, const double* s, const double* xi, double lambda, double* out,
                  std::size_t n);
}  // namespace neon
#endif

}  // namespace exlab::simd
