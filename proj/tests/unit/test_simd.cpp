#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "exlab/noise/rng.hpp"
#include "exlab/simd/kernels.hpp"

using namespace exlab;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t stream) {
  noise::RngStream rng(7, stream);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.next_gaussian();
  return v;
}

std::vector<simd::Level> vector_levels() {
  std::vector<simd::Level> out;
  for (auto level : {simd::Level::avx2, simd::Level::neon}) {
    if (simd::level_available(level)) out.push_back(level);
  }
  return out;
}

double rel(double a, double b, double scale) { return std::abs(a - b) / std::max(scale, 1e-300); }

}  // namespace

TEST_CASE("scalar level is always available") {
  CHECK(simd::level_available(simd::Level::scalar));
  CHECK(simd::level_name(simd::Level::scalar) == "scalar");
}

TEST_CASE("vector kernels agree with the scalar reference for every length and tail") {
  for (auto level : vector_levels()) {
    CAPTURE(simd::level_name(level));
    const auto& k = simd::kernels(level);
    for (std::size_t n = 0; n <= 67; ++n) {
      CAPTURE(n);
      const auto a = random_vector(n, 2 * n);
      const auto b = random_vector(n, 2 * n + 1);
      double abs_scale = 0.0, sq_scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        abs_scale += std::abs(a[i] * b[i]);
        sq_scale += a[i] * a[i];
      }
      CHECK(rel(k.dot(a.data(), b.data(), n), simd::scalar::dot(a.data(), b.data(), n),
                abs_scale) < 1e-13);
      CHECK(rel(k.sum_squares(a.data(), n), simd::scalar::sum_squares(a.data(), n), sq_scale) <
            1e-13);

      auto y1 = b, y2 = b;
      k.axpy(0.37, a.data(), y1.data(), n);
      simd::scalar::axpy(0.37, a.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-15));

      const auto s = random_vector(n, 1000 + n);
      std::vector<double> o1(n), o2(n);
      k.noise_update(a.data(), s.data(), b.data(), 3.5, o1.data(), n);
      simd::scalar::noise_update(a.data(), s.data(), b.data(), 3.5, o2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(o1[i] == doctest::Approx(o2[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("kernels leave memory past n untouched") {
  for (auto level : vector_levels()) {
    const auto& k = simd::kernels(level);
    std::vector<double> x(13, 1.0), y(16, -7.0);
    k.axpy(2.0, x.data(), y.data(), 13);
    CHECK(y[12] == 2.0 - 7.0);
    CHECK(y[13] == -7.0);
    CHECK(y[15] == -7.0);
  }
}

TEST_CASE("scoped level restores the previous table") {
  const auto before = simd::active_level();
  {
    simd::ScopedLevel scoped(simd::Level::scalar);
    CHECK(simd::active_level() == simd::Level::scalar);
    const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
    CHECK(simd::dot(a, b) == 32.0);
  }
  CHECK(simd::active_level() == before);
}

TEST_CASE("unavailable level is rejected") {
#if !defined(EXLAB_HAVE_NEON)
  CHECK_THROWS_AS(simd::kernels(simd::Level::neon), std::invalid_argument);
#endif
#if !defined(EXLAB_HAVE_AVX2)
  CHECK_THROWS_AS(simd::kernels(simd::Level::avx2), std::invalid_argument);
#endif
}
