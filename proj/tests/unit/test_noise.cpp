#include <doctest.h>

#include <cmath>
#include <numeric>

#include "exlab/noise/noise.hpp"
#include "exlab/noise/rng.hpp"

using namespace exlab;
using noise::PhiloxCounter;
using noise::PhiloxKey;

// Known-answer vectors published with the Random123 reference implementation.
TEST_CASE("philox4x32-10 known answers") {
  CHECK(noise::philox4x32_10({0, 0, 0, 0}, {0, 0}) ==
        PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(noise::philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                             {0xffffffffu, 0xffffffffu}) ==
        PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(noise::philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                             {0xa4093822u, 0x299f31d0u}) ==
        PhiloxCounter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are reproducible and independent of each other") {
  noise::RngStream a(42, 3), b(42, 3), c(42, 4), d(43, 3);
  bool differs_c = false, differs_d = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs_c |= x != c.next_u64();
    differs_d |= x != d.next_u64();
  }
  CHECK(differs_c);
  CHECK(differs_d);
}

TEST_CASE("uniforms stay inside the open interval") {
  noise::RngStream s(1, 0);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.next_uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("gaussian moments") {
  noise::RngStream s(2024, 0);
  const int n = 400000;
  double m1 = 0, m2 = 0, m4 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = s.next_gaussian();
    m1 += z;
    m2 += z * z;
    m4 += z * z * z * z;
  }
  m1 /= n;
  m2 /= n;
  m4 /= n;
  // 5 standard errors: sd(mean) = 1/sqrt(n), sd(m2) = sqrt(2/n), sd(m4) = sqrt(96/n)
  CHECK(std::abs(m1) < 5.0 / std::sqrt(n));
  CHECK(std::abs(m2 - 1.0) < 5.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(m4 - 3.0) < 5.0 * std::sqrt(96.0 / n));
}

TEST_CASE("brownian path increments have variance dt") {
  const double dt = 0.01;
  double sum_sq = 0.0;
  std::size_t count = 0;
  for (std::uint64_t k = 0; k < 200; ++k) {
    noise::RngStream s(5, k);
    const auto path = noise::brownian_path(s, 100, dt);
    REQUIRE(path.values.size() == 101);
    CHECK(path.values[0] == 0.0);
    for (std::size_t i = 1; i < path.values.size(); ++i) {
      const double inc = path.values[i] - path.values[i - 1];
      sum_sq += inc * inc;
      ++count;
    }
  }
  const double var = sum_sq / count;
  CHECK(std::abs(var / dt - 1.0) < 5.0 * std::sqrt(2.0 / count));
}

TEST_CASE("white noise cells have variance dt/dx") {
  const ops::Grid1D grid(1.0, 31);
  const double dt = 1e-3;
  noise::RngStream s(9, 0);
  const auto field = noise::white_noise_field(grid, 2000, dt, s);
  REQUIRE(field.cells.size() == 2000 * 31);
  double sum_sq = 0.0;
  for (double x : field.cells) sum_sq += x * x;
  const double var = sum_sq / field.cells.size();
  CHECK(std::abs(var / (dt / grid.dx()) - 1.0) < 5.0 * std::sqrt(2.0 / field.cells.size()));

  noise::RngStream again(9, 0);
  std::vector<double> row(31);
  noise::white_noise_row(grid, dt, again, row);
  for (std::size_t i = 0; i < 31; ++i) CHECK(row[i] == field.row(0)[i]);
}

TEST_CASE("exponential kernel factor reproduces the covariance") {
  const ops::Grid1D grid(1.0, 16);
  const auto spec = noise::exponential_kernel(0.3, 1.0);
  const auto f = noise::qwiener_factor(spec, grid);
  CHECK(f.jitter == 0.0);
  const Eigen::MatrixXd ffT = f.lower * f.lower.transpose();
  double worst = 0.0;
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 16; ++j)
      worst = std::max(worst, std::abs(ffT(i, j) - std::exp(-std::abs(grid.node(i) - grid.node(j)) / 0.3)));
  CHECK(worst < 1e-10);
  CHECK(*spec.lower == doctest::Approx(std::exp(-1.0 / 0.3)));
  CHECK(*spec.upper == 1.0);
}

TEST_CASE("constant kernel factors exactly and gives spatially constant increments") {
  const ops::Grid1D grid(1.0, 24);
  const auto f = noise::qwiener_factor(noise::constant_kernel(0.5), grid);
  CHECK(f.jitter == 0.0);
  noise::RngStream s(3, 1);
  const auto inc = noise::qwiener_increment(f, 0.01, s);
  for (double v : inc) CHECK(v == inc[0]);
}

TEST_CASE("q-wiener increments have covariance dt q") {
  const ops::Grid1D grid(1.0, 4);
  const auto spec = noise::exponential_kernel(0.5, 1.0);
  const auto f = noise::qwiener_factor(spec, grid);
  const double dt = 0.02;
  const int m = 100000;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(4, 4);
  noise::RngStream s(11, 0);
  for (int k = 0; k < m; ++k) {
    const auto w = noise::qwiener_increment(f, dt, s);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) cov(i, j) += w[i] * w[j];
  }
  cov /= m * dt;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double q = spec.q(grid.node(i), grid.node(j));
      // sd of the sample covariance is about sqrt((1 + q^2) / m)
      CHECK(std::abs(cov(i, j) - q) < 5.0 * std::sqrt((1.0 + q * q) / m));
    }
}

TEST_CASE("indefinite kernel is rejected") {
  const ops::Grid1D grid(1.0, 8);
  noise::CovKernelSpec bad{[](double, double) { return -1.0; }, std::nullopt, std::nullopt};
  CHECK_THROWS_WITH_AS(noise::qwiener_factor(bad, grid), "kernel not positive semidefinite on grid",
                       std::runtime_error);
  noise::CovKernelSpec asym{[](double x, double y) { return 1.0 + x - y; }, std::nullopt, std::nullopt};
  CHECK_THROWS(noise::qwiener_factor(asym, grid));
}
