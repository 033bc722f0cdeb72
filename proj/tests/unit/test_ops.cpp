#include <doctest.h>

#include <cmath>
#include <numbers>

#include "exlab/ops/grid.hpp"
#include "exlab/ops/spectral.hpp"
#include "exlab/ops/stable.hpp"
#include "oracles.hpp"

using namespace exlab;
using std::numbers::pi;

TEST_CASE("grid geometry") {
  const ops::Grid1D g(2.0, 3);
  CHECK(g.dx() == 0.5);
  CHECK(g.node(0) == 0.5);
  CHECK(g.node(2) == 1.5);
  const auto one = g.sample([](double) { return 1.0; });
  CHECK(ops::norm_l2(g, one) == doctest::Approx(std::sqrt(1.5)));
  CHECK_THROWS(ops::Grid1D(0.0, 3));
  CHECK_THROWS(ops::Grid1D(1.0, 0));
}

TEST_CASE("laplacian stencil maps sin(k pi x) to a multiple of itself") {
  const ops::Grid1D g(1.0, 40);
  const auto op = ops::laplacian_dirichlet(g);
  CHECK(op.symmetric());
  CHECK(op.diag[0] == doctest::Approx(-2.0 / (g.dx() * g.dx())));
  for (int k : {1, 3, 7}) {
    const auto u = g.sample([k](double x) { return std::sin(k * pi * x); });
    const auto lu = op.apply(u);
    const double s = std::sin(k * pi * g.dx() / 2.0);
    const double mu = 4.0 * s * s / (g.dx() * g.dx());
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(lu[i] == doctest::Approx(-mu * u[i]).epsilon(1e-10));
  }
}

TEST_CASE("dirichlet spectrum matches the discrete closed form") {
  const int n = 127;
  const ops::Grid1D g(1.0, n);
  const auto d = ops::dirichlet_decomposition(g);
  const double dx = g.dx();
  for (int k = 1; k <= n; ++k) {
    const double s = std::sin(k * pi * dx / 2.0);
    const double mu = 4.0 * s * s / (dx * dx);
    CHECK(std::abs(d->eigenvalues()[k - 1] - mu) / mu < 1e-8);
  }
  // orthonormal in the dx-weighted inner product
  CHECK(ops::inner(g, d->vector(0), d->vector(0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(ops::inner(g, d->vector(0), d->vector(5))) < 1e-12);
  CHECK(d.get() == ops::dirichlet_decomposition(g).get());
}

TEST_CASE("principal eigenpair is positive with unit integral") {
  const ops::Grid1D g(1.0, 63);
  const auto pe = ops::principal_eigenpair(*ops::dirichlet_decomposition(g));
  CHECK(pe.lambda1 == doctest::Approx(oracle::discrete_lambda1(1.0, 63)).epsilon(1e-10));
  double mass = 0.0;
  for (double v : pe.phi) {
    CHECK(v > 0.0);
    mass += v * g.dx();
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("heat semigroup: eigen decay, semigroup law, contraction") {
  const ops::Grid1D g(1.0, 50);
  const auto d = ops::dirichlet_decomposition(g);
  const auto e2 = d->vector(1);
  const auto h = ops::heat_apply(*d, 0.01, e2);
  const double decay = std::exp(-d->eigenvalues()[1] * 0.01);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(h[i] == doctest::Approx(decay * e2[i]).epsilon(1e-11));

  const auto u0 = g.sample([](double x) { return x < 0.5 ? 1.0 : -0.3; });
  const auto a = ops::heat_apply(*d, 0.03, u0);
  const auto b = ops::heat_apply(*d, 0.01, ops::heat_apply(*d, 0.02, u0));
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
  CHECK(ops::norm_l2(g, a) <= ops::norm_l2(g, u0));

  const auto z = ops::heat_apply(*d, 0.0, u0);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(z[i] == doctest::Approx(u0[i]).epsilon(1e-12));

  const auto f2 = ops::fractional_semigroup_apply(*d, 2.0, 0.03, u0);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(f2[i] == doctest::Approx(a[i]).epsilon(1e-12));
  const auto f15 = ops::fractional_semigroup_apply(*d, 1.5, 0.03, u0);
  CHECK(ops::norm_l2(g, f15) <= ops::norm_l2(g, u0));
}

TEST_CASE("stable density reference values") {
  CHECK(ops::stable_density(2.0, 1.0, 0.0) == doctest::Approx(0.28209479177387814).epsilon(1e-12));
  CHECK(ops::stable_density(1.0, 1.0, 0.0) == doctest::Approx(1.0 / pi).epsilon(1e-9));
  for (double x : {0.3, 1.0, 4.0, 20.0}) {
    CAPTURE(x);
    CHECK(ops::stable_density(1.0, 1.0, x) == doctest::Approx(1.0 / (pi * (1.0 + x * x))).epsilon(1e-8));
    CHECK(ops::stable_density(2.0, 0.5, x) ==
          doctest::Approx(std::exp(-x * x / 2.0) / std::sqrt(2.0 * pi)).epsilon(1e-12));
  }
  for (double a : {1.25, 1.5, 1.8}) {
    const ops::StableDensity p(a);
    CHECK(p(1.0, 0.0) == doctest::Approx(oracle::stable_at_origin(a, 1.0)).epsilon(1e-9));
    CHECK(p.at_origin(2.5) == doctest::Approx(oracle::stable_at_origin(a, 2.5)).epsilon(1e-14));
    // leading tail coefficient Gamma(1 + a) sin(pi a / 2) / pi
    CHECK(p.tail_coefficient(1) ==
          doctest::Approx(std::tgamma(1.0 + a) * std::sin(pi * a / 2.0) / pi).epsilon(1e-12));
  }
  CHECK_THROWS(ops::StableDensity(2.5));
  CHECK_THROWS(ops::StableDensity(0.0));
}

TEST_CASE("stable density tail follows the expansion") {
  const ops::StableDensity p(1.5);
  const double x = 60.0;
  const double two_terms = p.tail_coefficient(1) * std::pow(x, -2.5) + p.tail_coefficient(2) * std::pow(x, -4.0);
  CHECK(p(1.0, x) == doctest::Approx(two_terms).epsilon(1e-3));
}

TEST_CASE("stable density sandwich between multiples of t |x|^{-1-a}") {
  // Constants chosen from a sweep at t = 1 over |x| in [5, 50]; the measured
  // ratio range there is [0.302, 0.398].
  const ops::StableDensity p(1.5);
  for (double x = 5.0; x <= 50.0; x += 0.5) {
    const double ratio = p(1.0, x) * std::pow(x, 2.5);
    CHECK(ratio >= 0.29);
    CHECK(ratio <= 0.41);
    CHECK(p(1.0, -x) == p(1.0, x));
  }
}

TEST_CASE("stable identity suite") {
  for (double a : {1.25, 1.5, 2.0}) {
    CAPTURE(a);
    const auto r = ops::stable_identity_suite(a, 2.0, 0.5, 0.7);
    CHECK(r.scaling_residual < 1e-9);
    CHECK(r.convolution_residual < 1e-6);
    CHECK(r.normalization_residual < 1e-6);
  }
}

TEST_CASE("product lower bound diagnostic") {
  // t = 4 gives p(t, 0) < 1 for alpha = 1.5
  const std::vector<double> pts{-3.0, -1.0, 0.0, 0.5, 2.0, 6.0};
  const auto r = ops::stable_product_bound_check(1.5, 4.0, 3.0, pts);
  CHECK(r.checked == pts.size() * pts.size());
  CHECK(r.violations == 0);
  CHECK(r.worst_margin >= 0.0);
}
