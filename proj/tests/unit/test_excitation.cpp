#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "exlab/errors.hpp"
#include "exlab/excitation/bounds.hpp"
#include "exlab/excitation/energy.hpp"
#include "exlab/excitation/index.hpp"
#include "exlab/excitation/monte_carlo.hpp"
#include "exlab/ops/spectral.hpp"

using namespace exlab;
using namespace exlab::excitation;

namespace {

solvers::SpdeProblem band_problem(std::size_t n = 64) {
  const ops::Grid1D g(1.0, n);
  return {g, solvers::SingleBrownian{}, 1.0, solvers::sigma_linear(),
          g.sample([](double x) { return 1.0 + std::sin(3.14159 * x); }), nullptr};
}

}  // namespace

TEST_CASE("energy functionals") {
  const ops::Grid1D g(1.0, 3);  // dx = 1/4
  const std::vector<double> u{1.0, -2.0, 2.0};
  CHECK(l2_energy(u, g) == doctest::Approx(std::sqrt(9.0 / 4.0)));
  CHECK(lp_energy(u, g, 4.0) == doctest::Approx(std::pow(33.0 / 4.0, 0.25)));
  CHECK(log_lp_moment(u, g, 3.0) == doctest::Approx(std::log(17.0 / 4.0)));
  const std::vector<double> big{1e200, -1e200, 0.0};
  CHECK(log_lp_moment(big, g, 2.0) == doctest::Approx(400.0 * std::log(10.0) + std::log(0.5)));
  const std::vector<double> zero(3, 0.0);
  CHECK(log_lp_moment(zero, g, 2.0) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("log-domain reduction matches the direct mean") {
  const std::vector<double> y{1.0, 2.0, 4.0, 0.5, 3.0};
  std::vector<double> logs;
  for (double v : y) logs.push_back(std::log(v));
  const auto est = reduce_log_samples(logs, 2.0);
  const double m = 5.0, mean = 10.5 / m;
  double var = 0.0;
  for (double v : y) var += (v - mean) * (v - mean);
  var /= m - 1.0;
  CHECK(est.moment() == doctest::Approx(mean));
  CHECK(est.stderr_log_moment == doctest::Approx(std::sqrt(var / m) / mean));
  CHECK(est.log_energy() == doctest::Approx(std::log(mean) / 2.0));

  // shifting every log by 1000 only shifts the result
  std::vector<double> shifted = logs;
  for (auto& v : shifted) v += 1000.0;
  const auto big = reduce_log_samples(shifted, 2.0);
  CHECK(big.log_moment == doctest::Approx(est.log_moment + 1000.0));
  CHECK(big.stderr_log_moment == doctest::Approx(est.stderr_log_moment));
}

TEST_CASE("parallel map is independent of the worker count") {
  auto f = [](std::size_t i) { return std::sin(static_cast<double>(i)) * 1e3; };
  const auto one = parallel_map(1000, 1, f);
  const auto four = parallel_map(1000, 4, f);
  CHECK(one == four);
  CHECK_THROWS_WITH(parallel_map(100, 3, [](std::size_t i) -> double {
                      if (i == 40 || i == 70) throw std::runtime_error("fail " + std::to_string(i));
                      return 0.0;
                    }),
                    "fail 40");
}

TEST_CASE("exact sampler agrees with the closed form") {
  auto prob = band_problem();
  const auto d = ops::dirichlet_decomposition(prob.grid);
  MonteCarloOptions o;
  o.t = 0.5;
  o.p = 2.0;
  o.samples = 20000;
  o.base_seed = 31;
  const auto est = mc_energy(prob, 1.5, o);
  const double closed = solvers::linear_exact_log_moment(*d, prob.u0, 1.5, 0.5, 2.0);
  CHECK(std::abs(est.moment() / std::exp(closed) - 1.0) < 4.0 * est.stderr_log_moment);

  o.tilt = optimal_tilt(prob, 1.5, 2.0);
  CHECK(o.tilt == doctest::Approx(3.0));
  const auto tilted = mc_energy(prob, 1.5, o);
  CHECK(tilted.log_moment == doctest::Approx(closed).epsilon(1e-12));
  CHECK(tilted.stderr_log_moment < 1e-10);
}

TEST_CASE("monte carlo results do not depend on thread count") {
  auto prob = band_problem(32);
  MonteCarloOptions o;
  o.t = 0.1;
  o.samples = 64;
  o.sampler = Sampler::scheme;
  o.dt = 1e-3;
  o.threads = 1;
  const auto a = mc_energy(prob, 2.0, o);
  o.threads = 3;
  const auto b = mc_energy(prob, 2.0, o);
  CHECK(a.log_moment == b.log_moment);
  CHECK(a.stderr_log_moment == b.stderr_log_moment);
}

TEST_CASE("exact sampler refuses nonlinear sigma and white noise") {
  auto prob = band_problem(16);
  prob.sigma = solvers::sigma_scaled_sin_plus_linear();
  MonteCarloOptions o;
  o.samples = 10;
  CHECK_THROWS_AS(mc_energy(prob, 1.0, o), ConfigError);
  prob.sigma = solvers::sigma_linear();
  prob.noise = solvers::SpaceTimeWhiteNoise{};
  CHECK_THROWS_AS(mc_energy(prob, 1.0, o), ConfigError);
}

TEST_CASE("gbm monte carlo") {
  MonteCarloOptions o;
  o.t = 1.0;
  o.samples = 50000;
  o.base_seed = 8;
  const auto est = mc_gbm_moment(1.0, 1.0, o);
  CHECK(std::abs(est.moment() - std::exp(1.0)) < 4.0 * est.moment_stderr());
}

TEST_CASE("index fit recovers q from exp(c lambda^q)") {
  for (double q : {1.0, 2.0, 3.5}) {
    EnergyCurve c;
    c.t = 1.0;
    c.p = 2.0;
    c.lambdas = {2, 4, 8, 16, 32};
    for (double l : c.lambdas) {
      c.log_energy.push_back(0.7 * std::pow(l, q));
      c.stderr_log.push_back(0.0);
      c.samples.push_back(0);
    }
    const auto fit = index_fit(c);
    CHECK(fit.slopes.size() == 3);
    CHECK(fit.window_first == 1);
    for (double s : fit.slopes) CHECK(s == doctest::Approx(q).epsilon(1e-12));
    const auto first = index_fit(c, {0, 2});
    CHECK(first.slopes.size() == 2);
  }
}

TEST_CASE("index fit rejects energies below e and bad grids") {
  EnergyCurve c;
  c.lambdas = {1, 2, 4};
  c.log_energy = {0.5, 2.0, 8.0};
  c.stderr_log = {0, 0, 0};
  c.samples = {0, 0, 0};
  CHECK_THROWS_WITH(index_fit(c, {0, 2}), "lambda grid too small for double-log fit");
  CHECK_NOTHROW(index_fit(c, {1, 1}));
  c.lambdas = {1, 1, 4};
  CHECK_THROWS(c.validate());
}

TEST_CASE("gronwall check in log form") {
  EnergyCurve c;
  c.t = 0.5;
  c.p = 2.0;
  c.lambdas = {2.0, 4.0};
  // log energy = half the log second moment
  c.log_energy = {0.5 * (4.0 * 0.5 - 0.1), 0.5 * (16.0 * 0.5 + 0.01)};
  c.stderr_log = {0.0, 0.001};
  c.samples = {100, 100};
  const auto r = gronwall_upper_check(c, 1.0, 1.0);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].pass);
  CHECK(r.rows[0].bound == doctest::Approx(2.0));
  CHECK(r.rows[0].slack == doctest::Approx(0.1));
  CHECK(r.rows[0].allowance == kRoundoffAllowance);
  // exceeds the bound by 1%, allowance is 3 x 2 x 0.001 = 0.6%
  CHECK_FALSE(r.rows[1].pass);
  CHECK(r.failed() == 1);
}

TEST_CASE("spectral lower check on the linear problem") {
  const ops::Grid1D g(1.0, 32);
  const auto d = ops::dirichlet_decomposition(g);
  auto pe = std::make_shared<const ops::PrincipalEigenpair>(ops::principal_eigenpair(*d));
  const auto e1 = d->vector(0);
  solvers::SpdeProblem prob{g, solvers::SingleBrownian{}, 1.0, solvers::sigma_linear(),
                            ops::GridFunction(e1.begin(), e1.end()), pe};
  MonteCarloOptions o;
  o.t = 0.5;
  o.samples = 4000;
  o.base_seed = 2;
  const std::vector<double> lambdas{1.0, 2.0};
  const auto r = spectral_lower_check(prob, lambdas, o);
  REQUIRE(r.rows.size() == 2);
  for (const auto& row : r.rows) {
    CHECK(row.check_name == kSpectralLower);
    CHECK(row.pass);
  }
  prob.eigenpair = nullptr;
  CHECK_THROWS(spectral_lower_check(prob, lambdas, o));
}

TEST_CASE("bound rows sort by lambda then name") {
  std::vector<BoundCheckRow> rows{{4, 0.5, kSpectralLower, 0, 0, 0, 0, true},
                                  {2, 0.5, kSpectralLower, 0, 0, 0, 0, true},
                                  {4, 0.5, kGronwallUpper, 0, 0, 0, 0, true}};
  sort_rows(rows);
  CHECK(rows[0].lambda == 2);
  CHECK(rows[1].check_name == kGronwallUpper);
  CHECK(rows[2].check_name == kSpectralLower);
}
