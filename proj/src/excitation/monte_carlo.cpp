#include "exlab/excitation/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

#include "exlab/errors.hpp"
#include "exlab/excitation/energy.hpp"
#include "exlab/noise/rng.hpp"
#include "exlab/simd/kernels.hpp"

namespace exlab::excitation {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kChunk = 32;

std::string at_point(double lambda, double t) {
  std::ostringstream out;
  out << "lambda=" << lambda << ", t=" << t;
  return out.str();
}

// Runs the per-trajectory evaluator and reduces, attaching (lambda, t) to
// overflow diagnostics.
MomentEstimate run_and_reduce(std::size_t samples, unsigned threads, double p, double lambda,
                              double t, const std::function<double(std::size_t)>& log_value) {
  if (samples < 2) throw std::invalid_argument("Monte Carlo: need at least 2 samples");
  try {
    const std::vector<double> logs = parallel_map(samples, threads, log_value);
    return reduce_log_samples(logs, p);
  } catch (const NumericOverflow& e) {
    throw NumericOverflow("overflow at " + at_point(lambda, t) + ": " + e.what());
  }
}

// The exact route for Q-Wiener noise needs W(t, .) to be spatially constant,
// i.e. a factor whose only nonzero column is a constant first column.
double constant_kernel_variance(const noise::CovarianceFactor& factor) {
  const auto& f = factor.lower;
  const double first = f(0, 0);
  for (Eigen::Index i = 0; i < f.rows(); ++i) {
    if (f(i, 0) != first) return -1.0;
    for (Eigen::Index j = 1; j < f.cols(); ++j) {
      if (f(i, j) != 0.0) return -1.0;
    }
  }
  return first * first;
}

void require_linear(const solvers::SpdeProblem& problem) {
  if (!problem.sigma.is_linear) {
    throw ConfigError("exact linear sampler requires sigma = linear (got '" + problem.sigma.name + "')");
  }
}

// Exact route: log of the random scalar factor e^{lambda W - lambda^2 q t/2}
// raised to `power`, plus the Girsanov weight. One call per trajectory.
struct ExactDriver {
  double q = 1.0;
  const noise::CovarianceFactor* factor = nullptr;  // Q-Wiener only

  static ExactDriver make(const solvers::SpdeProblem& problem) {
    require_linear(problem);
    ExactDriver driver;
    if (const auto* qn = std::get_if<solvers::QWienerNoise>(&problem.noise)) {
      driver.q = constant_kernel_variance(*qn->factor);
      if (driver.q < 0.0) {
        throw ConfigError("exact sampler for Q-Wiener noise needs a constant kernel");
      }
      driver.factor = qn->factor.get();
    } else if (std::holds_alternative<solvers::SpaceTimeWhiteNoise>(problem.noise)) {
      throw ConfigError("no exact sampler for space-time white noise; use sampler=scheme");
    }
    return driver;
  }

  double log_factor(noise::RngStream& stream, double lambda, double t, double tilt,
                    double power) const {
    const double sqrt_t = std::sqrt(t);
    double latent;  // endpoint of the (possibly drifted) driving coordinate
    double w;       // W(t, x), identical for all x
    if (factor == nullptr) {
      latent = sqrt_t * stream.next_gaussian() + tilt * t;
      w = latent;
    } else {
      std::vector<double> z(static_cast<std::size_t>(factor->lower.rows()));
      for (double& v : z) v = sqrt_t * stream.next_gaussian();
      z[0] += tilt * t;
      latent = z[0];
      const std::vector<double> field = noise::qwiener_from_latent(*factor, z, 1.0);
      w = field[0];
      for (double v : field) {
        if (v != w) throw std::logic_error("exact Q-Wiener route: field is not spatially constant");
      }
    }
    double out = power * (lambda * w - 0.5 * lambda * lambda * q * t);
    if (tilt != 0.0) out += -tilt * latent + 0.5 * tilt * tilt * t;
    return out;
  }
};

solvers::SpdeProblem with_lambda(const solvers::SpdeProblem& problem, double lambda) {
  solvers::SpdeProblem copy = problem;
  copy.lambda = lambda;
  copy.validate();
  return copy;
}

}  // namespace

double MomentEstimate::moment() const { return std::exp(log_moment); }
double MomentEstimate::moment_stderr() const { return moment() * stderr_log_moment; }

MomentEstimate reduce_log_samples(std::span<const double> log_values, double p) {
  const std::size_t m = log_values.size();
  if (m < 2) throw std::invalid_argument("reduce_log_samples: need at least 2 samples");
  double peak = kNegInf;
  for (double v : log_values) {
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
      throw NumericOverflow("non-finite trajectory log value");
    }
    peak = std::max(peak, v);
  }
  if (peak == kNegInf) return {kNegInf, 0.0, p, m, 0.0};
  double s1 = 0.0;
  double s2 = 0.0;
  for (double v : log_values) {
    const double e = std::exp(v - peak);
    s1 += e;
    s2 += e * e;
  }
  const double md = static_cast<double>(m);
  const double log_moment = peak + std::log(s1 / md);
  // var(Y)/E(Y)^2 with the unbiased variance
  const double rel_var = std::max(0.0, (md * s2 / (s1 * s1) - 1.0) * md / (md - 1.0));
  return {log_moment, std::sqrt(rel_var / md), p, m, 0.0};
}

unsigned worker_count(unsigned requested) {
  unsigned n = requested;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("EXLAB_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return std::max(1u, n);
}

std::vector<double> parallel_map(std::size_t count, unsigned threads,
                                 const std::function<double(std::size_t)>& f) {
  std::vector<double> out(count);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(worker_count(threads), (count + kChunk - 1) / kChunk));

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::size_t failed_index = count;
  std::exception_ptr failure;

  auto work = [&] {
    for (;;) {
      const std::size_t begin = next.fetch_add(kChunk);
      if (begin >= count) return;
      const std::size_t end = std::min(count, begin + kChunk);
      for (std::size_t i = begin; i < end; ++i) {
        try {
          out[i] = f(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (i < failed_index) {
            failed_index = i;
            failure = std::current_exception();
          }
          break;
        }
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

double optimal_tilt(const solvers::SpdeProblem& problem, double lambda, double p) {
  double q = 1.0;
  if (const auto* qn = std::get_if<solvers::QWienerNoise>(&problem.noise)) {
    q = qn->factor->lower.row(0).squaredNorm();
  }
  return p * lambda * std::sqrt(q);
}

MomentEstimate mc_energy(const solvers::SpdeProblem& problem, double lambda,
                         const MonteCarloOptions& options) {
  if (!(options.p > 0.0)) throw std::invalid_argument("mc_energy: p must be positive");
  if (!(options.t >= 0.0)) throw std::invalid_argument("mc_energy: t must be non-negative");
  const solvers::SpdeProblem prob = with_lambda(problem, lambda);
  const double t = options.t;
  const double p = options.p;

  if (options.sampler == Sampler::exact_linear) {
    const ExactDriver driver = ExactDriver::make(prob);
    const auto decomp = ops::dirichlet_decomposition(prob.grid);
    const double log_heat = log_lp_moment(ops::heat_apply(*decomp, t, prob.u0), prob.grid, p);
    return run_and_reduce(options.samples, options.threads, p, lambda, t, [&](std::size_t i) {
      noise::RngStream stream(options.base_seed, i);
      return driver.log_factor(stream, lambda, t, options.tilt, p) + log_heat;
    });
  }

  std::vector<std::size_t> negatives(options.samples, 0);
  MomentEstimate est =
      run_and_reduce(options.samples, options.threads, p, lambda, t, [&](std::size_t i) {
        noise::RngStream stream(options.base_seed, i);
        const solvers::Trajectory traj = solvers::simulate(prob, t, options.dt, stream, options.tilt);
        negatives[i] = traj.negative_nodes;
        return traj.log_weight + log_lp_moment(traj.state.u, prob.grid, p);
      });
  double total = 0.0;
  for (std::size_t c : negatives) total += static_cast<double>(c);
  est.negative_fraction =
      total / (static_cast<double>(options.samples) * static_cast<double>(prob.grid.size()));
  return est;
}

MomentEstimate mc_projection_second_moment(const solvers::SpdeProblem& problem, double lambda,
                                           const MonteCarloOptions& options) {
  if (!problem.eigenpair) {
    throw std::invalid_argument("mc_projection_second_moment: problem has no eigenpair attached");
  }
  const solvers::SpdeProblem prob = with_lambda(problem, lambda);
  const double t = options.t;

  auto log_square = [](double x) { return x == 0.0 ? kNegInf : 2.0 * std::log(std::abs(x)); };

  if (options.sampler == Sampler::exact_linear) {
    const ExactDriver driver = ExactDriver::make(prob);
    const auto decomp = ops::dirichlet_decomposition(prob.grid);
    const ops::GridFunction h = ops::heat_apply(*decomp, t, prob.u0);
    const double log_proj = log_square(prob.grid.dx() * simd::dot(h, prob.eigenpair->phi));
    return run_and_reduce(options.samples, options.threads, 2.0, lambda, t, [&](std::size_t i) {
      noise::RngStream stream(options.base_seed, i);
      return driver.log_factor(stream, lambda, t, options.tilt, 2.0) + log_proj;
    });
  }

  return run_and_reduce(options.samples, options.threads, 2.0, lambda, t, [&](std::size_t i) {
    noise::RngStream stream(options.base_seed, i);
    const solvers::Trajectory traj = solvers::simulate(prob, t, options.dt, stream, options.tilt);
    return traj.log_weight + log_square(*traj.projection);
  });
}

MomentEstimate mc_gbm_moment(double x, double lambda, const MonteCarloOptions& options) {
  if (!(x > 0.0)) throw std::invalid_argument("mc_gbm_moment: x must be positive");
  const double t = options.t;
  const double p = options.p;
  const double log_x = std::log(x);
  return run_and_reduce(options.samples, options.threads, p, lambda, t, [&](std::size_t i) {
    noise::RngStream stream(options.base_seed, i);
    const double b = std::sqrt(t) * stream.next_gaussian() + options.tilt * t;
    double out = p * (log_x + lambda * b - 0.5 * lambda * lambda * t);
    if (options.tilt != 0.0) out += -options.tilt * b + 0.5 * options.tilt * options.tilt * t;
    return out;
  });
}

}  // namespace exlab::excitation
