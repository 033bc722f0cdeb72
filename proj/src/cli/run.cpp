#include "exlab/cli/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "exlab/cli/scenarios.hpp"
#include "exlab/errors.hpp"
#include "exlab/excitation/energy.hpp"
#include "exlab/excitation/monte_carlo.hpp"
#include "exlab/excitation/renewal.hpp"
#include "exlab/ops/spectral.hpp"
#include "exlab/simd/kernels.hpp"
#include "exlab/solvers/spde.hpp"

#ifndef EXLAB_VERSION
#define EXLAB_VERSION "unknown"
#endif

namespace exlab::cli {
namespace {

using nlohmann::json;
using excitation::EnergyCurve;
using excitation::MomentEstimate;

struct Context {
  const ExperimentConfig& cfg;
  EnergyCurve curve;
  std::vector<excitation::BoundCheckRow> bounds;
  json extras = json::object();
};

ops::GridFunction build_u0(const ExperimentConfig& cfg, const ops::Grid1D& grid,
                           const ops::EigenDecomposition& decomp) {
  const std::string& kind = *cfg.u0;
  if (kind == "eigenfunction") {
    const auto e1 = decomp.vector(0);
    return {e1.begin(), e1.end()};
  }
  if (kind == "indicator") {
    const double centre = 0.5 * cfg.L;
    return grid.sample([&](double x) { return std::abs(x - centre) <= cfg.u0_l ? 1.0 : 0.0; });
  }
  // constant-band: c1 at the ends rising to c2 mid-domain, c1 <= u0 <= c2
  return grid.sample([&](double x) {
    return cfg.u0_c1 + (cfg.u0_c2 - cfg.u0_c1) * std::sin(std::numbers::pi * x / cfg.L);
  });
}

solvers::SpdeProblem build_problem(const ExperimentConfig& cfg) {
  const ops::Grid1D grid(cfg.L, cfg.n);
  const auto decomp = ops::dirichlet_decomposition(grid);
  solvers::NoiseKind noise_kind = solvers::SingleBrownian{};
  if (*cfg.noise == "q_wiener") {
    noise::CovKernelSpec kernel = *cfg.kernel == "constant"
                                      ? noise::constant_kernel(cfg.q0)
                                      : noise::exponential_kernel(cfg.kernel_length, cfg.L);
    noise_kind = solvers::make_qwiener_noise(std::move(kernel), grid);
  } else if (*cfg.noise == "space_time_white") {
    noise_kind = solvers::SpaceTimeWhiteNoise{};
  }
  solvers::SpdeProblem problem{
      grid,
      std::move(noise_kind),
      0.0,
      solvers::sigma_from_name(cfg.sigma),
      build_u0(cfg, grid, *decomp),
      std::make_shared<const ops::PrincipalEigenpair>(ops::principal_eigenpair(*decomp))};
  problem.validate();
  return problem;
}

excitation::MonteCarloOptions mc_options(const ExperimentConfig& cfg, double p) {
  excitation::MonteCarloOptions opts;
  opts.t = *cfg.t;
  opts.p = p;
  opts.samples = *cfg.samples;
  opts.base_seed = cfg.seed;
  opts.sampler = *cfg.sampler == "exact" ? excitation::Sampler::exact_linear : excitation::Sampler::scheme;
  opts.dt = cfg.dt;
  return opts;
}

double tilt_for(const ExperimentConfig& cfg, const solvers::SpdeProblem& problem, double lambda,
                double p) {
  const auto fixed = parse_tilt(*cfg.tilt);
  if (fixed) return *fixed;
  if (std::holds_alternative<solvers::SpaceTimeWhiteNoise>(problem.noise)) return 0.0;
  return excitation::optimal_tilt(problem, lambda, p);
}

void push_row(EnergyCurve& curve, double lambda, double log_energy, double stderr_log,
              std::size_t samples) {
  curve.lambdas.push_back(lambda);
  curve.log_energy.push_back(log_energy);
  curve.stderr_log.push_back(stderr_log);
  curve.samples.push_back(samples);
}

EnergyCurve empty_curve(const ExperimentConfig& cfg, double p) {
  EnergyCurve c;
  c.t = *cfg.t;
  c.p = p;
  return c;
}

json index_json(const excitation::IndexEstimate& est) {
  return {{"slopes", est.slopes},
          {"lower", est.lower},
          {"upper", est.upper},
          {"window_first", est.window_first},
          {"window_count", est.window_count}};
}

// lambda_eff^2 = lambda^2 q0 for a constant kernel, lambda^2 otherwise.
double effective_lambda(const ExperimentConfig& cfg, double lambda) {
  if (*cfg.noise == "q_wiener") return lambda * std::sqrt(cfg.q0);
  return lambda;
}

void scenario_gbm(Context& ctx) {
  const auto& cfg = ctx.cfg;
  ctx.curve = empty_curve(cfg, cfg.p);
  json moments = json::array();
  for (double lambda : *cfg.lambda_grid) {
    auto opts = mc_options(cfg, cfg.p);
    const auto tilt = parse_tilt(*cfg.tilt);
    opts.tilt = tilt ? *tilt : cfg.p * lambda;
    const MomentEstimate est = excitation::mc_gbm_moment(cfg.gbm_x, lambda, opts);
    push_row(ctx.curve, lambda, est.log_energy(), est.stderr_log_energy(), est.samples);
    const double oracle = solvers::gbm_moment(cfg.gbm_x, lambda, *cfg.t, cfg.p);
    const double se = est.moment_stderr();
    moments.push_back({{"lambda", lambda},
                       {"estimate", est.moment()},
                       {"stderr", se},
                       {"oracle", oracle},
                       {"z_score", se > 0.0 ? (est.moment() - oracle) / se : 0.0}});
  }
  ctx.extras["moments"] = moments;
}

void scenario_monte_carlo(Context& ctx, bool closed_form_reference) {
  const auto& cfg = ctx.cfg;
  const solvers::SpdeProblem problem = build_problem(cfg);
  const auto decomp = ops::dirichlet_decomposition(problem.grid);
  ctx.curve = empty_curve(cfg, cfg.p);
  json per_lambda = json::array();
  for (double lambda : *cfg.lambda_grid) {
    auto opts = mc_options(cfg, cfg.p);
    opts.tilt = tilt_for(cfg, problem, lambda, cfg.p);
    const MomentEstimate est = excitation::mc_energy(problem, lambda, opts);
    push_row(ctx.curve, lambda, est.log_energy(), est.stderr_log_energy(), est.samples);
    json row{{"lambda", lambda}, {"tilt", opts.tilt}, {"negative_fraction", est.negative_fraction}};
    if (closed_form_reference && problem.sigma.is_linear &&
        !std::holds_alternative<solvers::SpaceTimeWhiteNoise>(problem.noise)) {
      const bool constant_kernel = *cfg.noise != "q_wiener" || *cfg.kernel == "constant";
      if (constant_kernel) {
        row["closed_form_log_energy"] =
            solvers::linear_exact_log_moment(*decomp, problem.u0, effective_lambda(cfg, lambda),
                                             *cfg.t, cfg.p) /
            cfg.p;
      }
    }
    per_lambda.push_back(row);
  }
  ctx.extras["per_lambda"] = per_lambda;
  ctx.extras["sampler"] = *cfg.sampler;
}

void scenario_linear_exact(Context& ctx) {
  const auto& cfg = ctx.cfg;
  if (*cfg.estimator == "mc") {
    scenario_monte_carlo(ctx, true);
    return;
  }
  const solvers::SpdeProblem problem = build_problem(cfg);
  const auto decomp = ops::dirichlet_decomposition(problem.grid);
  ctx.curve = empty_curve(cfg, cfg.p);
  for (double lambda : *cfg.lambda_grid) {
    const double log_moment = solvers::linear_exact_log_moment(
        *decomp, problem.u0, effective_lambda(cfg, lambda), *cfg.t, cfg.p);
    push_row(ctx.curve, lambda, log_moment / cfg.p, 0.0, 0);
  }
  ctx.extras["estimator"] = "closed_form";
}

void scenario_renewal(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const excitation::FractionalInitial u0{
      *cfg.u0 == "delta" ? excitation::InitialKind::delta : excitation::InitialKind::indicator, cfg.u0_l};
  const solvers::SigmaSpec sigma = solvers::sigma_from_name(cfg.sigma);
  const double t = *cfg.t;
  ctx.curve = empty_curve(cfg, 2.0);
  ctx.extras["target_index"] = 2.0 * cfg.alpha / (cfg.alpha - 1.0);
  ctx.extras["beta"] = excitation::renewal_beta(cfg.alpha);

  const excitation::Forcing forcing = excitation::fractional_forcing(cfg.alpha, u0, t, cfg.volterra_steps);
  auto solve = [&](double gain) {
    excitation::RenewalProblem prob;
    prob.forcing = forcing;
    prob.gain = gain;
    prob.beta = excitation::renewal_beta(cfg.alpha);
    prob.horizon = t;
    prob.steps = cfg.volterra_steps;
    return excitation::volterra_solve(prob);
  };

  json per_lambda = json::array();
  EnergyCurve lower_curve = empty_curve(cfg, 2.0);
  for (double lambda : *cfg.lambda_grid) {
    const double k = excitation::renewal_gain(cfg.alpha, lambda);
    // sigma(u) = u solves the equality; otherwise this is the upper bracket
    const double upper_gain = sigma.is_linear ? k : sigma.L_sigma * sigma.L_sigma * k;
    const excitation::VolterraSolution sol = solve(upper_gain);
    push_row(ctx.curve, lambda, 0.5 * sol.log_final(), 0.0, 0);
    json row{{"lambda", lambda}, {"gain", upper_gain}, {"rate", sol.rate},
             {"log_second_moment", sol.log_final()}};
    if (!sigma.is_linear) {
      const excitation::VolterraSolution low = solve(sigma.l_sigma * sigma.l_sigma * k);
      push_row(lower_curve, lambda, 0.5 * low.log_final(), 0.0, 0);
      row["lower_log_second_moment"] = low.log_final();
    }
    per_lambda.push_back(row);
  }
  ctx.extras["per_lambda"] = per_lambda;
  if (!sigma.is_linear) {
    ctx.extras["curve_role"] = "upper bracket (gain L_sigma^2 k)";
    try {
      ctx.extras["lower_bracket_index"] =
          index_json(excitation::index_fit(lower_curve, {std::nullopt, cfg.fit_window}));
    } catch (const std::invalid_argument& e) {
      ctx.extras["lower_bracket_index"] = nullptr;
    }
  }
}

void scenario_bounds(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const solvers::SpdeProblem problem = build_problem(cfg);
  ctx.curve = empty_curve(cfg, 2.0);
  double q1 = 1.0;
  double q0 = 1.0;
  if (const auto* qn = std::get_if<solvers::QWienerNoise>(&problem.noise)) {
    q1 = qn->kernel.upper.value_or(1.0);
    q0 = qn->kernel.lower.value_or(0.0);
  }
  for (double lambda : *cfg.lambda_grid) {
    auto opts = mc_options(cfg, 2.0);
    opts.tilt = tilt_for(cfg, problem, lambda, 2.0);
    const MomentEstimate est = excitation::mc_energy(problem, lambda, opts);
    push_row(ctx.curve, lambda, est.log_energy(), est.stderr_log_energy(), est.samples);

    // independent draws for the projection estimate
    opts.base_seed = cfg.seed + 1;
    const std::vector<double> one{lambda};
    auto lower = excitation::spectral_lower_check(problem, one, opts);
    for (auto& row : lower.rows) ctx.bounds.push_back(std::move(row));
  }
  const double u0_energy = excitation::l2_energy(problem.u0, problem.grid);
  auto upper = excitation::gronwall_upper_check(ctx.curve, problem.sigma.L_sigma, u0_energy, q1);
  for (auto& row : upper.rows) ctx.bounds.push_back(std::move(row));

  ctx.extras["q0"] = q0;
  ctx.extras["q1"] = q1;
  ctx.extras["lambda1"] = problem.eigenpair->lambda1;
  ctx.extras["u0_l2"] = u0_energy;
  ctx.extras["u0_projection"] = problem.grid.dx() * simd::dot(problem.u0, problem.eigenpair->phi);
  ctx.extras["gronwall_exponent"] = "L_sigma^2 q1 lambda^2 t";
  ctx.extras["spectral_exponent"] = "(lambda^2 l_sigma^2 q0 - 2 lambda_1) t";
  ctx.extras["values"] = "natural logs of the compared quantities";
}

}  // namespace

std::string code_version() { return EXLAB_VERSION; }

RunResult run(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const ScenarioInfo& info = find_scenario(cfg.scenario);
  Context ctx{cfg, {}, {}, json::object()};

  if (cfg.scenario == "gbm") {
    scenario_gbm(ctx);
  } else if (cfg.scenario == "linear-exact-index") {
    scenario_linear_exact(ctx);
  } else if (cfg.scenario == "fractional-renewal") {
    scenario_renewal(ctx);
  } else if (cfg.scenario == "bounds") {
    scenario_bounds(ctx);
  } else if (cfg.scenario == "lp-moments") {
    scenario_monte_carlo(ctx, true);
  } else {
    scenario_monte_carlo(ctx, false);
  }
  excitation::sort_rows(ctx.bounds);

  json summary;
  summary["scenario"] = info.name;
  summary["anchor"] = info.anchor;
  summary["config"] = config_to_json(cfg);
  summary["code_version"] = code_version();
  summary["simd_level"] = std::string(simd::level_name(simd::active_level()));
  summary["t"] = ctx.curve.t;
  summary["p"] = ctx.curve.p;
  json energies = json::array();
  for (std::size_t i = 0; i < ctx.curve.size(); ++i) {
    energies.push_back({{"lambda", ctx.curve.lambdas[i]},
                        {"log_energy", ctx.curve.log_energy[i]},
                        {"stderr", ctx.curve.stderr_log[i]},
                        {"samples", ctx.curve.samples[i]}});
  }
  summary["energies"] = energies;
  summary["index"] = nullptr;
  if (ctx.curve.size() >= 2) {
    try {
      summary["index"] = index_json(excitation::index_fit(ctx.curve, {std::nullopt, cfg.fit_window}));
    } catch (const std::invalid_argument& e) {
      summary["index_note"] = e.what();
    }
  } else {
    summary["index_note"] = "index fit needs at least two lambda values";
  }
  std::size_t passed = 0;
  for (const auto& row : ctx.bounds) passed += row.pass ? 1 : 0;
  summary["bounds"] = {{"checked", ctx.bounds.size()},
                       {"passed", passed},
                       {"failed", ctx.bounds.size() - passed}};
  summary["extras"] = ctx.extras;

  RunResult result{cfg, std::move(ctx.curve), std::move(ctx.bounds), std::move(summary), 0.0};
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_energy_curve_csv(std::ostream& out, const EnergyCurve& curve) {
  out << "lambda,t,p,log_energy,stderr,samples\r\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out << format_double(curve.lambdas[i]) << ',' << format_double(curve.t) << ','
        << format_double(curve.p) << ',' << format_double(curve.log_energy[i]) << ','
        << format_double(curve.stderr_log[i]) << ',' << curve.samples[i] << "\r\n";
  }
}

void write_bounds_csv(std::ostream& out, const std::vector<excitation::BoundCheckRow>& rows) {
  out << "lambda,t,check_name,measured,bound,slack,pass\r\n";
  for (const auto& r : rows) {
    out << format_double(r.lambda) << ',' << format_double(r.t) << ',' << csv_field(r.check_name)
        << ',' << format_double(r.measured) << ',' << format_double(r.bound) << ','
        << format_double(r.slack) << ',' << (r.pass ? "true" : "false") << "\r\n";
  }
}

void write_outputs(const RunResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("energy_curve.csv");
    write_energy_curve_csv(f, result.curve);
  }
  {
    auto f = open("bounds.csv");
    write_bounds_csv(f, result.bounds);
  }
  {
    auto f = open("summary.json");
    f << result.summary.dump(2) << '\n';
  }
  {
    auto f = open("timing.json");
    f << json{{"wall_seconds", result.wall_seconds}}.dump(2) << '\n';
  }
}

}  // namespace exlab::cli
