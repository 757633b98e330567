#include "bia/experiment.hpp"

#include "bia/problems.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>

namespace bia {

namespace {

constexpr std::array<std::pair<Preset, std::string_view>, 5> kPresetNames{{
    {Preset::gaussian_noiseless, "gaussian_noiseless"},
    {Preset::gaussian_noiseless_binary, "gaussian_noiseless_binary"},
    {Preset::gaussian_noisy, "gaussian_noisy"},
    {Preset::gaussian_noisy_l1, "gaussian_noisy_l1"},
    {Preset::student_t_denoise, "student_t_denoise"},
}};

bool is_image(Preset p) { return p == Preset::student_t_denoise; }

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view to_string(Preset p) {
  for (const auto& [preset, name] : kPresetNames)
    if (preset == p) return name;
  return "unknown";
}

Preset parse_preset(std::string_view name) {
  for (const auto& [preset, n] : kPresetNames)
    if (n == name) return preset;
  throw PreconditionError("unknown preset '" + std::string(name) + "'");
}

ExperimentParams default_params(Preset preset) {
  ExperimentParams p;
  p.preset = preset;
  switch (preset) {
    case Preset::gaussian_noiseless:
      p.solvers = {"sor", "bsor"};
      break;
    case Preset::gaussian_noiseless_binary:
      p.binary_gt = true;
      p.solvers = {"sor", "bsor"};
      break;
    case Preset::gaussian_noisy:
      p.noise_level = 0.1;
      p.solvers = {"sor", "bsor"};
      break;
    case Preset::gaussian_noisy_l1:
      p.noise_level = 0.1;
      p.lambda = 100.0;
      p.init = ExperimentParams::Init::gaussian;
      p.solvers = {"sor", "l1_bsor"};
      break;
    case Preset::student_t_denoise:
      p.tau = 1.0;
      p.gamma = 0.5;
      p.phi = 2.0;
      p.density = 0.1;
      p.init = ExperimentParams::Init::data;
      p.solvers = {"ia", "bia"};
      break;
  }
  return p;
}

Problem build_problem(const ExperimentParams& params) {
  Problem prob;
  if (is_image(params.preset)) {
    Image clean;
    if (!params.image_path.empty()) {
      clean = read_pgm(params.image_path);
    } else {
      clean.height = params.height;
      clean.width = params.width;
      clean.pixels = piecewise_constant_image(params.height, params.width,
                                              derive_seed(params.seed, "image"));
    }
    Image noisy = clean;
    noisy.pixels = impulse_noise(clean.pixels, params.density, derive_seed(params.seed, "impulse"));
    prob.objective = std::make_unique<StudentTObjective>(noisy.height, noisy.width, noisy.pixels,
                                                         params.phi, params.phi);
    prob.x0 = noisy.pixels;
    prob.clean = std::move(clean);
    prob.noisy = std::move(noisy);
    return prob;
  }

  GaussianSystem sys = gaussian_system(params.n, params.sparsity, params.binary_gt,
                                       derive_seed(params.seed, "system"));
  Vector b = add_noise(sys.b, sys.A, sys.x_true, params.noise_level,
                       derive_seed(params.seed, "noise"));
  QuadraticObjective q(std::move(sys.A), std::move(b));

  if (params.preset == Preset::gaussian_noisy_l1 || params.lambda > 0.0) {
    prob.objective = std::make_unique<L1QuadraticObjective>(std::move(q), params.lambda);
  } else {
    if (params.noise_level == 0.0) {
      prob.x_star = sys.x_true;
      prob.x_star_method = "ground_truth";
    } else {
      prob.x_star = q.A().ldlt().solve(q.b());
      prob.x_star_method = "direct_solve";
    }
    prob.v_star_exact = q.value(*prob.x_star);
    prob.objective = std::make_unique<QuadraticObjective>(std::move(q));
  }

  switch (params.init) {
    case ExperimentParams::Init::gaussian:
      prob.x0 = gaussian_vector(params.n, params.init_stddev, derive_seed(params.seed, "init"));
      break;
    default:
      prob.x0 = Vector::Zero(static_cast<Eigen::Index>(params.n));
  }
  return prob;
}

SolverConfig solver_config(const ExperimentParams& params, std::string_view solver) {
  SolverConfig cfg;
  cfg.variant = parse_variant(solver);
  cfg.tau = params.tau;
  cfg.omega = params.omega;
  cfg.gamma = params.gamma;
  cfg.max_iters = params.iters;
  cfg.stop_tol = params.stop_tol;
  cfg.tau_schedule = is_image(params.preset) ? TauSchedule::constant : TauSchedule::diag_scaled;
  return cfg;
}

BregmanSpec solver_bregman(const ExperimentParams& params, const Problem& problem,
                           std::string_view solver) {
  const SolverConfig cfg = solver_config(params, solver);
  if (is_image(params.preset)) {
    if (cfg.variant == Variant::bia || cfg.variant == Variant::bia_modified)
      return BregmanSpec::shifted_elastic_net(problem.x0, params.gamma);
    if (cfg.variant != Variant::ia)
      throw PreconditionError("solver '" + std::string(solver) +
                              "' is not available for the image preset (use ia, bia, bia_modified)");
  }
  return bregman_for(cfg, *problem.objective);
}

ExperimentResult run_experiment(const ExperimentParams& params) {
  if (params.iters <= 0) throw PreconditionError("iteration budget must be positive");
  if (params.solvers.empty()) throw PreconditionError("no solvers requested");

  ExperimentResult res;
  res.params = params;
  res.problem = build_problem(params);
  const CoordinateObjective& V = *res.problem.objective;

  double v_star = std::numeric_limits<double>::infinity();
  if (res.problem.v_star_exact) {
    v_star = *res.problem.v_star_exact;
    res.v_star_method = res.problem.x_star_method + "+min_observed";
  } else {
    // Long run of the Bregman solver; its final iterate also serves as x*.
    const std::string ref = is_image(params.preset) ? "bia" : "l1_bsor";
    SolverConfig cfg = solver_config(params, ref);
    cfg.max_iters = params.iters * params.reference_factor;
    cfg.stop_tol = 0.0;
    MetricsContext none;
    none.grad_dist = false;
    RunResult r = run(V, solver_bregman(params, res.problem, ref), res.problem.x0, cfg, none);
    for (const auto& rec : r.trace) v_star = std::min(v_star, rec.objective);
    res.problem.x_star = r.state.x;
    res.problem.x_star_method = "reference_run:" + ref;
    res.v_star_method = "reference_run:" + ref + "x" + std::to_string(cfg.max_iters) + "+min_observed";
  }

  MetricsContext metrics;
  metrics.x_star = res.problem.x_star;
  for (const std::string& name : params.solvers) {
    SolverRun sr;
    sr.solver = name;
    sr.config = solver_config(params, name);
    sr.result = run(V, solver_bregman(params, res.problem, name), res.problem.x0, sr.config, metrics);
    for (const auto& rec : sr.result.trace) v_star = std::min(v_star, rec.objective);
    res.runs.push_back(std::move(sr));
  }

  res.v_star = v_star;
  const double v0 = V.value(res.problem.x0);
  for (auto& sr : res.runs)
    for (auto& rec : sr.result.trace)
      rec.rel_objective = v0 > v_star ? relative_objective(rec.objective, v0, v_star)
                                      : std::numeric_limits<double>::quiet_NaN();
  return res;
}

CsvHeader manifest_header(const ExperimentResult& result, const SolverRun& run) {
  const ExperimentParams& p = result.params;
  CsvHeader h;
  h.emplace_back("preset", std::string(to_string(p.preset)));
  h.emplace_back("solver", run.solver);
  h.emplace_back("seed", std::to_string(p.seed));
  if (is_image(p.preset)) {
    h.emplace_back("height", std::to_string(result.problem.noisy->height));
    h.emplace_back("width", std::to_string(result.problem.noisy->width));
    h.emplace_back("density", num(p.density));
    h.emplace_back("phi", num(p.phi));
    h.emplace_back("image", p.image_path.empty() ? "synthetic" : p.image_path);
  } else {
    h.emplace_back("n", std::to_string(p.n));
    h.emplace_back("sparsity", num(p.sparsity));
    h.emplace_back("binary_gt", p.binary_gt ? "true" : "false");
    h.emplace_back("noise_level", num(p.noise_level));
    h.emplace_back("lambda", num(p.lambda));
  }
  h.emplace_back("gamma", num(run.config.gamma));
  h.emplace_back("tau", num(run.config.tau));
  h.emplace_back("tau_schedule",
                 run.config.tau_schedule == TauSchedule::diag_scaled ? "diag_scaled" : "constant");
  h.emplace_back("omega", num(run.config.omega));
  h.emplace_back("iters", std::to_string(run.config.max_iters));
  h.emplace_back("stop_tol", num(run.config.stop_tol));
  h.emplace_back("v0", num(result.problem.objective->value(result.problem.x0)));
  h.emplace_back("v_star", num(result.v_star));
  h.emplace_back("v_star_method", result.v_star_method);
  h.emplace_back("x_star_method", result.problem.x_star_method);
  h.emplace_back("grad_dist", "exact");
  h.emplace_back("version", BIA_VERSION);
  return h;
}

}  // namespace bia
