#pragma once

#include "bia/bregman.hpp"
#include "bia/io.hpp"
#include "bia/objectives.hpp"
#include "bia/solvers.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bia {

enum class Preset {
  gaussian_noiseless,
  gaussian_noiseless_binary,
  gaussian_noisy,
  gaussian_noisy_l1,
  student_t_denoise,
};

std::string_view to_string(Preset p);
Preset parse_preset(std::string_view name);

/// Every knob of an experiment; default_params fills in the preset's values.
struct ExperimentParams {
  Preset preset = Preset::gaussian_noiseless;
  std::uint64_t seed = 1;
  std::size_t n = 256;
  double sparsity = 0.1;
  bool binary_gt = false;
  double noise_level = 0.0;
  double gamma = 1.0;
  double lambda = 0.0;
  double tau = 2.0;
  double omega = 1.0;
  long iters = 200;
  double stop_tol = 0.0;
  /// Initial point: zeros, Gaussian with this standard deviation, or the noisy image.
  enum class Init { zeros, gaussian, data } init = Init::zeros;
  double init_stddev = 1.0;
  // Image experiment.
  std::string image_path;
  std::size_t height = 64;
  std::size_t width = 64;
  double density = 0.1;
  double phi = 2.0;
  std::vector<std::string> solvers;
  /// Reference run length for V* as a multiple of iters.
  long reference_factor = 10;
};

ExperimentParams default_params(Preset preset);

/// A generated problem instance.
struct Problem {
  std::unique_ptr<CoordinateObjective> objective;
  Vector x0;
  /// Reference solution for support statistics (ground truth or a direct solve).
  std::optional<Vector> x_star;
  /// Objective at x_star, when x_star is an exact minimiser.
  std::optional<double> v_star_exact;
  std::string x_star_method;
  // Image experiment only.
  std::optional<Image> clean;
  std::optional<Image> noisy;
};

Problem build_problem(const ExperimentParams& params);

/// Solver configuration for a named solver under a preset.
SolverConfig solver_config(const ExperimentParams& params, std::string_view solver);

/// Bregman function for a named solver under a preset.
BregmanSpec solver_bregman(const ExperimentParams& params, const Problem& problem,
                           std::string_view solver);

struct SolverRun {
  std::string solver;
  SolverConfig config;
  RunResult result;
};

struct ExperimentResult {
  ExperimentParams params;
  Problem problem;
  std::vector<SolverRun> runs;
  double v_star = 0.0;
  std::string v_star_method;
};

/// Build the problem, fix V* and x*, run every solver, fill rel_objective.
ExperimentResult run_experiment(const ExperimentParams& params);

/// Manifest lines written at the top of every trace CSV.
CsvHeader manifest_header(const ExperimentResult& result, const SolverRun& run);

}  // namespace bia
