// Experiment runner: generates a problem from a preset, runs the requested solvers and writes
// one trace CSV per solver plus a JSON manifest.

#include "bia/experiment.hpp"
#include "bia/inclusion.hpp"
#include "bia/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

constexpr int kExitBadFlags = 2;
constexpr int kExitSolverError = 3;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bregman Itoh-Abe experiment runner"};

  std::string preset_name = "gaussian_noiseless";
  std::string solvers;
  std::optional<std::size_t> n;
  std::optional<double> sparsity, noise_level, gamma, lambda, tau, omega, stop_tol;
  std::optional<long> iters;
  bool binary_gt = false;
  std::uint64_t seed = 1;
  std::string image;
  std::string out_dir;

  app.add_option("--preset", preset_name,
                 "gaussian_noiseless | gaussian_noiseless_binary | gaussian_noisy | "
                 "gaussian_noisy_l1 | student_t_denoise");
  app.add_option("--solvers", solvers,
                 "Comma list of sor, gauss_seidel, ia, bia, bia_modified, bsor, l1_bsor, blcd");
  app.add_option("--n", n, "Problem dimension (gaussian presets)")->check(CLI::PositiveNumber);
  app.add_option("--sparsity", sparsity, "Fraction of nonzero ground-truth entries");
  app.add_flag("--binary-gt", binary_gt, "Binary ground truth (entries 0 or 1)");
  app.add_option("--noise-level", noise_level, "Noise std as a fraction of ||A x_true||_inf");
  app.add_option("--gamma", gamma, "Sparsity weight of the Bregman function");
  app.add_option("--lambda", lambda, "l1 weight of the objective");
  app.add_option("--tau", tau, "Base time step (divided by diag(A) on gaussian presets)");
  app.add_option("--omega", omega, "SOR relaxation / BLCD step parameter in (0, 2)");
  app.add_option("--iters", iters, "Sweep budget")->check(CLI::PositiveNumber);
  app.add_option("--stop-tol", stop_tol, "Stop after 3 sweeps with step norm below this");
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--image", image, "Input P5 PGM for student_t_denoise (synthetic if omitted)");
  app.add_option("--out-dir", out_dir, "Output directory (default: $BIA_OUT_DIR or ./out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadFlags;
  }

  bia::ExperimentParams params;
  try {
    params = bia::default_params(bia::parse_preset(preset_name));
    params.seed = seed;
    if (n) params.n = *n;
    if (sparsity) params.sparsity = *sparsity;
    if (binary_gt) params.binary_gt = true;
    if (noise_level) params.noise_level = *noise_level;
    if (gamma) params.gamma = *gamma;
    if (lambda) params.lambda = *lambda;
    if (tau) params.tau = *tau;
    if (omega) params.omega = *omega;
    if (iters) params.iters = *iters;
    if (stop_tol) params.stop_tol = *stop_tol;
    if (!solvers.empty()) params.solvers = split_list(solvers);
    params.image_path = image;
    for (const auto& s : params.solvers) (void)bia::parse_variant(s);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadFlags;
  }

  if (out_dir.empty()) {
    const char* env = std::getenv("BIA_OUT_DIR");
    out_dir = env && *env ? env : "out";
  }

  bia::ExperimentResult result;
  try {
    result = bia::run_experiment(params);
  } catch (const bia::PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadFlags;
  } catch (const bia::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadFlags;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolverError;
  }

  try {
    fs::create_directories(out_dir);
    const std::string stem(bia::to_string(params.preset));
    nlohmann::json manifest;
    manifest["preset"] = stem;
    manifest["seed"] = params.seed;
    manifest["version"] = BIA_VERSION;
    manifest["v_star"] = result.v_star;
    manifest["v_star_method"] = result.v_star_method;
    manifest["x_star_method"] = result.problem.x_star_method;
    nlohmann::json outputs = nlohmann::json::array();

    for (const auto& run : result.runs) {
      const fs::path csv = fs::path(out_dir) / (stem + "_" + run.solver + ".csv");
      const bia::CsvHeader header = bia::manifest_header(result, run);
      bia::write_trace_csv(run.result.trace, csv, header);
      nlohmann::json entry;
      entry["solver"] = run.solver;
      entry["trace"] = csv.string();
      entry["sweeps"] = run.result.trace.size();
      entry["stopped_early"] = run.result.stopped_early;
      for (const auto& [k, v] : header) entry["parameters"][k] = v;
      if (result.problem.noisy) {
        bia::Image out = *result.problem.noisy;
        out.pixels = run.result.state.x;
        const fs::path pgm = fs::path(out_dir) / (stem + "_" + run.solver + ".pgm");
        bia::write_pgm(pgm, out);
        entry["image"] = pgm.string();
      }
      outputs.push_back(entry);
      std::cout << run.solver << ": " << run.result.trace.size() << " sweeps, final objective "
                << (run.result.trace.empty() ? 0.0 : run.result.trace.back().objective) << " -> "
                << csv.string() << '\n';
    }
    if (result.problem.noisy) {
      const fs::path noisy = fs::path(out_dir) / (stem + "_noisy.pgm");
      bia::write_pgm(noisy, *result.problem.noisy);
      manifest["noisy_image"] = noisy.string();
      if (params.image_path.empty()) {
        const fs::path clean = fs::path(out_dir) / (stem + "_clean.pgm");
        bia::write_pgm(clean, *result.problem.clean);
        manifest["clean_image"] = clean.string();
      }
    }
    manifest["outputs"] = outputs;
    const fs::path mpath = fs::path(out_dir) / (stem + "_manifest.json");
    std::ofstream(mpath) << manifest.dump(2) << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolverError;
  }
  return 0;
}
