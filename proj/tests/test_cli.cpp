#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(BIA_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// File contents with the wall_ms column dropped.
std::string without_wall_ms(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') line = line.substr(0, line.rfind(','));
    out << line << '\n';
  }
  return out.str();
}

fs::path scratch(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("bia_cli_test_" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("cli writes one csv per solver and a manifest") {
  const fs::path d = scratch("smoke");
  CHECK(run_cli("--preset gaussian_noiseless --n 64 --seed 7 --iters 20 --solvers sor,bsor --out-dir " +
                d.string()) == 0);
  CHECK(fs::exists(d / "gaussian_noiseless_sor.csv"));
  CHECK(fs::exists(d / "gaussian_noiseless_bsor.csv"));
  CHECK(fs::exists(d / "gaussian_noiseless_manifest.json"));

  // one row per sweep
  std::ifstream in(d / "gaussian_noiseless_bsor.csv");
  std::string line;
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#' && line.rfind("iter,", 0) != 0) ++rows;
  CHECK(rows == 20);
  fs::remove_all(d);
}

TEST_CASE("cli output is deterministic apart from wall_ms") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const std::string args = "--preset gaussian_noisy_l1 --n 48 --lambda 5 --seed 3 --iters 15 ";
  REQUIRE(run_cli(args + "--out-dir " + a.string()) == 0);
  REQUIRE(run_cli(args + "--out-dir " + b.string()) == 0);
  for (const char* f : {"gaussian_noisy_l1_sor.csv", "gaussian_noisy_l1_l1_bsor.csv"})
    CHECK(without_wall_ms(a / f) == without_wall_ms(b / f));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("cli image run writes denoised images") {
  const fs::path d = scratch("img");
  fs::create_directories(d);
  {
    std::ofstream img(d / "in.pgm", std::ios::binary);
    img << "P5\n8 6\n255\n";
    for (int i = 0; i < 48; ++i) img.put(static_cast<char>(i % 7 == 0 ? 255 : 90));
  }
  CHECK(run_cli("--preset student_t_denoise --iters 5 --image " + (d / "in.pgm").string() +
                " --out-dir " + d.string()) == 0);
  CHECK(fs::exists(d / "student_t_denoise_ia.csv"));
  CHECK(fs::exists(d / "student_t_denoise_bia.csv"));
  CHECK(fs::exists(d / "student_t_denoise_bia.pgm"));
  fs::remove_all(d);
}

TEST_CASE("cli exit codes") {
  const fs::path d = scratch("codes");
  CHECK(run_cli("--preset nope --out-dir " + d.string()) == 2);
  CHECK(run_cli("--no-such-flag") == 2);
  CHECK(run_cli("--preset gaussian_noiseless --solvers sor,bogus --out-dir " + d.string()) == 2);
  CHECK(run_cli("--preset gaussian_noiseless --iters 0 --out-dir " + d.string()) == 2);
  CHECK(run_cli("--preset student_t_denoise --image /nonexistent.pgm --out-dir " + d.string()) == 2);
  CHECK(run_cli("--preset gaussian_noiseless --solvers sor --omega 2.5 --n 16 --out-dir " + d.string()) == 2);
  fs::remove_all(d);
}

TEST_CASE("BIA_OUT_DIR is the fallback output directory") {
  const fs::path d = scratch("env");
  const std::string cmd = "BIA_OUT_DIR=" + d.string() + " " + BIA_CLI_PATH +
                          " --preset gaussian_noiseless --n 16 --iters 3 --solvers sor > /dev/null 2>&1";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(d / "gaussian_noiseless_sor.csv"));
  fs::remove_all(d);
}
