#include "bia/problems.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

namespace bia {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// First k entries of a Fisher-Yates shuffle of 0..n-1.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                    std::mt19937_64& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(k);
  return idx;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t parent, std::string_view role) {
  return splitmix64(parent ^ fnv1a64(role));
}

std::size_t exact_count(double fraction, std::size_t n) {
  const double raw = fraction * static_cast<double>(n);
  const double rounded = std::round(raw);
  if (std::abs(raw - rounded) <= 1e-9 * std::max(1.0, raw)) return static_cast<std::size_t>(rounded);
  return static_cast<std::size_t>(std::ceil(raw));
}

GaussianSystem gaussian_system(std::size_t n, double sparsity, bool binary_gt, std::uint64_t seed) {
  if (n == 0) throw PreconditionError("gaussian_system: n must be positive");
  if (!(sparsity > 0.0 && sparsity <= 1.0))
    throw PreconditionError("gaussian_system: sparsity must lie in (0, 1]");

  const auto dim = static_cast<Eigen::Index>(n);
  std::mt19937_64 matrix_rng(derive_seed(seed, "matrix"));
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix G(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) G(i, j) = normal(matrix_rng);

  GaussianSystem sys;
  sys.A = G.transpose() * G;
  // Exact symmetry; the product is symmetric only up to rounding.
  sys.A = 0.5 * (sys.A + sys.A.transpose()).eval();

  std::mt19937_64 support_rng(derive_seed(seed, "support"));
  std::mt19937_64 value_rng(derive_seed(seed, "values"));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  sys.x_true = Vector::Zero(dim);
  auto support = sample_without_replacement(n, exact_count(sparsity, n), support_rng);
  std::sort(support.begin(), support.end());
  for (std::size_t i : support) {
    double v = binary_gt ? 1.0 : unit(value_rng);
    while (v == 0.0) v = unit(value_rng);
    sys.x_true[static_cast<Eigen::Index>(i)] = v;
  }
  sys.b = sys.A * sys.x_true;
  return sys;
}

Vector add_noise(const Vector& b, const Matrix& A, const Vector& x_true, double level,
                 std::uint64_t seed) {
  if (level < 0.0) throw PreconditionError("add_noise: level must be nonnegative");
  if (level == 0.0) return b;
  const double stddev = level * (A * x_true).lpNorm<Eigen::Infinity>();
  return b + gaussian_vector(static_cast<std::size_t>(b.size()), stddev, seed);
}

Vector gaussian_vector(std::size_t n, double stddev, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(static_cast<Eigen::Index>(n));
  for (auto& e : v) e = stddev * normal(rng);
  return v;
}

Vector impulse_noise(const Vector& img, double density, std::uint64_t seed) {
  if (!(density >= 0.0 && density <= 1.0))
    throw PreconditionError("impulse_noise: density must lie in [0, 1]");
  Vector out = img;
  const auto n = static_cast<std::size_t>(img.size());
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  auto chosen = sample_without_replacement(n, exact_count(density, n), rng);
  std::sort(chosen.begin(), chosen.end());
  for (std::size_t i : chosen) out[static_cast<Eigen::Index>(i)] = coin(rng) ? 1.0 : 0.0;
  return out;
}

Vector piecewise_constant_image(std::size_t height, std::size_t width, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double h = static_cast<double>(height);
  const double w = static_cast<double>(width);
  Vector img = Vector::Constant(static_cast<Eigen::Index>(height * width), 0.2 + 0.2 * unit(rng));

  auto paint = [&](auto&& inside, double level) {
    for (std::size_t r = 0; r < height; ++r)
      for (std::size_t c = 0; c < width; ++c)
        if (inside(static_cast<double>(r) + 0.5, static_cast<double>(c) + 0.5))
          img[static_cast<Eigen::Index>(r * width + c)] = level;
  };
  for (int k = 0; k < 3; ++k) {
    const double r0 = unit(rng) * 0.6 * h, c0 = unit(rng) * 0.6 * w;
    const double r1 = r0 + (0.2 + 0.3 * unit(rng)) * h, c1 = c0 + (0.2 + 0.3 * unit(rng)) * w;
    const double level = 0.1 + 0.8 * unit(rng);
    paint([=](double r, double c) { return r >= r0 && r < r1 && c >= c0 && c < c1; }, level);
  }
  for (int k = 0; k < 2; ++k) {
    const double rc = (0.2 + 0.6 * unit(rng)) * h, cc = (0.2 + 0.6 * unit(rng)) * w;
    const double rad = (0.1 + 0.15 * unit(rng)) * std::min(h, w);
    const double level = 0.1 + 0.8 * unit(rng);
    paint([=](double r, double c) { return (r - rc) * (r - rc) + (c - cc) * (c - cc) < rad * rad; },
          level);
  }
  return img;
}

}  // namespace bia
