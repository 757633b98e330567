#pragma once

#include "bia/bregman.hpp"

#include <cstdint>
#include <string_view>

namespace bia {

/// Child seed for a named role: splitmix64(parent ^ fnv1a64(role)). Frozen; do not change.
std::uint64_t derive_seed(std::uint64_t parent, std::string_view role);

struct GaussianSystem {
  Matrix A;
  Vector b;
  Vector x_true;
};

/// A = G^T G with G standard Gaussian n x n; x_true has exactly ceil(sparsity * n) nonzeros,
/// uniform(0, 1) values (or all ones when binary_gt); b = A x_true.
GaussianSystem gaussian_system(std::size_t n, double sparsity, bool binary_gt, std::uint64_t seed);

/// b + delta with delta_i ~ N(0, (level * ||A x_true||_inf)^2).
Vector add_noise(const Vector& b, const Matrix& A, const Vector& x_true, double level,
                 std::uint64_t seed);

/// Replace exactly ceil(density * size) uniformly chosen pixels by 0 or 1 (equal odds).
Vector impulse_noise(const Vector& img, double density, std::uint64_t seed);

/// i.i.d. N(0, stddev^2) vector.
Vector gaussian_vector(std::size_t n, double stddev, std::uint64_t seed);

/// Piecewise-constant test image with values in [0, 1]: a flat background with a few random
/// rectangles and discs.
Vector piecewise_constant_image(std::size_t height, std::size_t width, std::uint64_t seed);

/// ceil(fraction * n), robust to representation error in fraction.
std::size_t exact_count(double fraction, std::size_t n);

}  // namespace bia
