#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace bia {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Absolute tolerance for subgradient membership after a closed-form or root-solved update.
inline constexpr double kMembershipTol = 1e-9;

/// Raised when a caller violates a documented precondition (domain, dimensions, configuration).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Closed interval [lo, hi]; either endpoint may be infinite.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval point(double v) { return {v, v}; }

  bool contains(double v, double tol = 0.0) const { return v >= lo - tol && v <= hi + tol; }
  double clamp(double v) const { return v < lo ? lo : (v > hi ? hi : v); }
  /// Distance from v to the interval (0 inside).
  double distance(double v) const { return v < lo ? lo - v : (v > hi ? v - hi : 0.0); }
  double midpoint() const { return 0.5 * (lo + hi); }
  bool empty() const { return lo > hi; }

  friend Interval operator+(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }
  friend Interval operator+(Interval a, double s) { return {a.lo + s, a.hi + s}; }
  friend Interval operator*(double s, Interval a) {
    return s >= 0.0 ? Interval{s * a.lo, s * a.hi} : Interval{s * a.hi, s * a.lo};
  }
};

inline Interval intersect(Interval a, Interval b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

/// Soft-thresholding S(x, lambda) = sgn(x) max(|x| - lambda, 0).
double shrink(double x, double lambda);

/// Clamp to [l, u]; throws PreconditionError when l > u.
double project_box(double x, double l, double u);

/// Sign with an exact zero.
inline double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

/// One separable piece j(x) = x^2/2 + gamma |x - shift| restricted to the box [lower, upper].
///
/// `euclidean` is the gamma = 0 case; `elastic_net` has shift 0. All kinds are 1-convex.
struct ScalarBregman {
  enum class Kind { euclidean, elastic_net, shifted_elastic_net };

  Kind kind = Kind::euclidean;
  double gamma = 0.0;
  double shift = 0.0;
  double lower = -kInf;
  double upper = kInf;

  static ScalarBregman euclidean(double lower = -kInf, double upper = kInf);
  static ScalarBregman elastic_net(double gamma, double lower = -kInf, double upper = kInf);
  static ScalarBregman shifted_elastic_net(double gamma, double shift, double lower = -kInf,
                                           double upper = kInf);

  bool in_box(double x) const { return x >= lower && x <= upper; }

  /// j(x) without the box indicator.
  double value(double x) const;
  /// Subdifferential of j alone (no normal cone).
  Interval subdiff_smooth_part(double x) const;
  /// Subdifferential of j + indicator of the box; throws std::domain_error outside the box.
  Interval subdiff(double x) const;
  /// Points where the subdifferential is set-valued (kink of |.|, finite box ends).
  std::vector<double> kinks() const;
};

/// Free-function form of ScalarBregman::subdiff.
inline Interval subdiff_interval(const ScalarBregman& sb, double x) { return sb.subdiff(x); }

/// Separable Bregman function J(x) = sum_i j_i(x_i) + indicator of the box product.
class BregmanSpec {
 public:
  BregmanSpec() = default;
  BregmanSpec(std::vector<ScalarBregman> pieces, double mu = 1.0);

  static BregmanSpec euclidean(std::size_t n);
  static BregmanSpec elastic_net(std::size_t n, double gamma);
  static BregmanSpec shifted_elastic_net(const Vector& shift, double gamma);

  std::size_t size() const { return pieces_.size(); }
  double mu() const { return mu_; }
  const ScalarBregman& operator[](std::size_t i) const { return pieces_[i]; }
  ScalarBregman& operator[](std::size_t i) { return pieces_[i]; }
  const std::vector<ScalarBregman>& pieces() const { return pieces_; }

  /// Set the same box on every coordinate.
  BregmanSpec& with_box(double lower, double upper);

  /// J(x); +inf outside the box.
  double value(const Vector& x) const;
  bool feasible(const Vector& x) const;
  /// True when p_i lies in the subdifferential interval at x_i for all i, within tol.
  bool is_subgradient(const Vector& x, const Vector& p, double tol = kMembershipTol) const;
  /// Largest per-coordinate distance of p from the subdifferential intervals at x.
  double membership_violation(const Vector& x, const Vector& p) const;
  /// Minimal-norm element of the subdifferential at x.
  Vector min_norm_subgradient(const Vector& x) const;

 private:
  std::vector<ScalarBregman> pieces_;
  double mu_ = 1.0;
};

/// D_J^p(x, y) = J(y) - J(x) - <p, y - x>; throws PreconditionError unless p is in dJ(x).
double bregman_distance(const BregmanSpec& spec, const Vector& x, const Vector& p,
                        const Vector& y);

/// Primal iterate with its subgradient and sweep counter.
struct PrimalDualState {
  Vector x;
  Vector p;
  long k = 0;
};

}  // namespace bia
