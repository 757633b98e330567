#pragma once

#include "bia/bregman.hpp"

#include <functional>
#include <stdexcept>
#include <string>

namespace bia {

/// keep_box solves p_new in dj(y) + N_box(y); forget_box returns only the dj(y) component.
enum class BoxMode { keep_box, forget_box };

/// One coordinate of a Bregman Itoh-Abe step: find y and p_new with
///   p_new = p - tau * dq(y),   p_new in d(j + box indicator)(y).
struct InclusionProblem {
  ScalarBregman sb;
  double p = 0.0;
  double tau = 1.0;
  double x = 0.0;
  /// Difference quotient (V(.., t, ..) - V(.., x, ..)) / (t - x).
  std::function<double(double)> dq;
  /// Clarke interval of V at x along this coordinate.
  Interval clarke;
};

struct InclusionSolution {
  double y = 0.0;
  double p_new = 0.0;
  bool stationary = false;
  /// The Clarke element (stationary) or difference quotient (moving) that produced p_new.
  double v = 0.0;
  int evaluations = 0;
};

struct InclusionOptions {
  double tol = 1e-10;      ///< absolute residual |g(y)|
  double tol_x = 1e-12;    ///< relative bracket width
  int max_iterations = 200;
  int max_doublings = 60;
  /// Initial bracket step; <= 0 selects max(1e-8, 1e-8 |x|).
  double delta0 = 0.0;
};

/// V is unbounded below along the search ray (no sign change within the expansion limit).
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Root finder ran out of iterations.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solve one scalar inclusion.
///
/// A stationary update (y = x, p_new = p - tau v for the smallest-magnitude admissible
/// v in the Clarke interval) is taken whenever one exists. Otherwise the side on which
/// p - tau * clarke leaves dJ(x) is searched: the bracket doubles from delta0 until the
/// residual g(t) = T(t) - nearest point of dJ(t) to T(t), T(t) = p - tau dq(t), changes sign,
/// kinks of dJ inside the bracket are checked exactly, and Brent's method finishes the job.
InclusionSolution solve_inclusion(const InclusionProblem& prob, BoxMode mode = BoxMode::keep_box,
                                  const InclusionOptions& opts = {});

/// Bracketed root of a continuous f with f(a), f(b) of opposite sign (Brent 1973).
/// Stops when |f| <= ftol or the bracket is narrower than xtol * max(1, |x|).
struct BrentResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};
BrentResult brent_root(const std::function<double(double)>& f, double a, double fa, double b,
                       double fb, double ftol, double xtol, int max_iterations);

}  // namespace bia
