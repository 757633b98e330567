#pragma once

#include "bia/bregman.hpp"
#include "bia/objectives.hpp"

#include <optional>
#include <utility>

namespace bia {

/// One row of a convergence trace.
struct TraceRecord {
  long iter = 0;
  double objective = 0.0;
  double rel_objective = 0.0;
  double support_match = 0.0;
  double support_error = 0.0;
  double grad_dist = 0.0;
  double step_norm = 0.0;
  double dissipation_slack = 0.0;
  double wall_ms = 0.0;
};

/// Reference quantities used to fill a trace. Missing references produce NaN columns.
struct MetricsContext {
  std::optional<double> v_star;
  std::optional<Vector> x_star;
  /// V(x^0); set by the run loop when absent.
  std::optional<double> v0;
  bool grad_dist = true;
};

/// Values with |x| at or below this count as sign 0.
inline constexpr double kZeroSign = 1e-12;

/// (vk - vstar) / (v0 - vstar); throws PreconditionError when v0 <= vstar.
double relative_objective(double vk, double v0, double vstar);

struct SupportStats {
  double match = 0.0;
  double error = 0.0;
};

/// Fraction of coordinates whose sign (zero below kZeroSign) agrees with the reference.
SupportStats support_stats(const Vector& xk, const Vector& xstar);

/// || (dist([dV(x)]_i, 0))_i ||_2.
double clarke_dist(const CoordinateObjective& V, const Vector& x);

/// max_i dist(0, [dV(x)]_i + N_[l_i, u_i](x_i)): coordinate-wise first-order residual.
double stationarity_residual(const CoordinateObjective& V, const BregmanSpec& J, const Vector& x);

}  // namespace bia
