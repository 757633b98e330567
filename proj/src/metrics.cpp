#include "bia/metrics.hpp"

#include <sstream>

namespace bia {

double relative_objective(double vk, double v0, double vstar) {
  if (!(v0 > vstar)) {
    std::ostringstream msg;
    msg << "relative_objective: degenerate run, V(x0) = " << v0 << " does not exceed V* = " << vstar;
    throw PreconditionError(msg.str());
  }
  return (vk - vstar) / (v0 - vstar);
}

SupportStats support_stats(const Vector& xk, const Vector& xstar) {
  if (xk.size() != xstar.size()) throw PreconditionError("support_stats: length mismatch");
  if (xk.size() == 0) return {1.0, 0.0};
  auto sgn = [](double v) { return std::abs(v) <= kZeroSign ? 0 : (v > 0.0 ? 1 : -1); };
  Eigen::Index matches = 0;
  for (Eigen::Index i = 0; i < xk.size(); ++i)
    if (sgn(xk[i]) == sgn(xstar[i])) ++matches;
  const double match = static_cast<double>(matches) / static_cast<double>(xk.size());
  return {match, 1.0 - match};
}

double clarke_dist(const CoordinateObjective& V, const Vector& x) {
  const auto cur = V.cursor(x);
  double sq = 0.0;
  for (std::size_t i = 0; i < V.size(); ++i) {
    const double d = cur->clarke(i).distance(0.0);
    sq += d * d;
  }
  return std::sqrt(sq);
}

double stationarity_residual(const CoordinateObjective& V, const BregmanSpec& J, const Vector& x) {
  if (J.size() != V.size()) throw PreconditionError("stationarity_residual: dimension mismatch");
  const auto cur = V.cursor(x);
  double worst = 0.0;
  for (std::size_t i = 0; i < V.size(); ++i) {
    Interval c = cur->clarke(i);
    const double xi = x[static_cast<Eigen::Index>(i)];
    if (xi == J[i].lower) c.lo = -kInf;
    if (xi == J[i].upper) c.hi = kInf;
    worst = std::max(worst, c.distance(0.0));
  }
  return worst;
}

}  // namespace bia
