#include "bia/bregman.hpp"

#include <algorithm>
#include <sstream>

namespace bia {

double shrink(double x, double lambda) {
  const double m = std::abs(x) - lambda;
  return m > 0.0 ? std::copysign(m, x) : 0.0;
}

double project_box(double x, double l, double u) {
  if (l > u) {
    std::ostringstream msg;
    msg << "project_box: empty box [" << l << ", " << u << "]";
    throw PreconditionError(msg.str());
  }
  return std::clamp(x, l, u);
}

namespace {

void check_box(double lower, double upper) {
  if (!(lower <= upper)) throw PreconditionError("ScalarBregman: lower bound exceeds upper bound");
}

}  // namespace

ScalarBregman ScalarBregman::euclidean(double lower, double upper) {
  check_box(lower, upper);
  return {Kind::euclidean, 0.0, 0.0, lower, upper};
}

ScalarBregman ScalarBregman::elastic_net(double gamma, double lower, double upper) {
  check_box(lower, upper);
  if (gamma < 0.0) throw PreconditionError("ScalarBregman: gamma must be nonnegative");
  return {Kind::elastic_net, gamma, 0.0, lower, upper};
}

ScalarBregman ScalarBregman::shifted_elastic_net(double gamma, double shift, double lower,
                                                 double upper) {
  check_box(lower, upper);
  if (gamma < 0.0) throw PreconditionError("ScalarBregman: gamma must be nonnegative");
  return {Kind::shifted_elastic_net, gamma, shift, lower, upper};
}

double ScalarBregman::value(double x) const { return 0.5 * x * x + gamma * std::abs(x - shift); }

Interval ScalarBregman::subdiff_smooth_part(double x) const {
  const double d = x - shift;
  if (gamma == 0.0 || d != 0.0) return Interval::point(x + gamma * sign(d));
  return {x - gamma, x + gamma};
}

Interval ScalarBregman::subdiff(double x) const {
  if (!in_box(x)) {
    std::ostringstream msg;
    msg << "subdiff: x = " << x << " outside [" << lower << ", " << upper << "]";
    throw std::domain_error(msg.str());
  }
  Interval s = subdiff_smooth_part(x);
  if (x == lower) s.lo = -kInf;
  if (x == upper) s.hi = kInf;
  return s;
}

std::vector<double> ScalarBregman::kinks() const {
  std::vector<double> out;
  if (gamma > 0.0 && in_box(shift)) out.push_back(shift);
  if (std::isfinite(lower)) out.push_back(lower);
  if (std::isfinite(upper)) out.push_back(upper);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

BregmanSpec::BregmanSpec(std::vector<ScalarBregman> pieces, double mu)
    : pieces_(std::move(pieces)), mu_(mu) {
  if (mu_ < 0.0) throw PreconditionError("BregmanSpec: mu must be nonnegative");
}

BregmanSpec BregmanSpec::euclidean(std::size_t n) {
  return BregmanSpec(std::vector<ScalarBregman>(n, ScalarBregman::euclidean()));
}

BregmanSpec BregmanSpec::elastic_net(std::size_t n, double gamma) {
  return BregmanSpec(std::vector<ScalarBregman>(n, ScalarBregman::elastic_net(gamma)));
}

BregmanSpec BregmanSpec::shifted_elastic_net(const Vector& shift, double gamma) {
  std::vector<ScalarBregman> pieces;
  pieces.reserve(static_cast<std::size_t>(shift.size()));
  for (Eigen::Index i = 0; i < shift.size(); ++i)
    pieces.push_back(ScalarBregman::shifted_elastic_net(gamma, shift[i]));
  return BregmanSpec(std::move(pieces));
}

BregmanSpec& BregmanSpec::with_box(double lower, double upper) {
  check_box(lower, upper);
  for (auto& piece : pieces_) {
    piece.lower = lower;
    piece.upper = upper;
  }
  return *this;
}

double BregmanSpec::value(const Vector& x) const {
  double total = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const double xi = x[static_cast<Eigen::Index>(i)];
    if (!pieces_[i].in_box(xi)) return kInf;
    total += pieces_[i].value(xi);
  }
  return total;
}

bool BregmanSpec::feasible(const Vector& x) const {
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    if (!pieces_[i].in_box(x[static_cast<Eigen::Index>(i)])) return false;
  return true;
}

double BregmanSpec::membership_violation(const Vector& x, const Vector& p) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    worst = std::max(worst, pieces_[i].subdiff(x[ii]).distance(p[ii]));
  }
  return worst;
}

bool BregmanSpec::is_subgradient(const Vector& x, const Vector& p, double tol) const {
  if (x.size() != static_cast<Eigen::Index>(size()) || p.size() != x.size()) return false;
  if (!feasible(x)) return false;
  return membership_violation(x, p) <= tol;
}

Vector BregmanSpec::min_norm_subgradient(const Vector& x) const {
  Vector p(x.size());
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    p[ii] = pieces_[i].subdiff(x[ii]).clamp(0.0);
  }
  return p;
}

double bregman_distance(const BregmanSpec& spec, const Vector& x, const Vector& p,
                        const Vector& y) {
  if (x.size() != static_cast<Eigen::Index>(spec.size()) || y.size() != x.size())
    throw PreconditionError("bregman_distance: dimension mismatch");
  if (!spec.is_subgradient(x, p))
    throw PreconditionError("bregman_distance: p is not a subgradient of J at x");
  if (!spec.feasible(y)) return kInf;
  // Coordinate-wise sum keeps the kink contributions exact.
  double d = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    d += spec[i].value(y[ii]) - spec[i].value(x[ii]) - p[ii] * (y[ii] - x[ii]);
  }
  return d;
}

}  // namespace bia
