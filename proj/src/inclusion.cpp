#include "bia/inclusion.hpp"

#include <sstream>
#include <vector>

namespace bia {

BrentResult brent_root(const std::function<double(double)>& f, double a, double fa, double b,
                       double fb, double ftol, double xtol, int max_iterations) {
  BrentResult out;
  if (fa * fb > 0.0) throw PreconditionError("brent_root: endpoints do not bracket a root");
  // b is the best estimate, a the previous one, c the contrapoint with f(c) of opposite sign.
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < max_iterations; ++it) {
    out.iterations = it + 1;
    if ((fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) +
                        0.5 * xtol * std::max(1.0, std::abs(b));
    const double xm = 0.5 * (c - b);
    // The residual test is skipped on the first pass so an initial endpoint is never accepted
    // without interpolation; tiny moves would otherwise be rounded to the bracket end.
    if ((it > 0 && std::abs(fb) <= ftol) || std::abs(xm) <= tol1 || fb == 0.0) {
      out.x = b;
      out.fx = fb;
      out.converged = true;
      return out;
    }
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // Inverse quadratic interpolation, or secant when only two points are distinct.
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
      const double min2 = std::abs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : std::copysign(tol1, xm);
    fb = f(b);
  }
  out.x = b;
  out.fx = fb;
  out.converged = false;
  return out;
}

namespace {

std::string describe(const InclusionProblem& prob) {
  std::ostringstream s;
  s << "x = " << prob.x << ", p = " << prob.p << ", tau = " << prob.tau << ", clarke = ["
    << prob.clarke.lo << ", " << prob.clarke.hi << "], gamma = " << prob.sb.gamma
    << ", shift = " << prob.sb.shift << ", box = [" << prob.sb.lower << ", " << prob.sb.upper
    << "]";
  return s.str();
}

double finalize_p(const ScalarBregman& sb, double y, double total, BoxMode mode) {
  const double in_cone = sb.subdiff(y).clamp(total);
  return mode == BoxMode::keep_box ? in_cone : sb.subdiff_smooth_part(y).clamp(in_cone);
}

}  // namespace

InclusionSolution solve_inclusion(const InclusionProblem& prob, BoxMode mode,
                                  const InclusionOptions& opts) {
  const ScalarBregman& sb = prob.sb;
  if (!(prob.tau > 0.0) || !std::isfinite(prob.tau))
    throw PreconditionError("solve_inclusion: tau must be positive and finite (" + describe(prob) + ")");
  const Interval s0 = sb.subdiff(prob.x);
  if (!s0.contains(prob.p, kMembershipTol * std::max(1.0, std::abs(prob.p))))
    throw PreconditionError("solve_inclusion: p is not a subgradient at x (" + describe(prob) + ")");

  InclusionSolution sol;

  // Stationary update: v in clarke with p - tau v in dJ(x).
  const Interval admissible =
      intersect(prob.clarke, Interval{(prob.p - s0.hi) / prob.tau, (prob.p - s0.lo) / prob.tau});
  if (!admissible.empty()) {
    sol.v = admissible.clamp(0.0);
    sol.y = prob.x;
    sol.p_new = finalize_p(sb, prob.x, prob.p - prob.tau * sol.v, mode);
    sol.stationary = true;
    return sol;
  }

  // p - tau * clarke lies entirely above dJ(x): move right; entirely below: move left.
  const double dir = prob.p - prob.tau * prob.clarke.hi > s0.hi ? 1.0 : -1.0;

  int evals = 0;
  auto f = [&](double t) {
    ++evals;
    const double T = prob.p - prob.tau * prob.dq(t);
    return dir * (T - sb.subdiff(t).clamp(T));
  };

  double a = prob.x;
  double fa;
  {
    const double T = prob.p - prob.tau * (dir > 0.0 ? prob.clarke.hi : prob.clarke.lo);
    fa = dir * (T - s0.clamp(T));
  }
  const double box_end = dir > 0.0 ? sb.upper : sb.lower;
  const double delta0 = opts.delta0 > 0.0 ? opts.delta0 : std::max(1e-8, 1e-8 * std::abs(prob.x));

  double b = a, fb = fa;
  bool bracketed = false;
  double delta = delta0;
  for (int k = 0; k <= opts.max_doublings; ++k, delta *= 2.0) {
    double t = prob.x + dir * delta;
    const bool at_end = dir > 0.0 ? t >= box_end : t <= box_end;
    if (at_end) t = box_end;
    const double ft = f(t);
    if (ft <= 0.0) {
      b = t;
      fb = ft;
      bracketed = true;
      break;
    }
    a = t;
    fa = ft;
    if (at_end) break;
  }
  if (!bracketed)
    throw DivergenceError("solve_inclusion: no sign change within the expansion limit; V appears "
                          "unbounded below along the search ray (" + describe(prob) + ")");

  auto finish = [&](double y) {
    sol.y = y;
    sol.v = prob.dq(y);
    ++evals;
    sol.p_new = finalize_p(sb, y, prob.p - prob.tau * sol.v, mode);
    sol.evaluations = evals;
    return sol;
  };
  if (fb == 0.0) return finish(b);

  // Set-valued points inside the bracket: either the root itself, or a tighter bracket end.
  std::vector<double> kinks = sb.kinks();
  if (dir < 0.0) std::reverse(kinks.begin(), kinks.end());
  for (double k : kinks) {
    const bool inside = dir > 0.0 ? (k > a && k < b) : (k < a && k > b);
    if (!inside) continue;
    const double fk = f(k);
    if (fk == 0.0) return finish(k);
    if (fk < 0.0) {
      b = k;
      fb = fk;
      break;
    }
    a = k;
    fa = fk;
  }

  const BrentResult root = brent_root(f, a, fa, b, fb, opts.tol, opts.tol_x, opts.max_iterations);
  if (!root.converged) {
    std::ostringstream msg;
    msg << "solve_inclusion: root finder did not converge in " << root.iterations
        << " iterations (last t = " << root.x << ", residual = " << root.fx << "; "
        << describe(prob) << ")";
    throw ConvergenceError(msg.str());
  }
  return finish(root.x);
}

}  // namespace bia
