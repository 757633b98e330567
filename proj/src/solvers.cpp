#include "bia/solvers.hpp"

#include <array>
#include <chrono>
#include <sstream>

namespace bia {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

constexpr std::array<std::pair<Variant, std::string_view>, 8> kVariantNames{{
    {Variant::sor, "sor"},
    {Variant::gauss_seidel, "gauss_seidel"},
    {Variant::ia, "ia"},
    {Variant::bia, "bia"},
    {Variant::bia_modified, "bia_modified"},
    {Variant::bsor, "bsor"},
    {Variant::l1_bsor, "l1_bsor"},
    {Variant::blcd, "blcd"},
}};

double value_or(std::optional<double> v, const CoordinateObjective& V, const Vector& x) {
  return v ? *v : V.value(x);
}

SweepResult finish_sweep(const CoordinateObjective& V, const PrimalDualState& before,
                         PrimalDualState after, double v_before, double mu, double tau_max) {
  SweepResult res;
  res.v_before = v_before;
  res.v_after = V.value(after.x);
  res.decrease = res.v_before - res.v_after;
  res.step_sq = (after.x - before.x).squaredNorm();
  res.mu = mu;
  res.tau_max = tau_max;
  after.k = before.k + 1;
  res.state = std::move(after);
  return res;
}

const Vector* diagonal_source(const CoordinateObjective& V, Vector& storage) {
  const QuadraticObjective* q = dynamic_cast<const QuadraticObjective*>(&V);
  if (const auto* l1 = dynamic_cast<const L1QuadraticObjective*>(&V)) q = &l1->quadratic();
  if (!q) return nullptr;
  storage = q->A().diagonal();
  return &storage;
}

void check_omega(double omega, const char* where) {
  if (!(omega > 0.0 && omega < 2.0)) {
    std::ostringstream msg;
    msg << where << ": relaxation parameter " << omega << " outside (0, 2)";
    throw PreconditionError(msg.str());
  }
}

void check_state(const PrimalDualState& s, std::size_t n, const char* where) {
  if (s.x.size() != idx(n) || s.p.size() != idx(n)) {
    std::ostringstream msg;
    msg << where << ": state dimension does not match the objective (" << n << ")";
    throw PreconditionError(msg.str());
  }
}

}  // namespace

std::string_view to_string(Variant v) {
  for (const auto& [var, name] : kVariantNames)
    if (var == v) return name;
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  for (const auto& [var, n] : kVariantNames)
    if (n == name) return var;
  throw PreconditionError("unknown solver variant '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------------------------

Vector sor_sweep(const QuadraticObjective& q, const Vector& x, double omega) {
  check_omega(omega, "sor_sweep");
  if (x.size() != idx(q.size())) throw PreconditionError("sor_sweep: dimension mismatch");
  Vector y = x;
  for (std::size_t i = 0; i < q.size(); ++i) y[idx(i)] -= omega / q.diag(i) * q.partial(y, i);
  return y;
}

Vector coordinate_descent_sweep(const QuadraticObjective& q, const Vector& x, const Vector& alpha) {
  if (x.size() != idx(q.size()) || alpha.size() != x.size())
    throw PreconditionError("coordinate_descent_sweep: dimension mismatch");
  Vector y = x;
  for (std::size_t i = 0; i < q.size(); ++i) y[idx(i)] -= alpha[idx(i)] * q.partial(y, i);
  return y;
}

Vector sor_time_steps(const QuadraticObjective& q, double omega) {
  check_omega(omega, "sor_time_steps");
  return (2.0 * omega / (2.0 - omega)) * q.A().diagonal().cwiseInverse();
}

Vector time_steps(const CoordinateObjective& V, double tau, TauSchedule schedule) {
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw PreconditionError("time step tau must be positive and finite");
  if (schedule == TauSchedule::constant) return Vector::Constant(idx(V.size()), tau);
  Vector diag;
  if (!diagonal_source(V, diag))
    throw PreconditionError("diag_scaled time steps need a quadratic objective");
  return tau * diag.cwiseInverse();
}

// ---------------------------------------------------------------------------------------------

SweepResult bia_sweep(const CoordinateObjective& V, const BregmanSpec& J,
                      const PrimalDualState& state, const Vector& taus, BoxMode mode,
                      const InclusionOptions& opts, std::optional<double> v_before) {
  const std::size_t n = V.size();
  check_state(state, n, "bia_sweep");
  if (J.size() != n || taus.size() != idx(n))
    throw PreconditionError("bia_sweep: J or time steps do not match the objective dimension");
  if (!(J.mu() > 0.0)) throw PreconditionError("bia_sweep: Bregman function must have mu > 0");

  const double v0 = value_or(v_before, V, state.x);
  auto cur = V.cursor(state.x);
  PrimalDualState next;
  next.p = state.p;
  for (std::size_t i = 0; i < n; ++i) {
    InclusionProblem prob;
    prob.sb = J[i];
    prob.p = next.p[idx(i)];
    prob.tau = taus[idx(i)];
    prob.x = cur->point()[idx(i)];
    prob.dq = [&cur, i](double t) { return cur->diff_quotient(i, t); };
    prob.clarke = cur->clarke(i);
    const InclusionSolution sol = solve_inclusion(prob, mode, opts);
    cur->set(i, sol.y);
    next.p[idx(i)] = sol.p_new;
  }
  next.x = cur->point();
  return finish_sweep(V, state, std::move(next), v0, J.mu(), taus.maxCoeff());
}

SweepResult ia_sweep(const CoordinateObjective& V, const PrimalDualState& state, const Vector& taus,
                     const InclusionOptions& opts, std::optional<double> v_before) {
  PrimalDualState euclid{state.x, state.x, state.k};
  return bia_sweep(V, BregmanSpec::euclidean(V.size()), euclid, taus, BoxMode::keep_box, opts,
                   v_before);
}

// ---------------------------------------------------------------------------------------------
//
// With tau_i = tau / a_ii and h = 1 + tau / 2 the coordinate inclusion for the quadratic reads
//   h y + gamma r_new + beta (|y| - |x|) / (y - x) = K,   K = h x_sor + gamma r,
// where x_sor = x - omega g / a_ii is the SOR update with omega = 2 tau / (2 + tau) and
// beta = tau lambda / a_ii is the l1 weight of V in p units.

CoordinateUpdate bsor_coordinate(double x, double q, double g, double a_ii, double gamma,
                                 double tau) {
  const double h = 1.0 + 0.5 * tau;
  const double K = h * x - tau / a_ii * g + q;
  CoordinateUpdate u;
  u.y = shrink(K, gamma) / h;
  u.q_new = K - h * u.y;
  return u;
}

CoordinateUpdate l1_bsor_coordinate(double x, double q, double g, double a_ii, double gamma,
                                    double lambda, double tau) {
  const double h = 1.0 + 0.5 * tau;
  const double step = tau / a_ii;
  const double K = h * x - step * g + q;
  const double beta = step * lambda;
  CoordinateUpdate u;

  if (x == 0.0) {
    if (std::abs(K) <= gamma + beta) {
      // Stationary: v in [g - lambda, g + lambda] with q - step v in [-gamma, gamma].
      Interval v = intersect({g - lambda, g + lambda}, {(q - gamma) / step, (q + gamma) / step});
      const double vi = v.empty() ? v.midpoint() : v.clamp(0.0);
      u.y = 0.0;
      u.q_new = q - step * vi;
      u.branch = 1;
      return u;
    }
    const double s = sign(K);
    u.y = (K - (gamma + beta) * s) / h;
    u.q_new = gamma * s;
    u.branch = 2;
    return u;
  }

  const double s0 = sign(x);
  if (s0 * K >= gamma + beta) {
    u.y = (K - (gamma + beta) * s0) / h;
    u.q_new = gamma * s0;
    u.branch = 2;
    return u;
  }
  if (std::abs(K - beta * s0) <= gamma) {
    u.y = 0.0;
    u.q_new = K - beta * s0;
    u.branch = 3;
    return u;
  }
  if (s0 * K < beta - gamma) {
    // y = -s0 m' with m' > 0 the positive root of h m'^2 + (h|x| + beta - R) m' - |x| (beta + R),
    // R = -s0 K - gamma.
    const double m = std::abs(x);
    const double R = -s0 * K - gamma;
    const double B = h * m + beta - R;
    const double C = m * (beta + R);
    const double disc = std::sqrt(B * B + 4.0 * h * C);
    const double root = B >= 0.0 ? 2.0 * C / (B + disc) : (disc - B) / (2.0 * h);
    u.y = -s0 * root;
    u.q_new = -gamma * s0;
    u.branch = 4;
    return u;
  }

  std::ostringstream msg;
  msg.precision(17);
  msg << "l1_bsor_coordinate: no case matched (x = " << x << ", q = " << q << ", g = " << g
      << ", a_ii = " << a_ii << ", gamma = " << gamma << ", lambda = " << lambda << ", tau = "
      << tau << ", K = " << K << ", beta = " << beta << ", s0*K = " << s0 * K
      << ", |K - beta s0| = " << std::abs(K - beta * s0) << ")";
  throw InternalConsistencyError(msg.str());
}

namespace {

template <typename Update>
SweepResult closed_form_sweep(const CoordinateObjective& V, const QuadraticObjective& q,
                              const PrimalDualState& state, double tau, double mu,
                              std::optional<double> v_before, Update&& update) {
  const std::size_t n = q.size();
  check_state(state, n, "closed-form sweep");
  const double v0 = value_or(v_before, V, state.x);
  PrimalDualState next{state.x, state.p, state.k};
  Vector& y = next.x;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = idx(i);
    const double xi = y[ii];
    const CoordinateUpdate u = update(i, xi, state.p[ii] - xi, q.partial(y, i));
    y[ii] = u.y;
    next.p[ii] = u.y + u.q_new;
  }
  return finish_sweep(V, state, std::move(next), v0, mu,
                      tau / q.A().diagonal().minCoeff());
}

}  // namespace

SweepResult bsor_sweep(const QuadraticObjective& q, const PrimalDualState& state, double gamma,
                       double tau, std::optional<double> v_before) {
  if (gamma < 0.0) throw PreconditionError("bsor_sweep: gamma must be nonnegative");
  if (!(tau > 0.0)) throw PreconditionError("bsor_sweep: tau must be positive");
  return closed_form_sweep(q, q, state, tau, 1.0, v_before,
                           [&](std::size_t i, double xi, double qi, double g) {
                             return bsor_coordinate(xi, qi, g, q.diag(i), gamma, tau);
                           });
}

SweepResult l1_bsor_sweep(const L1QuadraticObjective& V, const PrimalDualState& state,
                          double gamma, double tau, std::optional<double> v_before) {
  if (gamma < 0.0) throw PreconditionError("l1_bsor_sweep: gamma must be nonnegative");
  if (!(tau > 0.0)) throw PreconditionError("l1_bsor_sweep: tau must be positive");
  const QuadraticObjective& q = V.quadratic();
  const double lambda = V.lambda();
  return closed_form_sweep(V, q, state, tau, 1.0, v_before,
                           [&](std::size_t i, double xi, double qi, double g) {
                             return l1_bsor_coordinate(xi, gamma == 0.0 ? 0.0 : qi, g, q.diag(i),
                                                       gamma, lambda, tau);
                           });
}

SweepResult blcd_sweep(const QuadraticObjective& q, const PrimalDualState& state, double gamma,
                       double alpha, std::optional<double> v_before) {
  check_omega(alpha, "blcd_sweep");
  if (gamma < 0.0) throw PreconditionError("blcd_sweep: gamma must be nonnegative");
  const double tau_equiv = 2.0 * alpha / (2.0 - alpha);
  return closed_form_sweep(q, q, state, tau_equiv, 1.0, v_before,
                           [&](std::size_t i, double xi, double qi, double g) {
                             // Optimality: y_new + gamma s = p - alpha g / a_ii with s in d|y_new|.
                             const double p_new = xi + qi - alpha / q.diag(i) * g;
                             CoordinateUpdate u;
                             u.y = shrink(p_new, gamma);
                             u.q_new = p_new - u.y;
                             return u;
                           });
}

// ---------------------------------------------------------------------------------------------

BregmanSpec bregman_for(const SolverConfig& cfg, const CoordinateObjective& V,
                        const BregmanSpec* custom) {
  switch (cfg.variant) {
    case Variant::sor:
    case Variant::gauss_seidel:
    case Variant::ia:
      return BregmanSpec::euclidean(V.size());
    default:
      return custom ? *custom : BregmanSpec::elastic_net(V.size(), cfg.gamma);
  }
}

Sweeper make_sweeper(const CoordinateObjective& V, const BregmanSpec& J, const SolverConfig& cfg) {
  const auto* quad = dynamic_cast<const QuadraticObjective*>(&V);
  const auto* l1 = dynamic_cast<const L1QuadraticObjective*>(&V);
  auto need = [&](bool ok) {
    if (!ok)
      throw PreconditionError("solver '" + std::string(to_string(cfg.variant)) +
                              "' is not available for this objective");
  };

  switch (cfg.variant) {
    case Variant::sor:
    case Variant::gauss_seidel: {
      const double omega = cfg.variant == Variant::gauss_seidel ? 1.0 : cfg.omega;
      check_omega(omega, "sor");
      need(quad || l1);
      if (l1) {
        const double tau = 2.0 * omega / (2.0 - omega);
        return [l1, tau](const PrimalDualState& s, double v) {
          return l1_bsor_sweep(*l1, s, 0.0, tau, v);
        };
      }
      const double tau_max = sor_time_steps(*quad, omega).maxCoeff();
      return [quad, omega, tau_max](const PrimalDualState& s, double v) {
        PrimalDualState next{sor_sweep(*quad, s.x, omega), {}, s.k};
        next.p = next.x;
        return finish_sweep(*quad, s, std::move(next), v, 1.0, tau_max);
      };
    }
    case Variant::ia: {
      const Vector taus = time_steps(V, cfg.tau, cfg.tau_schedule);
      const InclusionOptions opts = cfg.inclusion;
      return [&V, taus, opts](const PrimalDualState& s, double v) {
        return ia_sweep(V, s, taus, opts, v);
      };
    }
    case Variant::bia:
    case Variant::bia_modified: {
      const Vector taus = time_steps(V, cfg.tau, cfg.tau_schedule);
      const InclusionOptions opts = cfg.inclusion;
      const BoxMode mode =
          cfg.variant == Variant::bia_modified ? BoxMode::forget_box : BoxMode::keep_box;
      return [&V, J, taus, opts, mode](const PrimalDualState& s, double v) {
        return bia_sweep(V, J, s, taus, mode, opts, v);
      };
    }
    case Variant::bsor:
    case Variant::l1_bsor: {
      need(quad || l1);
      if (cfg.tau_schedule != TauSchedule::diag_scaled)
        throw PreconditionError("closed-form BSOR variants use diag_scaled time steps");
      const double gamma = cfg.gamma, tau = cfg.tau;
      if (l1)
        return [l1, gamma, tau](const PrimalDualState& s, double v) {
          return l1_bsor_sweep(*l1, s, gamma, tau, v);
        };
      return [quad, gamma, tau](const PrimalDualState& s, double v) {
        return bsor_sweep(*quad, s, gamma, tau, v);
      };
    }
    case Variant::blcd: {
      need(quad != nullptr);
      const double gamma = cfg.gamma, alpha = cfg.omega;
      check_omega(alpha, "blcd");
      return [quad, gamma, alpha](const PrimalDualState& s, double v) {
        return blcd_sweep(*quad, s, gamma, alpha, v);
      };
    }
  }
  throw PreconditionError("unhandled solver variant");
}

RunResult run_with(const CoordinateObjective& V, const Sweeper& sweep, PrimalDualState start,
                   long max_iters, double stop_tol, int stop_patience,
                   const MetricsContext& metrics, const TraceSink& sink) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();

  RunResult out;
  double v = V.value(start.x);
  const double v_initial = metrics.v0.value_or(v);
  const double stop_sq = stop_tol * stop_tol;
  int small_steps = 0;
  out.state = std::move(start);

  for (long it = 0; it < max_iters; ++it) {
    SweepResult res = sweep(out.state, v);
    const double slack_floor = -1e-9 * std::max(1.0, std::abs(v));
    if (res.decrease < slack_floor) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "objective increased at sweep " << it + 1 << ": V(x^k) = " << v
          << ", V(x^{k+1}) = " << res.v_after << " (monotone decrease violated)";
      throw InvariantViolation(msg.str());
    }

    TraceRecord rec;
    rec.iter = it + 1;
    rec.objective = res.v_after;
    rec.rel_objective = metrics.v_star && v_initial > *metrics.v_star
                            ? relative_objective(res.v_after, v_initial, *metrics.v_star)
                            : std::numeric_limits<double>::quiet_NaN();
    if (metrics.x_star) {
      const SupportStats st = support_stats(res.state.x, *metrics.x_star);
      rec.support_match = st.match;
      rec.support_error = st.error;
    } else {
      rec.support_match = rec.support_error = std::numeric_limits<double>::quiet_NaN();
    }
    rec.grad_dist =
        metrics.grad_dist ? clarke_dist(V, res.state.x) : std::numeric_limits<double>::quiet_NaN();
    rec.step_norm = std::sqrt(res.step_sq);
    rec.dissipation_slack = res.dissipation_slack();
    rec.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();

    out.state = std::move(res.state);
    v = res.v_after;
    out.trace.push_back(rec);
    if (sink) sink(rec);

    small_steps = res.step_sq <= stop_sq ? small_steps + 1 : 0;
    if (stop_tol > 0.0 && small_steps >= stop_patience) {
      out.stopped_early = true;
      break;
    }
  }
  return out;
}

RunResult run(const CoordinateObjective& V, const BregmanSpec& J, const Vector& x0,
              const SolverConfig& cfg, const MetricsContext& metrics, const TraceSink& sink) {
  if (x0.size() != idx(V.size()) || J.size() != V.size())
    throw PreconditionError("run: x0, J and V dimensions differ");
  if (!J.feasible(x0)) throw PreconditionError("run: x0 violates the box constraints of J");
  PrimalDualState start{x0, J.min_norm_subgradient(x0), 0};
  return run_with(V, make_sweeper(V, J, cfg), std::move(start), cfg.max_iters, cfg.stop_tol,
                  cfg.stop_patience, metrics, sink);
}

}  // namespace bia
