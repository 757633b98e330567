#pragma once

#include "bia/bregman.hpp"
#include "bia/inclusion.hpp"
#include "bia/metrics.hpp"
#include "bia/objectives.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bia {

enum class Variant { sor, gauss_seidel, ia, bia, bia_modified, bsor, l1_bsor, blcd };

std::string_view to_string(Variant v);
/// Throws PreconditionError for unknown names.
Variant parse_variant(std::string_view name);

enum class TauSchedule { constant, diag_scaled };

struct SolverConfig {
  Variant variant = Variant::sor;
  /// Base time step; per-coordinate tau / a_ii under diag_scaled.
  double tau = 2.0;
  /// Relaxation for sor (gauss_seidel forces 1); step parameter alpha for blcd.
  double omega = 1.0;
  TauSchedule tau_schedule = TauSchedule::diag_scaled;
  /// Sparsity weight of the elastic-net Bregman function (bia, bsor, l1_bsor, blcd).
  double gamma = 1.0;
  long max_iters = 200;
  /// Stop after 3 consecutive sweeps with ||x^{k+1} - x^k|| <= stop_tol; <= 0 disables.
  double stop_tol = 0.0;
  int stop_patience = 3;
  InclusionOptions inclusion{};
};

struct SweepResult {
  PrimalDualState state;
  double v_before = 0.0;
  double v_after = 0.0;
  /// V(x^k) - V(x^{k+1}).
  double decrease = 0.0;
  /// ||x^{k+1} - x^k||^2.
  double step_sq = 0.0;
  double mu = 1.0;
  double tau_max = 1.0;

  /// decrease - (mu / tau_max) step_sq; nonnegative up to rounding for dissipative schemes.
  double dissipation_slack() const { return decrease - mu / tau_max * step_sq; }
};

/// Dissipation failure beyond 1e-9 max(1, |V|), or a broken subgradient invariant.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A closed-form case analysis in which no case matched.
class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// --- linear-system sweeps -------------------------------------------------------------------

/// One SOR sweep in ascending coordinate order; omega = 1 is Gauss-Seidel.
Vector sor_sweep(const QuadraticObjective& q, const Vector& x, double omega);

/// Explicit coordinate descent with steps alpha_i.
Vector coordinate_descent_sweep(const QuadraticObjective& q, const Vector& x, const Vector& alpha);

/// Itoh-Abe time steps that reproduce SOR(omega): tau_i = 2 omega / ((2 - omega) a_ii).
Vector sor_time_steps(const QuadraticObjective& q, double omega);

/// tau / a_ii (diag_scaled) or the constant tau.
Vector time_steps(const CoordinateObjective& V, double tau, TauSchedule schedule);

// --- discrete gradient sweeps ---------------------------------------------------------------

/// Bregman Itoh-Abe sweep: n scalar inclusions against the partially updated point.
SweepResult bia_sweep(const CoordinateObjective& V, const BregmanSpec& J,
                      const PrimalDualState& state, const Vector& taus,
                      BoxMode mode = BoxMode::keep_box, const InclusionOptions& opts = {},
                      std::optional<double> v_before = std::nullopt);

/// Itoh-Abe sweep (J = |x|^2 / 2); the incoming p is ignored and the returned p equals x.
SweepResult ia_sweep(const CoordinateObjective& V, const PrimalDualState& state,
                     const Vector& taus, const InclusionOptions& opts = {},
                     std::optional<double> v_before = std::nullopt);

// --- closed forms for J = |x|^2/2 + gamma |x|_1, tau_i = tau / a_ii --------------------------

struct CoordinateUpdate {
  double y = 0.0;
  /// gamma r_new, so that p_new = y + q_new.
  double q_new = 0.0;
  /// Matching case (1-4) of the l1 analysis; 0 for plain BSOR.
  int branch = 0;
};

/// Shrinkage step for one coordinate. x: current value, q = p - x = gamma r, g = <a^i, y> - b_i.
CoordinateUpdate bsor_coordinate(double x, double q, double g, double a_ii, double gamma,
                                 double tau);

/// Four-case update for V = quadratic + lambda |x|_1. Cases are tested in order:
///   1 stay at zero, 2 move without crossing zero, 3 land on zero, 4 cross zero.
/// At a stationary zero the Clarke element of smallest magnitude is used, as in solve_inclusion.
CoordinateUpdate l1_bsor_coordinate(double x, double q, double g, double a_ii, double gamma,
                                    double lambda, double tau);

SweepResult bsor_sweep(const QuadraticObjective& q, const PrimalDualState& state, double gamma,
                       double tau, std::optional<double> v_before = std::nullopt);

SweepResult l1_bsor_sweep(const L1QuadraticObjective& V, const PrimalDualState& state,
                          double gamma, double tau, std::optional<double> v_before = std::nullopt);

/// Bregman linearised coordinate descent: per coordinate minimise
///   g_i z + (a_ii / alpha) D_J^p(y, y + z e_i),  J = |x|^2/2 + gamma |x|_1.
/// Matches bsor_sweep with tau = 2 alpha / (2 - alpha) and gamma_bsor = gamma (1 + alpha / (2 - alpha)).
SweepResult blcd_sweep(const QuadraticObjective& q, const PrimalDualState& state, double gamma,
                       double alpha, std::optional<double> v_before = std::nullopt);

// --- driver ---------------------------------------------------------------------------------

using Sweeper = std::function<SweepResult(const PrimalDualState&, double v_before)>;

/// The Bregman function a variant runs with (euclidean for sor/gauss_seidel/ia).
BregmanSpec bregman_for(const SolverConfig& cfg, const CoordinateObjective& V,
                        const BregmanSpec* custom = nullptr);

/// Bind a variant to an objective. Closed-form variants require a QuadraticObjective
/// (sor, gauss_seidel, bsor, blcd) or an L1QuadraticObjective (l1_bsor; sor/gauss_seidel/bsor
/// map onto it with gamma = 0 or gamma). Throws PreconditionError on a mismatch.
Sweeper make_sweeper(const CoordinateObjective& V, const BregmanSpec& J, const SolverConfig& cfg);

struct RunResult {
  PrimalDualState state;
  std::vector<TraceRecord> trace;
  bool stopped_early = false;
};

using TraceSink = std::function<void(const TraceRecord&)>;

/// Sweep until max_iters or until the step stays below stop_tol (> 0) for stop_patience sweeps.
/// p^0 is the minimal-norm subgradient of J at x0. Throws InvariantViolation if the objective
/// increases by more than 1e-9 max(1, |V|).
RunResult run(const CoordinateObjective& V, const BregmanSpec& J, const Vector& x0,
              const SolverConfig& cfg, const MetricsContext& metrics = {},
              const TraceSink& sink = {});

/// Same loop with an explicit sweeper and initial state.
RunResult run_with(const CoordinateObjective& V, const Sweeper& sweep, PrimalDualState start,
                   long max_iters, double stop_tol, int stop_patience,
                   const MetricsContext& metrics = {}, const TraceSink& sink = {});

}  // namespace bia
