// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "bia/experiment.hpp"
#include "bia/inclusion.hpp"
#include "bia/problems.hpp"
#include "bia/solvers.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace bia;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

constexpr double kSlackTol = 1e-9;
constexpr long kNever = std::numeric_limits<long>::max();

double slack_floor(double v) { return -kSlackTol * std::max(1.0, std::abs(v)); }

// First sweep whose column value is at or below the threshold.
long first_at_or_below(const std::vector<TraceRecord>& trace, double TraceRecord::*col,
                       double threshold) {
  for (const auto& r : trace)
    if (r.*col <= threshold) return r.iter;
  return kNever;
}

std::string sweeps(long k) { return k == kNever ? "never" : std::to_string(k); }

bool monotone(const std::vector<TraceRecord>& trace, double v0) {
  double prev = v0;
  for (const auto& r : trace) {
    if (r.objective > prev - slack_floor(prev)) return false;
    prev = r.objective;
  }
  return true;
}

// Dissipation slack of every row measured against the objective before that sweep.
double worst_slack_ratio(const std::vector<TraceRecord>& trace, double v0) {
  double prev = v0, worst = std::numeric_limits<double>::infinity();
  for (const auto& r : trace) {
    worst = std::min(worst, r.dissipation_slack / std::max(1.0, std::abs(prev)));
    prev = r.objective;
  }
  return worst;
}

// Closed forms need a quadratic (blcd) or quadratic-plus-l1 objective.
bool applicable(Preset preset, const std::string& solver) {
  if (preset == Preset::student_t_denoise)
    return solver == "ia" || solver == "bia" || solver == "bia_modified";
  if (preset == Preset::gaussian_noisy_l1) return solver != "blcd";
  return true;
}

const std::vector<std::string> kAllSolvers = {"sor", "gauss_seidel", "ia",  "bia",
                                              "bia_modified", "bsor", "l1_bsor", "blcd"};
const std::vector<Preset> kAllPresets = {Preset::gaussian_noiseless, Preset::gaussian_noiseless_binary,
                                         Preset::gaussian_noisy, Preset::gaussian_noisy_l1,
                                         Preset::student_t_denoise};

ExperimentParams small_params(Preset preset, std::uint64_t seed) {
  ExperimentParams p = default_params(preset);
  p.seed = seed;
  p.n = 64;
  p.height = 32;
  p.width = 32;
  return p;
}

Matrix random_spd(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> N;
  Matrix G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = N(rng);
  Matrix A = G.transpose() * G + 0.5 * Matrix::Identity(n, n);
  return 0.5 * (A + A.transpose());
}

Vector random_vec(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> N;
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = N(rng);
  return v;
}

double gap(const Vector& a, const Vector& b) { return (a - b).lpNorm<Eigen::Infinity>(); }

// 1. dissipation on every variant and preset at small scale
Outcome dissipation_suite() {
  const auto t0 = Clock::now();
  int runs = 0;
  double worst = std::numeric_limits<double>::infinity();
  std::string where;
  for (Preset preset : kAllPresets) {
    ExperimentParams params = small_params(preset, 1);
    Problem prob = build_problem(params);
    const CoordinateObjective& V = *prob.objective;
    for (const auto& s : kAllSolvers) {
      if (!applicable(preset, s)) continue;
      SolverConfig cfg = solver_config(params, s);
      MetricsContext m;
      m.grad_dist = false;
      RunResult r = run(V, solver_bregman(params, prob, s), prob.x0, cfg, m);
      const double w = worst_slack_ratio(r.trace, V.value(prob.x0));
      if (w < worst) {
        worst = w;
        where = std::string(to_string(preset)) + "/" + s;
      }
      ++runs;
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << runs << " runs x 200 sweeps, worst slack/max(1,|V|) = " << worst << " (" << where
    << "), " << secs << " s (limit 30 s)";
  return {worst >= -kSlackTol && secs < 30.0, d.str()};
}

// 2. subgradient membership after every sweep
Outcome membership_suite() {
  struct Case {
    Preset preset;
    std::string solver;
  };
  const std::vector<Case> cases = {
      {Preset::gaussian_noiseless, "bia"},        {Preset::gaussian_noiseless, "bia_modified"},
      {Preset::gaussian_noiseless, "bsor"},       {Preset::gaussian_noisy, "bsor"},
      {Preset::gaussian_noisy_l1, "l1_bsor"},     {Preset::gaussian_noisy_l1, "bia"},
      {Preset::gaussian_noisy_l1, "bia_modified"}, {Preset::student_t_denoise, "bia"},
      {Preset::student_t_denoise, "bia_modified"}};
  double worst = 0.0;
  long sweeps_checked = 0;
  for (const auto& c : cases) {
    ExperimentParams params = small_params(c.preset, 2);
    Problem prob = build_problem(params);
    const CoordinateObjective& V = *prob.objective;
    BregmanSpec J = solver_bregman(params, prob, c.solver);
    Sweeper sweep = make_sweeper(V, J, solver_config(params, c.solver));
    PrimalDualState s{prob.x0, J.min_norm_subgradient(prob.x0), 0};
    double v = V.value(s.x);
    for (int k = 0; k < 200; ++k) {
      SweepResult r = sweep(s, v);
      s = r.state;
      v = r.v_after;
      if (!J.feasible(s.x)) return {false, c.solver + " left the box"};
      worst = std::max(worst, J.membership_violation(s.x, s.p));
      ++sweeps_checked;
    }
  }
  std::ostringstream d;
  d << sweeps_checked << " sweeps, worst membership violation " << worst << " (limit 1e-9)";
  return {worst <= 1e-9, d.str()};
}

// 3. SOR, Itoh-Abe and explicit coordinate descent coincide
Outcome equivalence_triangle() {
  std::mt19937_64 rng(3);
  double worst = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    for (double omega : {0.5, 1.0, 1.5}) {
      QuadraticObjective q(random_spd(rng, 16), random_vec(rng, 16));
      Vector x0 = random_vec(rng, 16);
      Vector sor = x0, cd = x0;
      PrimalDualState ia{x0, x0, 0};
      const Vector taus = sor_time_steps(q, omega);
      const Vector alpha = omega * q.A().diagonal().cwiseInverse();
      for (int k = 0; k < 100; ++k) {
        sor = sor_sweep(q, sor, omega);
        cd = coordinate_descent_sweep(q, cd, alpha);
        ia = ia_sweep(q, ia, taus).state;
        worst = std::max({worst, gap(sor, cd), gap(sor, ia.x), gap(cd, ia.x)});
      }
    }
  }
  std::ostringstream d;
  d << "9 instances, omega in {0.5, 1, 1.5}, max gap " << worst << " (limit 1e-12)";
  return {worst <= 1e-12, d.str()};
}

// 4. closed forms against the generic root-solving sweep
Outcome closed_forms() {
  std::mt19937_64 rng(4);
  std::ostringstream d;
  bool ok = true;

  double bsor_gap = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    QuadraticObjective q(random_spd(rng, 16), random_vec(rng, 16));
    const double gamma = 0.5 + trial, tau = 1.0 + trial;
    auto J = BregmanSpec::elastic_net(16, gamma);
    Vector x0 = random_vec(rng, 16);
    PrimalDualState a{x0, J.min_norm_subgradient(x0), 0}, b = a;
    const Vector taus = tau * q.A().diagonal().cwiseInverse();
    for (int k = 0; k < 50; ++k) {
      a = bsor_sweep(q, a, gamma, tau).state;
      b = bia_sweep(q, J, b, taus).state;
      bsor_gap = std::max({bsor_gap, gap(a.x, b.x), gap(a.p, b.p)});
    }
  }
  ok = ok && bsor_gap <= 1e-10;
  d << "bsor vs bia " << bsor_gap << " (1e-10); ";

  std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.0, 1.0);
  std::bernoulli_distribution zero(0.3);
  double l1_gap = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const double a = 0.2 + 3.0 * pos(rng), gamma = 0.05 + 1.5 * pos(rng);
    const double lambda = 0.05 + 2.0 * pos(rng), tau = 0.1 + 3.0 * pos(rng);
    const double x = zero(rng) ? 0.0 : 2.0 * u(rng);
    const double qv = x == 0.0 ? gamma * u(rng) : gamma * sign(x);
    const double g = 3.0 * u(rng);
    const auto cu = l1_bsor_coordinate(x, qv, g, a, gamma, lambda, tau);

    auto slice = [=](double t) { return g * (t - x) + 0.5 * a * (t - x) * (t - x) + lambda * std::abs(t); };
    InclusionProblem prob;
    prob.sb = ScalarBregman::elastic_net(gamma);
    prob.p = x + qv;
    prob.tau = tau / a;
    prob.x = x;
    const double vx = slice(x);
    prob.dq = [slice, x, vx](double t) { return (slice(t) - vx) / (t - x); };
    prob.clarke = x == 0.0 ? Interval{g - lambda, g + lambda} : Interval::point(g + lambda * sign(x));
    const auto ref = solve_inclusion(prob);
    l1_gap = std::max({l1_gap, std::abs(cu.y - ref.y), std::abs(cu.y + cu.q_new - ref.p_new)});
  }
  ok = ok && l1_gap <= 1e-8;
  d << "l1_bsor vs root solver on 1e4 scalars " << l1_gap << " (1e-8); ";

  double blcd_gap = 0.0;
  for (double alpha : {0.5, 1.0, 1.5}) {
    QuadraticObjective q(random_spd(rng, 16), random_vec(rng, 16));
    const double gamma_star = 0.7;
    const double tau = 2.0 * alpha / (2.0 - alpha);
    const double gamma = gamma_star * (1.0 + alpha / (2.0 - alpha));
    auto J = BregmanSpec::elastic_net(16, gamma);
    const Vector taus = tau * q.A().diagonal().cwiseInverse();
    PrimalDualState a{Vector::Zero(16), Vector::Zero(16), 0}, b = a;
    for (int k = 0; k < 50; ++k) {
      a = blcd_sweep(q, a, gamma_star, alpha).state;
      b = bia_sweep(q, J, b, taus).state;
      blcd_gap = std::max(blcd_gap, gap(a.x, b.x));
    }
  }
  ok = ok && blcd_gap <= 1e-10;
  d << "blcd vs bia " << blcd_gap << " (1e-10)";
  return {ok, d.str()};
}

// 5. noiseless sparse recovery
Outcome noiseless_recovery() {
  const auto t0 = Clock::now();
  int faster = 0;
  bool rel_ok = true;
  std::ostringstream d;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ExperimentParams p = default_params(Preset::gaussian_noiseless);
    p.seed = seed;
    p.solvers = {"sor", "bsor"};
    ExperimentResult res = run_experiment(p);
    const auto& sor = res.runs[0].result.trace;
    const auto& bsor = res.runs[1].result.trace;
    const long ks = first_at_or_below(sor, &TraceRecord::support_error, 0.01);
    const long kb = first_at_or_below(bsor, &TraceRecord::support_error, 0.01);
    if (kb < ks) ++faster;
    const double rs = sor[49].rel_objective, rb = bsor[49].rel_objective;
    if (!(rb <= rs)) rel_ok = false;
    d << "seed " << seed << ": support<=0.01 sor " << sweeps(ks) << " bsor " << sweeps(kb)
      << ", rel@50 sor " << rs << " bsor " << rb << "; ";
  }
  const double secs = seconds_since(t0);
  d << faster << "/5 faster, " << secs << " s (limit 120 s)";
  return {faster >= 4 && rel_ok && secs < 120.0, d.str()};
}

// 6. noisy unregularised case: monotone and dissipative
Outcome noisy_unregularised() {
  bool ok = true;
  double worst = std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ExperimentParams p = default_params(Preset::gaussian_noisy);
    p.seed = seed;
    p.solvers = {"sor", "bsor"};
    ExperimentResult res = run_experiment(p);
    const double v0 = res.problem.objective->value(res.problem.x0);
    for (const auto& run : res.runs) {
      ok = ok && monotone(run.result.trace, v0);
      worst = std::min(worst, worst_slack_ratio(run.result.trace, v0));
    }
  }
  std::ostringstream d;
  d << "5 seeds, sor and bsor monotone: " << (ok ? "yes" : "no") << ", worst slack ratio " << worst;
  return {ok && worst >= -kSlackTol, d.str()};
}

// 7. l1-regularised case
Outcome l1_regularised() {
  int faster = 0;
  std::ostringstream d;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ExperimentParams p = default_params(Preset::gaussian_noisy_l1);
    p.seed = seed;
    p.n = 256;
    p.lambda = 100.0 * 256.0 / 1024.0;
    p.solvers = {"sor", "l1_bsor"};
    ExperimentResult res = run_experiment(p);
    const long ks = first_at_or_below(res.runs[0].result.trace, &TraceRecord::rel_objective, 1e-4);
    const long kb = first_at_or_below(res.runs[1].result.trace, &TraceRecord::rel_objective, 1e-4);
    if (kb < ks) ++faster;
    d << "seed " << seed << ": rel<=1e-4 sor " << sweeps(ks) << " l1_bsor " << sweeps(kb) << "; ";
  }
  d << "gamma = 1, " << faster << "/5 faster (need 4)";
  return {faster >= 4, d.str()};
}

// 8. Student-t denoising
Outcome student_t() {
  int faster = 0;
  bool mono = true, window_ok = true;
  double max_rise = 0.0;
  std::ostringstream d;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ExperimentParams p = default_params(Preset::student_t_denoise);
    p.seed = seed;
    ExperimentResult res = run_experiment(p);
    const double v0 = res.problem.objective->value(res.problem.x0);
    long k[2] = {kNever, kNever};
    for (std::size_t r = 0; r < res.runs.size(); ++r) {
      const auto& tr = res.runs[r].result.trace;
      // grad_dist is only resolved to about sqrt(n) L tol by the inner root solves
      const CoordinateObjective& V = *res.problem.objective;
      const double resolution = std::sqrt(static_cast<double>(V.size())) *
                                V.lipschitz_hint(0).value_or(1.0) * res.runs[r].config.inclusion.tol;
      mono = mono && monotone(tr, v0);
      k[r] = first_at_or_below(tr, &TraceRecord::rel_objective, 0.1);
      // sliding 20-sweep averages of grad_dist
      double prev = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i + 20 <= tr.size(); ++i) {
        double avg = 0.0;
        for (std::size_t j = i; j < i + 20; ++j) avg += tr[j].grad_dist;
        avg /= 20.0;
        if (avg > prev + resolution) window_ok = false;
        if (avg > prev) max_rise = std::max(max_rise, avg - prev);
        prev = avg;
      }
    }
    if (k[1] < k[0]) ++faster;
    d << "seed " << seed << ": rel<=0.1 ia " << sweeps(k[0]) << " bia " << sweeps(k[1]) << "; ";
  }
  d << faster << "/5 faster, monotone " << (mono ? "yes" : "no") << ", windowed grad_dist nonincreasing "
    << (window_ok ? "yes" : "no") << " (largest rise of a 20-sweep average " << max_rise << ")";
  return {faster >= 4 && mono && window_ok, d.str()};
}

// 9. stationarity residual once the noiseless runs stagnate
Outcome stationarity_at_stagnation() {
  constexpr long kCap = 2000000;
  double worst = 0.0;
  std::ostringstream d;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ExperimentParams p = default_params(Preset::gaussian_noiseless);
    p.seed = seed;
    Problem prob = build_problem(p);
    const CoordinateObjective& V = *prob.objective;
    for (const std::string s : {"sor", "bsor"}) {
      BregmanSpec J = solver_bregman(p, prob, s);
      Sweeper sweep = make_sweeper(V, J, solver_config(p, s));
      PrimalDualState st{prob.x0, J.min_norm_subgradient(prob.x0), 0};
      double v = V.value(st.x);
      int calm = 0;
      // stagnation: V no longer decreases beyond rounding and p no longer moves, 3 sweeps running
      while (st.k < kCap && calm < 3) {
        SweepResult r = sweep(st, v);
        const double dp = (r.state.p - st.p).lpNorm<Eigen::Infinity>();
        const bool flat = r.decrease <= 4.0 * std::numeric_limits<double>::epsilon() *
                                            std::max(1.0, std::abs(v)) &&
                          dp <= 1e-12;
        calm = flat ? calm + 1 : 0;
        st = r.state;
        v = r.v_after;
      }
      const double res = stationarity_residual(V, J, st.x);
      worst = std::max(worst, res);
      d << "seed " << seed << " " << s << ": " << st.k << (calm >= 3 ? "" : " (cap)") << " sweeps, residual "
        << res << "; ";
    }
  }
  d << "worst " << worst << " (limit 1e-5)";
  return {worst <= 1e-5, d.str()};
}

Outcome property_suite(Clock::time_point start) {
  const std::string cmd = std::string(BIA_UNIT_TESTS_PATH) + " --no-intro=true --minimal=true";
  const int status = std::system(cmd.c_str());
  const bool ok = WIFEXITED(status) && WEXITSTATUS(status) == 0;
  const double secs = seconds_since(start);
  std::ostringstream d;
  d << "unit and property tests " << (ok ? "passed" : "FAILED") << ", total acceptance runtime " << secs
    << " s (limit 300 s)";
  return {ok && secs < 300.0, d.str()};
}

}  // namespace

int main() {
  const auto start = Clock::now();
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "dissipation suite", dissipation_suite},
      {2, "subgradient membership", membership_suite},
      {3, "equivalence triangle", equivalence_triangle},
      {4, "closed forms vs root solver", closed_forms},
      {5, "noiseless sparse recovery", noiseless_recovery},
      {6, "noisy unregularised case", noisy_unregularised},
      {7, "l1-regularised case", l1_regularised},
      {8, "student-t denoising", student_t},
      {9, "stationarity at stagnation", stationarity_at_stagnation},
      {10, "property suite and runtime", [start] { return property_suite(start); }},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("criterion %2d %s: %s | %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
