#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "monosplit/operators.hpp"

namespace monosplit {

enum class StepKind { constant, schedule, linesearch };
enum class RhoPolicy { always_increase, never_increase };
enum class OperatorClass { lipschitz, cocoercive };

struct LinesearchParams {
  double delta = 0.9;   // in (0,1)
  double sigma = 0.5;   // in (0,1)
  RhoPolicy rho_policy = RhoPolicy::always_increase;
  double lambda0 = 1.0;
  int max_backtracks = 60;
};

struct StepPlan {
  StepKind kind = StepKind::constant;
  double lambda = 0.1;
  // Value of lambda_{-1}; nonpositive means "same as the first lambda".
  double lambda_minus1 = 0.0;
  std::vector<double> schedule;
  LinesearchParams linesearch;

  static StepPlan constant_step(double lam) {
    StepPlan p;
    p.kind = StepKind::constant;
    p.lambda = lam;
    return p;
  }
  static StepPlan scheduled(std::vector<double> lams) {
    StepPlan p;
    p.kind = StepKind::schedule;
    p.schedule = std::move(lams);
    return p;
  }
  static StepPlan backtracking(LinesearchParams ls) {
    StepPlan p;
    p.kind = StepKind::linesearch;
    p.linesearch = ls;
    return p;
  }

  void validate() const;
  // Stepsize used at iteration k (schedules clamp to their last entry).
  double at(int k) const;
};

struct SolverConfig {
  Vector x0;
  std::optional<Vector> x_minus1;  // defaults to x0
  StepPlan step;
  int max_iters = 1000;
  double residual_tol = 1e-10;
  double alpha = 0.0;  // inertia, in [0,1)
  double beta = 1.0;   // relaxation, in (0,1]
  std::uint64_t seed = 0;
  bool record_energy = false;
  int iterate_stride = 1;   // thinning of the stored iterate trace
  int residual_stride = 1;  // residual check cadence

  void validate() const;
};

enum class SolveStatus { converged, max_iters, diverged, linesearch_failed };

const char* to_string(SolveStatus s);

struct OracleCalls {
  long resolvent = 0;
  long forward_B = 0;
  long forward_Bi = 0;
  long forward_C = 0;
};

struct SolverRun {
  // x_0, x_1, ... thinned by iterate_stride (always includes the last point).
  std::vector<Vector> iterates;
  Vector x_minus1;
  std::vector<double> residuals;  // residuals[k] = natural residual of x_{k+1}
  std::vector<double> lambdas;    // lambdas[k] = stepsize used at iteration k
  double lambda_minus1 = 0.0;
  // z-sequence residuals for the relaxed-inertial scheme, empty otherwise.
  std::vector<double> aux_residuals;
  std::vector<int> backtracks;  // linesearch only: accepted index i per iteration
  OracleCalls oracle_calls;
  SolveStatus status = SolveStatus::max_iters;
  Vector final_point;
  std::vector<std::string> warnings;

  int iterations() const { return static_cast<int>(residuals.size()); }
};

/// Natural residual ||x - J_{lambda A}(x - lambda B(x) - lambda C(x))||.
/// Zero exactly at solutions; costs one forward (+C) and one resolvent
/// evaluation, not charged to any run's oracle budget.
double natural_residual(const SplitInclusion& P, double lambda, const Vector& x);

/// Forward-reflected-backward iteration with constant or scheduled stepsizes:
/// x_{k+1} = J_{lambda_k A}(x_k - lambda_k B(x_k) - lambda_{k-1}(B(x_k) - B(x_{k-1}))).
/// One forward and one resolvent evaluation per iteration (B values cached).
SolverRun run_forb(const SplitInclusion& P, const SolverConfig& cfg);

/// FoRB with backtracking: trial lambda_k = rho lambda_{k-1} sigma^i, the
/// first i accepted with lambda_k ||B(x_{k+1}) - B(x_k)|| <= (delta/2) ||x_{k+1} - x_k||.
/// The reflection term lambda_{k-1}(B(x_k) - B(x_{k-1})) is held fixed during
/// the search.
SolverRun run_forb_linesearch(const SplitInclusion& P, const SolverConfig& cfg);

/// Relaxed-inertial scheme:
/// z_{k+1} = J_{lambda A}(x_k - lambda B(x_k) - (lambda/beta)(B(x_k) - B(x_{k-1}))
///                        + (alpha/beta)(x_k - x_{k-1})),
/// x_{k+1} = (1-beta) x_k + beta z_{k+1}.
/// With alpha = 0, beta = 1 the iterates coincide exactly with run_forb.
SolverRun run_relaxed_inertial(const SplitInclusion& P, const SolverConfig& cfg);

/// Three-operator scheme for 0 in (A+B+C)(x) with C cocoercive:
/// x_{k+1} = J_{lambda A}(x_k - 2 lambda B(x_k) + lambda B(x_{k-1}) - lambda C(x_k)).
SolverRun run_forb3(const SplitInclusion& P, const SolverConfig& cfg);

/// Stochastic correction: the reflection uses a uniformly drawn part,
/// x_{k+1} = J_{lambda A}(x_k - lambda B(x_k) - lambda (B_i(x_k) - B_i(x_{k-1}))).
/// B must evaluate as the average (1/n) sum_i B_i of the parts. Deterministic
/// given cfg.seed.
SolverRun run_stochastic_forb(const SplitInclusion& P,
                              const std::vector<ForwardOracle>& parts,
                              const SolverConfig& cfg);

enum class BaselineAlg {
  tseng,
  forward_backward,
  proximal_point,
  projected_reflected_gradient,
  popov
};

/// Reference recursions: Tseng's forward-backward-forward, plain
/// forward-backward, proximal point, projected reflected gradient (A must be
/// a projection), and Popov's two-step method (A must be zero).
SolverRun run_baseline(BaselineAlg alg, const SplitInclusion& P,
                       const SolverConfig& cfg);

enum class Alg {
  forb,
  forb_linesearch,
  relaxed_inertial,
  forb3,
  stochastic_forb,
  tseng,
  forward_backward,
  proximal_point,
  projected_reflected_gradient,
  popov
};

/// Supremum of the theoretically admissible stepsize range (exclusive bound).
/// Returns 0 for infeasible (alpha, beta) combinations and for methods with
/// no guarantee in the given operator class; +inf when unrestricted.
double max_stepsize(Alg alg, const SplitInclusion::Constants& c, double alpha,
                    double beta, OperatorClass cls);

}  // namespace monosplit
