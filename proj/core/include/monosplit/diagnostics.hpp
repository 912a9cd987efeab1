#pragma once

#include <vector>

#include "monosplit/operators.hpp"
#include "monosplit/solver.hpp"

namespace monosplit {

struct EnergyReport {
  struct Entry {
    double phi = 0.0;
    bool decrease_ok = true;
    double slack = 0.0;
  };
  std::vector<Entry> per_iteration;
  double epsilon_used = 0.0;
  double alpha_used = 0.0;  // strong-monotonicity contraction factor, if any
  int violations = 0;
  int lower_bound_violations = 0;
};

struct IterationWindow {
  int lo = 0;
  int hi = 0;  // inclusive
};

enum class RateMetric { dist_to_solution, natural_residual };

struct RateEstimate {
  double rho = 1.0;
  IterationWindow window;
  double r_squared = 0.0;
  RateMetric metric = RateMetric::natural_residual;
};

/// Per-iteration energy
///   Phi_k = ||x_k - x||^2 + 2 lambda_{k-1} <B(x_k) - B(x_{k-1}), x - x_k>
///           + (1/2) ||x_k - x_{k-1}||^2
/// and the decrease check Phi_{k+1} + eps ||x_{k+1} - x_k||^2 <= Phi_k.
/// Also verifies the lower bound Phi_k >= (1/2)||x_k - x||^2 that holds for
/// in-range stepsizes. Requires a reference solution and a full iterate trace.
EnergyReport energy_forb(const SolverRun& run, const SplitInclusion& P,
                         double tol = 1e-9);

/// Strong-monotonicity contraction check: with
///   eps = min{1/2 - lambda L, 5 m lambda},
///   alpha = min{1 + 4 m lambda - 3 eps / 4, 1 + eps / 2},
/// verifies alpha (a_{k+1} + b_{k+1}) <= a_k + b_k and b_k >= 0 termwise,
/// plus the geometric envelope a_k <= (a_0 + b_0) / alpha^k.
EnergyReport energy_strong(const SolverRun& run, const SplitInclusion& P,
                           double tol = 1e-9);

/// Least-squares fit of log(metric_k) against k over the window;
/// rho = exp(slope).
RateEstimate estimate_rate(const SolverRun& run, const SplitInclusion& P,
                           RateMetric metric, IterationWindow window);
RateEstimate estimate_rate(const std::vector<double>& series,
                           IterationWindow window);

/// Runs the fixed-point form (x_{k+1}, u_{k+1}) = (M o T)(x_k, u_k) with
/// M = diag(J_{lambda A}, I), T = [[I - 2 lambda B, lambda I], [B, 0]],
/// u_0 = B(x_{-1}), side by side with run_forb; returns the maximum deviation
/// max_k ||x_k^{fp} - x_k^{forb}||.
double fixed_point_form_check(const SplitInclusion& P, double lambda,
                              const Vector& x0, const Vector& x_minus1,
                              int iters);

/// Lipschitz constant of B - rho I:
///   L + rho                        (B L-Lipschitz)
///   L - rho                        (B (1/L)-cocoercive, rho <= L/2)
///   rho                            (B (1/L)-cocoercive, rho >  L/2)
double lprime(OperatorClass cls, double L, double rho);

}  // namespace monosplit
