#include <doctest.h>

#include <cmath>

#include "monosplit/diagnostics.hpp"
#include "monosplit/problems.hpp"
#include "monosplit/prox.hpp"
#include "monosplit/rng.hpp"
#include "monosplit/solver.hpp"
#include "test_oracles.hpp"

using namespace monosplit;
using testing_oracles::vec;

namespace {

SolverConfig constant_config(const Vector& x0, double lambda, int iters) {
  SolverConfig cfg;
  cfg.x0 = x0;
  cfg.step = StepPlan::constant_step(lambda);
  cfg.max_iters = iters;
  cfg.residual_tol = 0.0;
  return cfg;
}

}  // namespace

TEST_CASE("energy with B = 0 reduces to distance plus half step length") {
  SplitMix64 rng(17);
  Matrix R = rng.matrix(3, 3, -1.0, 1.0);
  Matrix Q = R.transpose() * R + Matrix::Identity(3, 3);
  SplitInclusion P;
  P.A = quadratic(Q, Vector::Zero(3));
  P.B.dim = 3;
  P.B.eval = [](const Vector& x) -> Vector { return Vector::Zero(3); };
  P.constants.L = 0.0;
  P.reference_solution = Vector::Zero(3);

  SolverRun run = run_forb(P, constant_config(Vector::Ones(3), 0.5, 60));
  EnergyReport rep = energy_forb(run, P);
  CHECK(rep.violations == 0);
  CHECK(rep.lower_bound_violations == 0);
  for (std::size_t k = 0; k < rep.per_iteration.size(); ++k) {
    const Vector& xk = run.iterates[k];
    const Vector& xkm = k == 0 ? run.x_minus1 : run.iterates[k - 1];
    double expected = xk.squaredNorm() + 0.5 * (xk - xkm).squaredNorm();
    CHECK(rep.per_iteration[k].phi == doctest::Approx(expected).epsilon(1e-12));
    if (k > 0) CHECK(rep.per_iteration[k].phi <= rep.per_iteration[k - 1].phi + 1e-12);
  }
}

TEST_CASE("rotation run satisfies the energy decrease for an in-range stepsize") {
  ProblemInstance rot = make_rotation(2);
  SolverRun run = run_forb(rot.inclusion,
                           constant_config(vec({1.0, -1.0, 0.5, 2.0}), 0.2, 500));
  EnergyReport rep = energy_forb(run, rot.inclusion);
  CHECK(rep.violations == 0);
}

TEST_CASE("starting at the solution keeps the energy at zero") {
  ProblemInstance rot = make_rotation(1);
  SolverRun run = run_forb(rot.inclusion, constant_config(Vector::Zero(2), 0.2, 20));
  EnergyReport rep = energy_forb(run, rot.inclusion);
  for (const auto& e : rep.per_iteration) CHECK(std::abs(e.phi) <= 1e-15);
}

TEST_CASE("strong-monotonicity contraction holds with the derived factor") {
  ProblemInstance p = make_strongly_monotone(5, 3, 0.5, 2.0);
  SolverRun run = run_forb(p.inclusion, constant_config(Vector::Ones(3), 0.2, 400));
  EnergyReport rep = energy_strong(run, p.inclusion);
  // eps = min{1/2 - 0.4, 0.5} = 0.1, alpha = min{1.325, 1.05} = 1.05.
  CHECK(rep.epsilon_used == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(rep.alpha_used == doctest::Approx(1.05).epsilon(1e-15));
  CHECK(rep.violations == 0);
  CHECK(rep.lower_bound_violations == 0);
  // Geometric envelope on the squared distance.
  const Vector& sol = *p.inclusion.reference_solution;
  double ab0 = rep.per_iteration[0].phi;
  for (std::size_t k = 0; k < run.iterates.size(); ++k) {
    double a = 0.5 * (run.iterates[k] - sol).squaredNorm();
    CHECK(a <= ab0 / std::pow(1.05, static_cast<double>(k)) + 1e-9);
  }
}

TEST_CASE("energy diagnostics require a reference and a full trace") {
  ProblemInstance rot = make_rotation(1);
  SolverRun run = run_forb(rot.inclusion, constant_config(vec({1.0, 0.0}), 0.2, 20));
  SplitInclusion no_ref = rot.inclusion;
  no_ref.reference_solution.reset();
  CHECK_THROWS_AS(energy_forb(run, no_ref), diagnostic_error);

  SolverConfig thinned = constant_config(vec({1.0, 0.0}), 0.2, 20);
  thinned.iterate_stride = 5;
  SolverRun sparse = run_forb(rot.inclusion, thinned);
  CHECK_THROWS_AS(energy_forb(sparse, rot.inclusion), diagnostic_error);
  CHECK_THROWS_AS(energy_strong(run, rot.inclusion), diagnostic_error);  // no m
}

TEST_CASE("rate estimation recovers exact geometric decay") {
  std::vector<double> series;
  for (int k = 0; k <= 60; ++k) series.push_back(std::pow(2.0, -k));
  RateEstimate est = estimate_rate(series, {0, 60});
  CHECK(est.rho == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(est.r_squared == doctest::Approx(1.0).epsilon(1e-12));

  series[5] = -1.0;
  CHECK_THROWS_AS(estimate_rate(series, {0, 60}), diagnostic_error);
  CHECK_THROWS_AS(estimate_rate(series, {0, 400}), diagnostic_error);
}

TEST_CASE("Tseng rotation rates match the closed forms") {
  ProblemInstance rot = make_rotation(1);
  SUBCASE("optimal stepsize") {
    double lam = 1.0 / std::sqrt(2.0);
    SolverRun run = run_baseline(BaselineAlg::tseng, rot.inclusion,
                                 constant_config(vec({1.0, 0.0}), lam, 300));
    RateEstimate est = estimate_rate(run, rot.inclusion,
                                     RateMetric::dist_to_solution, {10, 200});
    CHECK(est.rho == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-6));
    // The per-step contraction is exact, not just asymptotic.
    for (std::size_t k = 10; k < 200; ++k) {
      CHECK(run.iterates[k + 1].norm() ==
            doctest::Approx(std::sqrt(3.0) / 2.0 * run.iterates[k].norm())
                .epsilon(1e-12));
    }
  }
  SUBCASE("generic stepsize") {
    SolverRun run = run_baseline(BaselineAlg::tseng, rot.inclusion,
                                 constant_config(vec({1.0, 0.0}), 0.3, 300));
    RateEstimate est = estimate_rate(run, rot.inclusion,
                                     RateMetric::dist_to_solution, {10, 200});
    double expected = std::sqrt(1.0 - 0.3 * 0.3 + std::pow(0.3, 4));
    CHECK(est.rho == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("fixed-point reformulation tracks the solver") {
  SUBCASE("B = 0 gives zero deviation") {
    SplitInclusion P;
    P.A = quadratic(Matrix::Identity(2, 2), Vector::Zero(2));
    P.B.dim = 2;
    P.B.eval = [](const Vector& x) -> Vector { return Vector::Zero(2); };
    CHECK(fixed_point_form_check(P, 0.5, Vector::Ones(2), Vector::Ones(2), 50) == 0.0);
  }
  SUBCASE("rotation stays within round-off over 100 iterations") {
    ProblemInstance rot = make_rotation(1);
    double dev = fixed_point_form_check(rot.inclusion, 0.3, vec({1.0, 0.0}),
                                        vec({1.0, 0.0}), 100);
    CHECK(dev <= 1e-12);
  }
  SUBCASE("dimension mismatch is rejected") {
    ProblemInstance rot = make_rotation(1);
    CHECK_THROWS_AS(
        fixed_point_form_check(rot.inclusion, 0.3, Vector::Ones(3), Vector::Ones(3), 10),
        shape_error);
  }
}

TEST_CASE("shifted Lipschitz constant three-case table") {
  CHECK(lprime(OperatorClass::lipschitz, 1.0, 0.1) == doctest::Approx(1.1).epsilon(1e-15));
  CHECK(lprime(OperatorClass::cocoercive, 1.0, 0.4) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(lprime(OperatorClass::cocoercive, 1.0, 0.8) == doctest::Approx(0.8).epsilon(1e-15));
  // Continuity at rho = L/2.
  CHECK(lprime(OperatorClass::cocoercive, 1.0, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(lprime(OperatorClass::lipschitz, 0.0, 0.1), parameter_error);
}
