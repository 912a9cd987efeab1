#include <doctest.h>

#include <cmath>

#include "monosplit/problems.hpp"
#include "monosplit/prox.hpp"
#include "monosplit/rng.hpp"
#include "monosplit/solver.hpp"
#include "test_oracles.hpp"

using namespace monosplit;
using testing_oracles::vec;

TEST_CASE("rotation operator closed forms") {
  ProblemInstance p = make_rotation(1);
  CHECK((p.inclusion.B(vec({3.0, 4.0})) - vec({4.0, -3.0})).norm() == 0.0);
  CHECK(*p.inclusion.constants.L == 1.0);
  CHECK(p.inclusion.reference_solution->norm() == 0.0);

  ProblemInstance big = make_rotation(3);
  SplitMix64 rng(101);
  for (int t = 0; t < 100; ++t) {
    Vector z = rng.vector(6, -5.0, 5.0);
    Vector Bz = big.inclusion.B(z);
    CHECK(std::abs(z.dot(Bz)) <= 1e-12 * z.squaredNorm());  // skew
    CHECK(Bz.norm() == doctest::Approx(z.norm()).epsilon(1e-14));  // isometry
  }
}

TEST_CASE("rotation parts average to the full operator") {
  ProblemInstance p = make_rotation(2);
  REQUIRE(p.parts.size() == 2);
  SplitMix64 rng(55);
  for (int t = 0; t < 20; ++t) {
    Vector z = rng.vector(4, -3.0, 3.0);
    Vector avg = 0.5 * (p.parts[0](z) + p.parts[1](z));
    CHECK((avg - p.inclusion.B(z)).norm() <= 1e-15);
  }
}

TEST_CASE("PSD affine VI with zero offset has the origin as solution") {
  // Same construction as the generator's skew_weight = 0 branch, with q = 0:
  // B = P'P x vanishes at the origin, which is interior to the box.
  SplitMix64 rng(31);
  Matrix P0 = rng.matrix(4, 4, -1.0, 1.0);
  Matrix M = P0.transpose() * P0;
  ResolventOracle box = box_indicator(4, -10.0, 10.0);
  Vector sol = solve_extragradient(
      box, [&](const Vector& x) -> Vector { return M * x; }, operator_norm(M),
      Vector::Ones(4), 1e-12);
  CHECK(sol.norm() <= 1e-8);
}

TEST_CASE("affine VI reference solution is KKT-certified") {
  ProblemInstance p = make_affine_vi(13, 4);
  const Vector& x = *p.inclusion.reference_solution;
  Vector w = -p.inclusion.B(x);
  CHECK_NOTHROW(certify_box_normal_cone(x, w, -10.0, 10.0, 1e-10));
  // Independent componentwise re-check of the same conditions.
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] > -10.0 + 1e-8 && x[i] < 10.0 - 1e-8) CHECK(std::abs(w[i]) <= 1e-10);
  }
}

TEST_CASE("generators are bit-deterministic in their seed") {
  ProblemInstance a = make_affine_vi(13, 4);
  ProblemInstance b = make_affine_vi(13, 4);
  CHECK(a.data == b.data);  // exact double comparison through the JSON values
  CHECK(testing_oracles::bitwise_equal(*a.inclusion.reference_solution,
                                       *b.inclusion.reference_solution));
  ProblemInstance c = make_affine_vi(14, 4);
  CHECK(a.data != c.data);
}

TEST_CASE("strongly monotone instance and resolvent closed form") {
  ProblemInstance p = make_strongly_monotone(5, 3, 0.5, 2.0);
  CHECK(*p.inclusion.constants.m == 0.5);
  CHECK(*p.inclusion.constants.L == 2.0);
  // J_{lambda(mI + N_box)}(x) = clamp(x / (1 + lambda m)).
  SplitMix64 rng(8);
  for (int t = 0; t < 10; ++t) {
    Vector x = rng.vector(3, -30.0, 30.0);
    double lam = 0.7;
    Vector direct = (x / (1.0 + lam * 0.5)).cwiseMax(-10.0).cwiseMin(10.0);
    CHECK((p.inclusion.A(lam, x) - direct).norm() <= 1e-12);
  }
  // Declared Lipschitz constant bounds the sampled estimate.
  CHECK(estimate_lipschitz(p.inclusion.B, 3, 100) <= 2.0 + 1e-9);
}

TEST_CASE("symmetric PD map with m = L has the origin as unconstrained solution") {
  SplitMix64 rng(61);
  Matrix R = rng.matrix(3, 3, -1.0, 1.0);
  Matrix M = R.transpose() * R + Matrix::Identity(3, 3);
  SplitInclusion P;
  P.A = zero_operator(3);
  P.B.dim = 3;
  P.B.eval = [M](const Vector& x) -> Vector { return M * x; };
  double L = operator_norm(M);
  P.constants.L = L;
  SolverConfig cfg;
  cfg.x0 = Vector::Ones(3);
  cfg.step = StepPlan::constant_step(0.4 / L);
  cfg.max_iters = 100000;
  cfg.residual_tol = 1e-12;
  SolverRun run = run_forb(P, cfg);
  CHECK(run.status == SolveStatus::converged);
  CHECK(run.final_point.norm() <= 1e-10);
}

TEST_CASE("composite minimization reference solutions") {
  SUBCASE("zero data gives the zero solution") {
    SplitMix64 rng(71);
    Matrix P0 = rng.matrix(5, 3, -1.0, 1.0);
    ResolventOracle prox = l1_norm(3, 0.5);
    Vector sol = solve_prox_gradient(
        prox, [&](const Vector& x) -> Vector { return P0.transpose() * (P0 * x); },
        0.1, Vector::Ones(3), 1e-12);
    CHECK(sol.norm() <= 1e-10);
  }
  SUBCASE("large tau shrinks the solution to zero") {
    ProblemInstance small_tau = make_composite_min(3, 10, 20, 0.1);
    // Rebuild P' b from the serialized data and pick tau above its sup-norm.
    ProblemInstance p = make_composite_min(3, 10, 20, 1000.0);
    CHECK(p.inclusion.reference_solution->norm() <= 1e-12);
    CHECK(small_tau.inclusion.reference_solution->norm() > 1e-6);
  }
  SUBCASE("FoRB reaches the proximal-gradient reference") {
    ProblemInstance p = make_composite_min(3, 10, 20, 0.1);
    double L = *p.inclusion.constants.L;
    SolverConfig cfg;
    cfg.x0 = Vector::Zero(20);
    cfg.step = StepPlan::constant_step(0.9 / (2.0 * L));
    cfg.max_iters = 200000;
    cfg.residual_tol = 1e-12;
    SolverRun run = run_forb(p.inclusion, cfg);
    CHECK((run.final_point - *p.inclusion.reference_solution).norm() <= 1e-8);
  }
}

TEST_CASE("three-operator instance") {
  ProblemInstance p = make_three_operator(11, 4);
  double L1 = *p.inclusion.constants.L1;
  double L2 = *p.inclusion.constants.L2;
  CHECK(2.0 / (4.0 * L1 + L2) > 1.0 / (2.0 * (L1 + L2)));
  REQUIRE(p.inclusion.C.has_value());
  const Vector& x = *p.inclusion.reference_solution;
  Vector w = -(p.inclusion.B(x) + (*p.inclusion.C)(x));
  CHECK_NOTHROW(certify_box_normal_cone(x, w, -10.0, 10.0, 1e-10));
}

TEST_CASE("quadratic-only inclusion solves to its interior center") {
  // Degenerate three-operator structure with no skew part: the solution of
  // 0 in (N_box + H(x - c)) with c interior is c itself.
  SplitMix64 rng(91);
  Matrix R = rng.matrix(4, 4, -1.0, 1.0);
  Matrix H = R.transpose() * R + Matrix::Identity(4, 4);
  Vector c = rng.vector(4, -5.0, 5.0);
  ResolventOracle box = box_indicator(4, -10.0, 10.0);
  Vector sol = solve_extragradient(
      box, [&](const Vector& x) -> Vector { return H * (x - c); },
      operator_norm(H), Vector::Zero(4), 1e-12);
  CHECK((sol - c).norm() <= 1e-10);
}

TEST_CASE("bilinear saddle instance") {
  SUBCASE("decoupled case solves to the origin") {
    SplitInclusion P = saddle_operator(
        [](const Vector& x, const Vector&) -> Vector { return Vector::Zero(x.size()); },
        [](const Vector&, const Vector& y) -> Vector { return Vector::Zero(y.size()); },
        quadratic(Matrix::Identity(2, 2), Vector::Zero(2)),
        quadratic(Matrix::Identity(2, 2), Vector::Zero(2)));
    Vector sol = solve_extragradient(
        P.A, [&](const Vector& w) -> Vector { return P.B(w); }, 1.0,
        Vector::Ones(4), 1e-12);
    CHECK(sol.norm() <= 1e-10);
  }
  SUBCASE("generated instance has a skew forward part and converges under FoRB") {
    ProblemInstance p = make_saddle_bilinear(21, 3, 2);
    SplitMix64 rng(121);
    for (int t = 0; t < 100; ++t) {
      Vector w = rng.vector(5, -3.0, 3.0);
      CHECK(std::abs(w.dot(p.inclusion.B(w))) <= 1e-12 * std::max(1.0, w.squaredNorm()));
    }
    SolverConfig cfg;
    cfg.x0 = Vector::Ones(5);
    cfg.step = StepPlan::constant_step(0.49 / *p.inclusion.constants.L);
    cfg.max_iters = 10000;
    cfg.residual_tol = 1e-8;
    SolverRun run = run_forb(p.inclusion, cfg);
    CHECK(run.status == SolveStatus::converged);
    CHECK(run.iterations() <= 10000);
  }
}

TEST_CASE("serialized problems reconstruct the forward map") {
  ProblemInstance p = make_affine_vi(13, 4);
  nlohmann::json j = to_json(p);
  std::vector<double> mrow = j["data"]["M"].get<std::vector<double>>();
  std::vector<double> qv = j["data"]["q"].get<std::vector<double>>();
  REQUIRE(mrow.size() == 16);
  Matrix M(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) M(r, c) = mrow[static_cast<std::size_t>(r * 4 + c)];
  Vector q = Eigen::Map<Vector>(qv.data(), 4);
  SplitMix64 rng(131);
  for (int t = 0; t < 10; ++t) {
    Vector x = rng.vector(4, -2.0, 2.0);
    CHECK(((M * x + q) - p.inclusion.B(x)).norm() == 0.0);
  }
  CHECK(j["seed"] == 13);
}

TEST_CASE("normal-cone certification rejects inconsistent multipliers") {
  CHECK_THROWS_AS(certify_box_normal_cone(vec({0.0}), vec({1.0}), -1.0, 1.0, 1e-10),
                  construction_error);
  CHECK_THROWS_AS(certify_box_normal_cone(vec({1.0}), vec({-1.0}), -1.0, 1.0, 1e-10),
                  construction_error);
  CHECK_NOTHROW(certify_box_normal_cone(vec({1.0}), vec({2.0}), -1.0, 1.0, 1e-10));
  CHECK_NOTHROW(certify_box_normal_cone(vec({0.3}), vec({0.0}), -1.0, 1.0, 1e-10));
}

TEST_CASE("generator parameter validation") {
  CHECK_THROWS_AS(make_rotation(0), parameter_error);
  CHECK_THROWS_AS(make_affine_vi(1, 3, 1.5), parameter_error);
  CHECK_THROWS_AS(make_strongly_monotone(1, 3, 2.0, 1.0), parameter_error);
  CHECK_THROWS_AS(make_three_operator(1, 3), parameter_error);  // odd n
  CHECK_THROWS_AS(make_composite_min(1, 0, 3, 0.1), parameter_error);
}
