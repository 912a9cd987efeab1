#include <doctest.h>

#include <cmath>

#include "monosplit/operators.hpp"
#include "monosplit/prox.hpp"
#include "monosplit/rng.hpp"
#include "monosplit/solver.hpp"
#include "test_oracles.hpp"

using namespace monosplit;
using testing_oracles::vec;

TEST_CASE("l1 prox matches the 1-D grid-search minimizer") {
  double weight = 0.7;
  ResolventOracle prox = l1_norm(1, weight);
  for (double lambda : {0.3, 1.0, 2.5}) {
    for (double x : {-3.0, -0.4, 0.0, 0.2, 1.7}) {
      double expected = testing_oracles::prox_by_grid(
          [&](double u) { return weight * std::abs(u); }, lambda, x);
      double got = prox(lambda, vec({x}))[0];
      CHECK(got == doctest::Approx(expected).epsilon(1e-8));
    }
  }
}

TEST_CASE("quadratic prox matches the 1-D grid-search minimizer") {
  Matrix Q(1, 1);
  Q << 2.0;
  Vector q = vec({-1.0});
  ResolventOracle prox = quadratic(Q, q);
  for (double lambda : {0.5, 1.5}) {
    for (double x : {-2.0, 0.3, 4.0}) {
      double expected = testing_oracles::prox_by_grid(
          [&](double u) { return u * u - u; }, lambda, x);
      CHECK(prox(lambda, vec({x}))[0] == doctest::Approx(expected).epsilon(1e-6));
    }
  }
}

TEST_CASE("box and halfspace projections") {
  ResolventOracle box = box_indicator(3, -1.0, 2.0);
  Vector p = box(1.0, vec({-4.0, 0.5, 7.0}));
  CHECK(p[0] == -1.0);
  CHECK(p[1] == 0.5);
  CHECK(p[2] == 2.0);
  CHECK(box.is_projection);
  CHECK_THROWS_AS(box_indicator(1, 2.0, 1.0), parameter_error);

  Vector a = vec({1.0, 1.0});
  ResolventOracle hs = halfspace_indicator(a, 1.0);
  // Interior point is fixed; exterior point projects onto the boundary with
  // the step parallel to a.
  CHECK((hs(1.0, vec({0.2, 0.2})) - vec({0.2, 0.2})).norm() == 0.0);
  Vector proj = hs(1.0, vec({2.0, 2.0}));
  CHECK(a.dot(proj) == doctest::Approx(1.0));
  CHECK((vec({2.0, 2.0}) - proj).normalized().isApprox(a.normalized(), 1e-12));
}

TEST_CASE("zero operator resolvent is the identity") {
  ResolventOracle z = zero_operator(2);
  CHECK(z.is_identity);
  Vector x = vec({1.5, -2.0});
  CHECK(testing_oracles::bitwise_equal(z(0.7, x), x));
}

TEST_CASE("shift identity agrees with a direct linear solve") {
  // Resolvent of quadratic(Q) + mI computed via the shift identity must match
  // the closed form for quadratic(Q + mI).
  SplitMix64 rng(42);
  Matrix R = rng.matrix(3, 3, -1.0, 1.0);
  Matrix Q = R.transpose() * R;
  double m = 0.8;
  ResolventOracle via_shift = shifted_oracle(quadratic(Q, Vector::Zero(3)), m);
  ResolventOracle direct = quadratic(Q + m * Matrix::Identity(3, 3), Vector::Zero(3));
  for (int t = 0; t < 5; ++t) {
    Vector x = rng.vector(3, -2.0, 2.0);
    CHECK((via_shift(0.6, x) - direct(0.6, x)).norm() <= 1e-12);
  }
  // Pure mI case has the closed form x / (1 + lambda m).
  ResolventOracle pure = scaled_identity_shift(zero_operator(2), m);
  Vector x = vec({1.0, -3.0});
  CHECK((pure(0.5, x) - x / (1.0 + 0.5 * m)).norm() <= 1e-15);
}

TEST_CASE("Moreau identity: conjugate of l1 is the unit-box projection") {
  ResolventOracle conj = moreau_conjugate(l1_norm(2, 1.0));
  ResolventOracle box = box_indicator(2, -1.0, 1.0);
  SplitMix64 rng(7);
  for (int t = 0; t < 20; ++t) {
    Vector x = rng.vector(2, -4.0, 4.0);
    for (double lambda : {0.3, 1.0, 2.0}) {
      CHECK((conj(lambda, x) - box(lambda, x)).norm() <= 1e-12);
    }
  }
}

TEST_CASE("operator_norm agrees with an SVD oracle") {
  SplitMix64 rng(11);
  for (int t = 0; t < 4; ++t) {
    Matrix K = rng.matrix(5, 3, -2.0, 2.0);
    CHECK(operator_norm(K) ==
          doctest::Approx(testing_oracles::spectral_norm_svd(K)).epsilon(1e-9));
  }
  CHECK(operator_norm(Matrix::Zero(2, 2)) == 0.0);
}

TEST_CASE("block_diag applies each resolvent to its block") {
  ResolventOracle d = block_diag(box_indicator(1, 0.0, 1.0), l1_norm(1, 1.0));
  Vector out = d(0.5, vec({3.0, 2.0}));
  CHECK(out[0] == 1.0);
  CHECK(out[1] == doctest::Approx(1.5));
  CHECK(d.dim == 2);
}

TEST_CASE("product-space embedding yields a skew forward part with L = ||K||") {
  SplitMix64 rng(19);
  Matrix K = rng.matrix(3, 4, -1.0, 1.0);
  SplitInclusion P =
      product_space_embed(l1_norm(4, 0.5), moreau_conjugate(l1_norm(3, 1.0)), K);
  CHECK(P.dim() == 7);
  REQUIRE(P.constants.L.has_value());
  CHECK(*P.constants.L ==
        doctest::Approx(testing_oracles::spectral_norm_svd(K)).epsilon(1e-9));
  for (int t = 0; t < 100; ++t) {
    Vector w = rng.vector(7, -3.0, 3.0);
    CHECK(std::abs(w.dot(P.B(w))) <= 1e-12 * w.squaredNorm());
  }
}

TEST_CASE("saddle operator rejects a non-monotone coupling") {
  // Phi(x, y) = -(1/2)||x||^2 is concave in x, so the operator is not
  // monotone and the construction-time spot check must fire.
  CHECK_THROWS_AS(
      saddle_operator(
          [](const Vector& x, const Vector&) -> Vector { return -x; },
          [](const Vector&, const Vector& y) -> Vector { return Vector::Zero(y.size()); },
          zero_operator(2), zero_operator(2)),
      parameter_error);
}

TEST_CASE("estimate_lipschitz lower-bounds the true constant of a linear map") {
  SplitMix64 rng(23);
  Matrix M = rng.matrix(4, 4, -1.0, 1.0);
  ForwardOracle B;
  B.dim = 4;
  B.eval = [M](const Vector& x) -> Vector { return M * x; };
  double truth = testing_oracles::spectral_norm_svd(M);
  double sampled = estimate_lipschitz(B, 1, 200);
  CHECK(sampled <= truth + 1e-9);
  CHECK(sampled >= 0.5 * truth);  // random directions get close on R^4
  CHECK(estimate_lipschitz(B, 1, 200) == sampled);  // deterministic
  CHECK_THROWS_AS(estimate_lipschitz(B, 1, 0), parameter_error);
}

TEST_CASE("oracle boundary validation") {
  ResolventOracle box = box_indicator(2, -1.0, 1.0);
  CHECK_THROWS_AS(box(0.0, vec({0.0, 0.0})), parameter_error);
  CHECK_THROWS_AS(box(-1.0, vec({0.0, 0.0})), parameter_error);
  CHECK_THROWS_AS(box(1.0, vec({0.0})), shape_error);
  CHECK_THROWS_AS(box(1.0, vec({std::nan(""), 0.0})), parameter_error);

  ForwardOracle B;
  B.dim = 1;
  B.eval = [](const Vector& x) -> Vector { return x; };
  CHECK_THROWS_AS(B(vec({1.0, 2.0})), shape_error);
}

TEST_CASE("SplitInclusion validation checks the reference solution") {
  SplitInclusion P;
  P.A = zero_operator(1);
  P.B.dim = 1;
  P.B.eval = [](const Vector& x) -> Vector { return x; };
  P.constants.L = 1.0;
  P.reference_solution = vec({1.0});  // true zero is at the origin
  CHECK_THROWS_AS(P.validate(1e-8), construction_error);
  P.reference_solution = vec({0.0});
  CHECK_NOTHROW(P.validate(1e-8));
}

TEST_CASE("make_prox factory builds gallery entries and rejects unknown names") {
  ResolventOracle p = make_prox("l1_norm", {{"dim", 2}, {"weight", 2.0}});
  CHECK(p(1.0, vec({3.0, -0.5}))[0] == doctest::Approx(1.0));
  ResolventOracle q = make_prox("quadratic", {{"dim", 1}, {"scale", 3.0}});
  CHECK(q(1.0, vec({4.0}))[0] == doctest::Approx(1.0));
  CHECK_THROWS_AS(make_prox("does_not_exist", {}), config_error);
}
