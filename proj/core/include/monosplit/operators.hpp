#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "monosplit/common.hpp"

namespace monosplit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

void require_finite(const Vector& x, const char* where);

/// Resolvent oracle for a maximally monotone operator A: x -> J_{lambda A}(x).
/// eval must be single-valued and defined for every lambda > 0.
struct ResolventOracle {
  Eigen::Index dim = 0;
  std::function<Vector(double lambda, const Vector& x)> eval;
  std::string label;
  // Projection resolvents (normal cones) are independent of lambda; some
  // solvers require this structurally.
  bool is_projection = false;
  // Resolvent of the zero operator, i.e. the identity map.
  bool is_identity = false;

  // Validated evaluation: checks lambda, dimensions and output finiteness.
  Vector operator()(double lambda, const Vector& x) const;
};

/// Single-valued monotone operator B: x -> B(x). The regularity fields are
/// advisory metadata: solvers trust them for stepsize bounds, tests verify
/// them on samples.
struct ForwardOracle {
  Eigen::Index dim = 0;
  std::function<Vector(const Vector& x)> eval;
  std::optional<double> lipschitz;
  std::optional<double> cocoercivity;
  std::optional<double> strong_monotonicity;
  std::string label;

  Vector operator()(const Vector& x) const;
};

/// Monotone inclusion 0 in (A+B)(x), optionally 0 in (A+B+C)(x) with C
/// cocoercive.
struct SplitInclusion {
  ResolventOracle A;
  ForwardOracle B;
  std::optional<ForwardOracle> C;
  std::optional<Vector> reference_solution;
  struct Constants {
    std::optional<double> L;   // Lipschitz constant of B (or B+C context)
    std::optional<double> L1;  // Lipschitz constant of B in the 3-operator case
    std::optional<double> L2;  // inverse cocoercivity constant of C
    std::optional<double> m;   // strong monotonicity of A
  } constants;

  Eigen::Index dim() const { return A.dim; }
  // Checks dimension consistency and, when a reference solution is present,
  // that the natural residual at it is below tol.
  void validate(double reference_tol = 1e-8) const;
};

Vector resolvent_eval(const ResolventOracle& A, double lambda, const Vector& x);

/// J_{lambda (A + mI)}(x) via the shift identity: evaluate A's resolvent at
/// scale lambda/(1+lambda m) and input x/(1+lambda m).
Vector shifted_resolvent(const ResolventOracle& A, double m, double lambda,
                         const Vector& x);

/// Resolvent oracle of A + mI built from the oracle of A.
ResolventOracle shifted_oracle(ResolventOracle A, double m);

/// Blockwise resolvent of diag(A1, A2) on the product space.
ResolventOracle block_diag(ResolventOracle A1, ResolventOracle A2);

/// Operator norm ||K||_2 by power iteration on K^T K. Seeded start vector,
/// relative tolerance 1e-10, at most 10^4 iterations.
double operator_norm(const Matrix& K);

/// Product-space embedding of 0 in (A + K^* B K)(x): set-valued part
/// diag(A, B^{-1}) applied blockwise, forward part the skew map
/// (x, y) -> (K^T y, -K x). Binv must be the resolvent oracle of B^{-1}
/// (for B = df, use moreau_conjugate from the prox gallery).
SplitInclusion product_space_embed(ResolventOracle A, ResolventOracle Binv,
                                   const Matrix& K);

/// Saddle-point inclusion for min_x max_y g(x) + Phi(x,y) - f(y):
/// A = (dg, df) via the supplied proxes, B(x,y) = (grad_x Phi, -grad_y Phi).
/// Monotonicity of B is spot-checked on random samples.
SplitInclusion saddle_operator(
    std::function<Vector(const Vector& x, const Vector& y)> grad_x,
    std::function<Vector(const Vector& x, const Vector& y)> grad_y,
    ResolventOracle prox_g, ResolventOracle prox_f);

/// Sampled lower bound on the Lipschitz constant of B: max over random pairs
/// of ||B(x)-B(y)|| / ||x-y||. Deterministic given the seed.
double estimate_lipschitz(const ForwardOracle& B, std::uint64_t seed, int trials);

}  // namespace monosplit
