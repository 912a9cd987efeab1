#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "monosplit/operators.hpp"

namespace monosplit {

/// Reproducible test problem: inclusion plus the data needed to rebuild it
/// bit-for-bit and to serialize it for cross-language reproduction.
struct ProblemInstance {
  SplitInclusion inclusion;
  std::string name;
  nlohmann::json dims;
  std::optional<std::uint64_t> generator_seed;
  std::string notes;  // closed-form facts used in tests
  nlohmann::json data;  // generator matrices (row-major), vectors, constants
  // Decomposition B = (1/n) sum B_i when the problem exposes one.
  std::vector<ForwardOracle> parts;
};

nlohmann::json to_json(const ProblemInstance& p);

/// Skew rotation on R^n x R^n: A = 0, B(z1, z2) = (z2, -z1). The origin is
/// the unique solution; B is 1-Lipschitz and an isometry. Exposes the
/// two-part split B = (1/2)(B_1 + B_2) with B_1(z) = 2(z2, 0),
/// B_2(z) = 2(0, -z1).
ProblemInstance make_rotation(int n);

/// Affine VI on the box [-10,10]^n: B(x) = Mx + q with
/// M = w S + (1-w) P^T P, S skew, P random. Reference solution certified by
/// an independent extragradient run plus a componentwise KKT check.
ProblemInstance make_affine_vi(std::uint64_t seed, int n, double skew_weight = 0.5);

/// A = mI + normal cone of the box (m-strongly monotone, resolvent via the
/// shift identity), B monotone affine with ||M||_2 = L.
ProblemInstance make_strongly_monotone(std::uint64_t seed, int n, double m, double L);

/// Composite minimization tau ||x||_1 + (1/2) ||Px - b||^2:
/// A = d(tau ||.||_1), B = P^T(Px - b), L = ||P||_2^2, B (1/L)-cocoercive.
/// Reference solution by a plain proximal-gradient run with lambda = 1/L.
ProblemInstance make_composite_min(std::uint64_t seed, int rows, int cols, double tau);

/// 0 in (A + B + C)(x) with A the box normal cone, B a skew rotation scaled
/// to L1, and C the gradient of a strongly convex quadratic with ||H|| = L2.
ProblemInstance make_three_operator(std::uint64_t seed, int n, double L1 = 1.5,
                                    double L2 = 3.0);

/// Bilinear saddle problem min_x max_y (1/2)||x||^2 + <Kx, y> - (1/2)||y||^2
/// built through the saddle operator; forward part is skew with L = ||K||_2.
ProblemInstance make_saddle_bilinear(std::uint64_t seed, int n1, int n2);

// ---- Reference-solution oracles -------------------------------------------
// These are deliberately different algorithms from everything in solver.hpp
// so reference solutions never validate a method against itself.

/// Extragradient (Korpelevich): y = J_{lam A}(x - lam F(x)),
/// x+ = J_{lam A}(x - lam F(y)); run until the fixed-point residual
/// ||x - J_{lam A}(x - lam F(x))|| drops below tol.
Vector solve_extragradient(const ResolventOracle& A,
                           const std::function<Vector(const Vector&)>& F,
                           double lipschitz, Vector x0, double tol,
                           long max_iters = 2000000);

/// Proximal gradient x+ = J_{lam A}(x - lam F(x)) for cocoercive F.
Vector solve_prox_gradient(const ResolventOracle& A,
                           const std::function<Vector(const Vector&)>& F,
                           double lam, Vector x0, double tol,
                           long max_iters = 2000000);

/// Componentwise check that w lies in the normal cone of [lo,hi]^n at x.
/// Throws construction_error on failure.
void certify_box_normal_cone(const Vector& x, const Vector& w, double lo,
                             double hi, double tol);

}  // namespace monosplit
