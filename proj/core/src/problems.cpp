#include "monosplit/problems.hpp"

#include <cmath>

#include "monosplit/prox.hpp"
#include "monosplit/rng.hpp"
#include "monosplit/solver.hpp"

namespace monosplit {

namespace {

constexpr double kBoxLo = -10.0;
constexpr double kBoxHi = 10.0;

nlohmann::json matrix_to_json(const Matrix& M) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(M.size()));
  for (Eigen::Index r = 0; r < M.rows(); ++r)
    for (Eigen::Index c = 0; c < M.cols(); ++c) flat.push_back(M(r, c));
  return nlohmann::json(flat);
}

nlohmann::json vector_to_json(const Vector& v) {
  return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

ForwardOracle affine_forward(Matrix M, Vector q, double L, std::string label) {
  ForwardOracle B;
  B.dim = M.rows();
  B.label = std::move(label);
  B.lipschitz = L;
  B.eval = [M = std::move(M), q = std::move(q)](const Vector& x) -> Vector {
    return M * x + q;
  };
  return B;
}

void certify_reference(ProblemInstance& p, double tol = 1e-10) {
  p.inclusion.validate(tol);
}

}  // namespace

nlohmann::json to_json(const ProblemInstance& p) {
  nlohmann::json j;
  j["name"] = p.name;
  j["dims"] = p.dims;
  if (p.generator_seed) j["seed"] = *p.generator_seed;
  j["notes"] = p.notes;
  nlohmann::json c;
  if (p.inclusion.constants.L) c["L"] = *p.inclusion.constants.L;
  if (p.inclusion.constants.L1) c["L1"] = *p.inclusion.constants.L1;
  if (p.inclusion.constants.L2) c["L2"] = *p.inclusion.constants.L2;
  if (p.inclusion.constants.m) c["m"] = *p.inclusion.constants.m;
  j["constants"] = c;
  j["data"] = p.data;
  if (p.inclusion.reference_solution) {
    j["reference_solution"] = vector_to_json(*p.inclusion.reference_solution);
  }
  return j;
}

ProblemInstance make_rotation(int n) {
  if (n < 1) throw parameter_error("make_rotation: n must be >= 1");
  Eigen::Index half = n;
  Eigen::Index dim = 2 * half;

  ProblemInstance p;
  p.name = "rotation";
  p.dims = {{"n", n}, {"dim", dim}};
  p.notes = "origin is the unique zero; B is an isometry with <z,B(z)> = 0";

  p.inclusion.A = zero_operator(dim);
  p.inclusion.B.dim = dim;
  p.inclusion.B.label = "rotation";
  p.inclusion.B.lipschitz = 1.0;
  p.inclusion.B.eval = [half, dim](const Vector& z) {
    Vector out(dim);
    out.head(half) = z.tail(half);
    out.tail(half) = -z.head(half);
    return out;
  };
  p.inclusion.constants.L = 1.0;
  p.inclusion.reference_solution = Vector::Zero(dim);

  // Two-part split with average equal to B: B1(z) = 2(z2, 0), B2(z) = 2(0, -z1).
  ForwardOracle B1;
  B1.dim = dim;
  B1.label = "rotation_part_1";
  B1.lipschitz = 2.0;
  B1.eval = [half, dim](const Vector& z) {
    Vector out = Vector::Zero(dim);
    out.head(half) = 2.0 * z.tail(half);
    return out;
  };
  ForwardOracle B2;
  B2.dim = dim;
  B2.label = "rotation_part_2";
  B2.lipschitz = 2.0;
  B2.eval = [half, dim](const Vector& z) {
    Vector out = Vector::Zero(dim);
    out.tail(half) = -2.0 * z.head(half);
    return out;
  };
  p.parts.push_back(std::move(B1));
  p.parts.push_back(std::move(B2));

  certify_reference(p);
  return p;
}

ProblemInstance make_affine_vi(std::uint64_t seed, int n, double skew_weight) {
  if (n < 1) throw parameter_error("make_affine_vi: n must be >= 1");
  if (!(skew_weight >= 0.0 && skew_weight <= 1.0)) {
    throw parameter_error("make_affine_vi: skew_weight must be in [0,1]");
  }
  SplitMix64 rng(seed);
  Matrix R = rng.matrix(n, n, -1.0, 1.0);
  Matrix P0 = rng.matrix(n, n, -1.0, 1.0);
  Vector q = rng.vector(n, -1.0, 1.0);
  Matrix S = R - R.transpose();
  Matrix M = skew_weight * S + (1.0 - skew_weight) * (P0.transpose() * P0);
  double L = operator_norm(M);

  ProblemInstance p;
  p.name = "affine_vi";
  p.dims = {{"n", n}, {"dim", n}};
  p.generator_seed = seed;
  p.notes = "monotone affine map over the box [-10,10]^n; M = w*S + (1-w)*P'P";
  p.data = {{"M", matrix_to_json(M)},
            {"q", vector_to_json(q)},
            {"skew_weight", skew_weight}};

  p.inclusion.A = box_indicator(n, kBoxLo, kBoxHi);
  p.inclusion.B = affine_forward(M, q, L, "affine");
  p.inclusion.constants.L = L;

  Vector ref = solve_extragradient(
      p.inclusion.A, [&](const Vector& x) -> Vector { return M * x + q; }, L,
      Vector::Zero(n), 1e-12);
  certify_box_normal_cone(ref, -(M * ref + q), kBoxLo, kBoxHi, 1e-10);
  p.inclusion.reference_solution = std::move(ref);
  certify_reference(p);
  return p;
}

ProblemInstance make_strongly_monotone(std::uint64_t seed, int n, double m, double L) {
  if (n < 1) throw parameter_error("make_strongly_monotone: n must be >= 1");
  if (!(m > 0.0 && m <= L)) {
    throw parameter_error("make_strongly_monotone: need 0 < m <= L");
  }
  SplitMix64 rng(seed);
  Matrix R = rng.matrix(n, n, -1.0, 1.0);
  Matrix P0 = rng.matrix(n, n, -1.0, 1.0);
  Vector q = rng.vector(n, -1.0, 1.0);
  Matrix M0 = (R - R.transpose()) + P0.transpose() * P0;
  double n0 = operator_norm(M0);
  if (!(n0 > 0.0)) throw construction_error("make_strongly_monotone: degenerate draw");
  Matrix M = (L / n0) * M0;

  ProblemInstance p;
  p.name = "strongly_monotone";
  p.dims = {{"n", n}, {"dim", n}};
  p.generator_seed = seed;
  p.notes = "A = m*I + box normal cone (m-strongly monotone); B monotone affine with ||M|| = L";
  p.data = {{"M", matrix_to_json(M)}, {"q", vector_to_json(q)}, {"m", m}};

  p.inclusion.A = scaled_identity_shift(box_indicator(n, kBoxLo, kBoxHi), m);
  p.inclusion.B = affine_forward(M, q, L, "affine");
  p.inclusion.constants.L = L;
  p.inclusion.constants.m = m;

  Vector ref = solve_extragradient(
      p.inclusion.A, [&](const Vector& x) -> Vector { return M * x + q; }, L + m,
      Vector::Zero(n), 1e-12);
  // KKT for A = m*I + N_box: -B(x*) - m x* must lie in the normal cone.
  certify_box_normal_cone(ref, -(M * ref + q) - m * ref, kBoxLo, kBoxHi, 1e-10);
  p.inclusion.reference_solution = std::move(ref);
  certify_reference(p);
  return p;
}

ProblemInstance make_composite_min(std::uint64_t seed, int rows, int cols, double tau) {
  if (rows < 1 || cols < 1) throw parameter_error("make_composite_min: dims must be >= 1");
  if (!(tau > 0.0)) throw parameter_error("make_composite_min: tau must be positive");
  SplitMix64 rng(seed);
  Matrix P0 = rng.matrix(rows, cols, -1.0, 1.0);
  Vector b = rng.vector(rows, -1.0, 1.0);
  double nP = operator_norm(P0);
  double L = nP * nP;

  ProblemInstance p;
  p.name = "composite_min";
  p.dims = {{"rows", rows}, {"cols", cols}, {"dim", cols}};
  p.generator_seed = seed;
  p.notes = "tau*||x||_1 + (1/2)||Px - b||^2; gradient part is (1/L)-cocoercive with L = ||P||^2";
  p.data = {{"P", matrix_to_json(P0)}, {"b", vector_to_json(b)}, {"tau", tau}};

  p.inclusion.A = l1_norm(cols, tau);
  auto grad = [P0, b](const Vector& x) -> Vector {
    return P0.transpose() * (P0 * x - b);
  };
  p.inclusion.B.dim = cols;
  p.inclusion.B.label = "least_squares_gradient";
  p.inclusion.B.lipschitz = L;
  p.inclusion.B.cocoercivity = 1.0 / L;
  p.inclusion.B.eval = grad;
  p.inclusion.constants.L = L;

  p.inclusion.reference_solution =
      solve_prox_gradient(p.inclusion.A, grad, 1.0 / L, Vector::Zero(cols), 1e-12);
  certify_reference(p);
  return p;
}

ProblemInstance make_three_operator(std::uint64_t seed, int n, double L1, double L2) {
  if (n < 2 || n % 2 != 0) throw parameter_error("make_three_operator: n must be even and >= 2");
  if (!(L1 > 0.0 && L2 > 0.0)) throw parameter_error("make_three_operator: constants must be positive");
  // Wider admissible range than treating B+C as one Lipschitz map.
  if (!(2.0 / (4.0 * L1 + L2) > 1.0 / (2.0 * (L1 + L2)))) {
    throw construction_error("make_three_operator: stepsize range identity failed");
  }
  SplitMix64 rng(seed);
  Eigen::Index half = n / 2;
  Matrix P0 = rng.matrix(n, n, -1.0, 1.0);
  Vector center = rng.vector(n, -5.0, 5.0);
  Matrix H0 = P0.transpose() * P0;
  double nH = operator_norm(H0);
  if (!(nH > 0.0)) throw construction_error("make_three_operator: degenerate draw");
  Matrix H = (L2 / nH) * H0;

  ProblemInstance p;
  p.name = "three_operator";
  p.dims = {{"n", n}, {"dim", n}};
  p.generator_seed = seed;
  p.notes = "box normal cone + scaled skew rotation (L1) + convex quadratic gradient (||H|| = L2)";
  p.data = {{"H", matrix_to_json(H)}, {"center", vector_to_json(center)},
            {"L1", L1}, {"L2", L2}};

  p.inclusion.A = box_indicator(n, kBoxLo, kBoxHi);
  p.inclusion.B.dim = n;
  p.inclusion.B.label = "scaled_rotation";
  p.inclusion.B.lipschitz = L1;
  p.inclusion.B.eval = [half, n, L1](const Vector& z) {
    Vector out(n);
    out.head(half) = L1 * z.tail(half);
    out.tail(half) = -L1 * z.head(half);
    return out;
  };
  ForwardOracle C;
  C.dim = n;
  C.label = "quadratic_gradient";
  C.lipschitz = L2;
  C.cocoercivity = 1.0 / L2;
  C.eval = [H, center](const Vector& x) -> Vector { return H * (x - center); };
  p.inclusion.C = C;
  p.inclusion.constants.L = L1;
  p.inclusion.constants.L1 = L1;
  p.inclusion.constants.L2 = L2;

  Vector ref = solve_extragradient(
      p.inclusion.A,
      [&](const Vector& x) -> Vector {
        Vector out(n);
        out.head(half) = L1 * x.tail(half);
        out.tail(half) = -L1 * x.head(half);
        return out + H * (x - center);
      },
      L1 + L2, Vector::Zero(n), 1e-12);
  Vector w = -(C.eval(ref) + p.inclusion.B.eval(ref));
  certify_box_normal_cone(ref, w, kBoxLo, kBoxHi, 1e-10);
  p.inclusion.reference_solution = std::move(ref);
  certify_reference(p);
  return p;
}

ProblemInstance make_saddle_bilinear(std::uint64_t seed, int n1, int n2) {
  if (n1 < 1 || n2 < 1) throw parameter_error("make_saddle_bilinear: dims must be >= 1");
  SplitMix64 rng(seed);
  Matrix K = rng.matrix(n2, n1, -1.0, 1.0);
  double L = operator_norm(K);

  ProblemInstance p;
  p.name = "saddle_bilinear";
  p.dims = {{"n1", n1}, {"n2", n2}, {"dim", n1 + n2}};
  p.generator_seed = seed;
  p.notes = "min-max (1/2)||x||^2 + <Kx,y> - (1/2)||y||^2; forward part is skew with L = ||K||";
  p.data = {{"K", matrix_to_json(K)}};

  p.inclusion = saddle_operator(
      [K](const Vector& x, const Vector& y) -> Vector { return K.transpose() * y; },
      [K](const Vector& x, const Vector& y) -> Vector { return K * x; },
      quadratic(Matrix::Identity(n1, n1), Vector::Zero(n1)),
      quadratic(Matrix::Identity(n2, n2), Vector::Zero(n2)));
  p.inclusion.B.lipschitz = L;
  p.inclusion.constants.L = L;

  Vector ref = solve_extragradient(
      p.inclusion.A,
      [&](const Vector& w) -> Vector {
        Vector out(n1 + n2);
        out.head(n1) = K.transpose() * w.tail(n2);
        out.tail(n2) = -(K * w.head(n1));
        return out;
      },
      std::max(L, 1e-6), Vector::Ones(n1 + n2), 1e-12);
  p.inclusion.reference_solution = std::move(ref);
  certify_reference(p);
  return p;
}

Vector solve_extragradient(const ResolventOracle& A,
                           const std::function<Vector(const Vector&)>& F,
                           double lipschitz, Vector x0, double tol,
                           long max_iters) {
  if (!(lipschitz > 0.0)) throw parameter_error("solve_extragradient: lipschitz must be positive");
  double lam = 0.7 / lipschitz;
  Vector x = std::move(x0);
  for (long k = 0; k < max_iters; ++k) {
    Vector y = A(lam, x - lam * F(x));
    if ((x - y).norm() <= tol) return x;
    x = A(lam, x - lam * F(y));
  }
  throw construction_error("solve_extragradient: reference oracle did not converge");
}

Vector solve_prox_gradient(const ResolventOracle& A,
                           const std::function<Vector(const Vector&)>& F,
                           double lam, Vector x0, double tol, long max_iters) {
  if (!(lam > 0.0)) throw parameter_error("solve_prox_gradient: lam must be positive");
  Vector x = std::move(x0);
  for (long k = 0; k < max_iters; ++k) {
    Vector xn = A(lam, x - lam * F(x));
    if ((x - xn).norm() <= tol) return xn;
    x = std::move(xn);
  }
  throw construction_error("solve_prox_gradient: reference oracle did not converge");
}

void certify_box_normal_cone(const Vector& x, const Vector& w, double lo,
                             double hi, double tol) {
  if (x.size() != w.size()) throw shape_error("certify_box_normal_cone: dimension mismatch");
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < lo - tol || x[i] > hi + tol) {
      throw construction_error("certify_box_normal_cone: point leaves the box at index " +
                               std::to_string(i));
    }
    bool at_lo = x[i] <= lo + tol;
    bool at_hi = x[i] >= hi - tol;
    bool ok = (at_lo && w[i] <= tol) || (at_hi && w[i] >= -tol) ||
              (!at_lo && !at_hi && std::abs(w[i]) <= tol);
    if (!ok) {
      throw construction_error("certify_box_normal_cone: multiplier sign check failed at index " +
                               std::to_string(i));
    }
  }
}

}  // namespace monosplit
