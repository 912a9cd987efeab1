#include "monosplit/operators.hpp"

#include <cmath>

#include "monosplit/rng.hpp"
#include "monosplit/solver.hpp"

namespace monosplit {

void require_finite(const Vector& x, const char* where) {
  if (!x.allFinite()) {
    throw parameter_error(std::string(where) + ": nonfinite value at oracle boundary");
  }
}

Vector ResolventOracle::operator()(double lambda, const Vector& x) const {
  if (!(lambda > 0.0)) {
    throw parameter_error("resolvent '" + label + "': lambda must be positive");
  }
  if (x.size() != dim) {
    throw shape_error("resolvent '" + label + "': expected dim " +
                      std::to_string(dim) + ", got " + std::to_string(x.size()));
  }
  require_finite(x, "resolvent input");
  Vector out = eval(lambda, x);
  require_finite(out, "resolvent output");
  return out;
}

Vector ForwardOracle::operator()(const Vector& x) const {
  if (x.size() != dim) {
    throw shape_error("forward '" + label + "': expected dim " +
                      std::to_string(dim) + ", got " + std::to_string(x.size()));
  }
  require_finite(x, "forward input");
  Vector out = eval(x);
  require_finite(out, "forward output");
  return out;
}

void SplitInclusion::validate(double reference_tol) const {
  if (B.dim != A.dim) throw shape_error("SplitInclusion: A/B dimension mismatch");
  if (C && C->dim != A.dim) throw shape_error("SplitInclusion: A/C dimension mismatch");
  if (reference_solution) {
    if (reference_solution->size() != A.dim) {
      throw shape_error("SplitInclusion: reference solution dimension mismatch");
    }
    double lam = constants.L && *constants.L > 0 ? std::min(1.0, 1.0 / (2.0 * *constants.L)) : 1.0;
    double r = natural_residual(*this, lam, *reference_solution);
    if (!(r <= reference_tol)) {
      throw construction_error("SplitInclusion: reference solution residual " +
                               std::to_string(r) + " exceeds tolerance");
    }
  }
}

Vector resolvent_eval(const ResolventOracle& A, double lambda, const Vector& x) {
  return A(lambda, x);
}

Vector shifted_resolvent(const ResolventOracle& A, double m, double lambda,
                         const Vector& x) {
  if (!(m > 0.0)) throw parameter_error("shifted_resolvent: m must be positive");
  if (!(lambda > 0.0)) throw parameter_error("shifted_resolvent: lambda must be positive");
  double scale = 1.0 + lambda * m;
  return A(lambda / scale, x / scale);
}

ResolventOracle shifted_oracle(ResolventOracle A, double m) {
  if (!(m > 0.0)) throw parameter_error("shifted_oracle: m must be positive");
  ResolventOracle out;
  out.dim = A.dim;
  out.label = A.label + "+" + std::to_string(m) + "I";
  out.eval = [inner = std::move(A), m](double lambda, const Vector& x) {
    return shifted_resolvent(inner, m, lambda, x);
  };
  return out;
}

ResolventOracle block_diag(ResolventOracle A1, ResolventOracle A2) {
  ResolventOracle out;
  out.dim = A1.dim + A2.dim;
  out.label = "diag(" + A1.label + "," + A2.label + ")";
  out.is_projection = A1.is_projection && A2.is_projection;
  out.is_identity = A1.is_identity && A2.is_identity;
  Eigen::Index n1 = A1.dim;
  Eigen::Index n2 = A2.dim;
  out.eval = [a1 = std::move(A1), a2 = std::move(A2), n1, n2](double lambda,
                                                             const Vector& x) {
    Vector out(n1 + n2);
    out.head(n1) = a1(lambda, x.head(n1));
    out.tail(n2) = a2(lambda, x.tail(n2));
    return out;
  };
  return out;
}

double operator_norm(const Matrix& K) {
  if (K.size() == 0) return 0.0;
  SplitMix64 rng(0x6d6f6e6f73706c74ull);  // fixed start vector seed
  Vector v = rng.vector(K.cols(), -1.0, 1.0);
  double nv = v.norm();
  if (nv == 0.0) v.setOnes();
  v.normalize();
  double est = 0.0;
  for (int it = 0; it < 10000; ++it) {
    Vector w = K.transpose() * (K * v);
    double nw = w.norm();
    if (nw == 0.0) return 0.0;
    double next = std::sqrt(nw);
    v = w / nw;
    if (std::abs(next - est) <= 1e-10 * std::max(1.0, next)) return next;
    est = next;
  }
  return est;
}

SplitInclusion product_space_embed(ResolventOracle A, ResolventOracle Binv,
                                   const Matrix& K) {
  if (K.rows() != Binv.dim || K.cols() != A.dim) {
    throw shape_error("product_space_embed: K must be dim(H2) x dim(H1)");
  }
  Eigen::Index n1 = A.dim;
  Eigen::Index n2 = Binv.dim;

  SplitInclusion P;
  P.A = block_diag(std::move(A), std::move(Binv));
  double L = operator_norm(K);
  P.B.dim = n1 + n2;
  P.B.label = "skew(K)";
  P.B.lipschitz = L;
  P.B.eval = [K, n1, n2](const Vector& w) {
    Vector out(n1 + n2);
    out.head(n1) = K.transpose() * w.tail(n2);
    out.tail(n2) = -(K * w.head(n1));
    return out;
  };
  P.constants.L = L;
  return P;
}

SplitInclusion saddle_operator(
    std::function<Vector(const Vector& x, const Vector& y)> grad_x,
    std::function<Vector(const Vector& x, const Vector& y)> grad_y,
    ResolventOracle prox_g, ResolventOracle prox_f) {
  Eigen::Index n1 = prox_g.dim;
  Eigen::Index n2 = prox_f.dim;

  SplitInclusion P;
  P.A = block_diag(std::move(prox_g), std::move(prox_f));
  P.B.dim = n1 + n2;
  P.B.label = "saddle(Phi)";
  P.B.eval = [gx = std::move(grad_x), gy = std::move(grad_y), n1, n2](const Vector& w) {
    Vector x = w.head(n1);
    Vector y = w.tail(n2);
    Vector out(n1 + n2);
    out.head(n1) = gx(x, y);
    out.tail(n2) = -gy(x, y);
    return out;
  };

  // Spot-check monotonicity (convex-concavity of Phi is the caller's
  // responsibility; a gross violation is caught here).
  {
    SplitMix64 rng(0x736164646c65ull);
    for (int t = 0; t < 16; ++t) {
      Vector u = rng.vector(n1 + n2, -1.0, 1.0);
      Vector v = rng.vector(n1 + n2, -1.0, 1.0);
      double inner = (u - v).dot(P.B(u) - P.B(v));
      if (inner < -1e-6 * (u - v).squaredNorm()) {
        throw parameter_error("saddle_operator: sampled monotonicity violation; Phi does not look convex-concave");
      }
    }
  }
  return P;
}

double estimate_lipschitz(const ForwardOracle& B, std::uint64_t seed, int trials) {
  if (trials < 1) throw parameter_error("estimate_lipschitz: trials must be >= 1");
  SplitMix64 rng(seed);
  double best = 0.0;
  bool any = false;
  for (int t = 0; t < trials; ++t) {
    Vector x = rng.vector(B.dim, -3.0, 3.0);
    Vector y = rng.vector(B.dim, -3.0, 3.0);
    double d = (x - y).norm();
    if (d == 0.0) continue;  // degenerate pair
    any = true;
    best = std::max(best, (B(x) - B(y)).norm() / d);
  }
  if (!any) throw sampling_error("estimate_lipschitz: all sampled pairs degenerate");
  return best;
}

}  // namespace monosplit
