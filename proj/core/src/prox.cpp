#include "monosplit/prox.hpp"

#include <algorithm>
#include <cmath>

namespace monosplit {

ResolventOracle zero_operator(Eigen::Index dim) {
  ResolventOracle o;
  o.dim = dim;
  o.label = "zero";
  o.is_projection = true;
  o.is_identity = true;
  o.eval = [](double, const Vector& x) { return x; };
  return o;
}

ResolventOracle l1_norm(Eigen::Index dim, double weight) {
  if (!(weight >= 0.0)) throw parameter_error("l1_norm: weight must be nonnegative");
  ResolventOracle o;
  o.dim = dim;
  o.label = "l1_norm";
  o.eval = [weight](double lambda, const Vector& x) {
    double tau = lambda * weight;
    Vector out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      out[i] = std::copysign(std::max(std::abs(x[i]) - tau, 0.0), x[i]);
    }
    return out;
  };
  return o;
}

ResolventOracle box_indicator(Eigen::Index dim, double lo, double hi) {
  if (!(lo <= hi)) throw parameter_error("box_indicator: lower bound exceeds upper bound");
  ResolventOracle o;
  o.dim = dim;
  o.label = "box_indicator";
  o.is_projection = true;
  o.eval = [lo, hi](double, const Vector& x) {
    return x.cwiseMax(lo).cwiseMin(hi);
  };
  return o;
}

ResolventOracle halfspace_indicator(Vector a, double b) {
  double nrm2 = a.squaredNorm();
  if (!(nrm2 > 0.0)) throw parameter_error("halfspace_indicator: normal vector must be nonzero");
  ResolventOracle o;
  o.dim = a.size();
  o.label = "halfspace_indicator";
  o.is_projection = true;
  o.eval = [a = std::move(a), b, nrm2](double, const Vector& x) -> Vector {
    double viol = a.dot(x) - b;
    if (viol <= 0.0) return x;
    return x - (viol / nrm2) * a;
  };
  return o;
}

ResolventOracle quadratic(Matrix Q, Vector q) {
  if (Q.rows() != Q.cols()) throw parameter_error("quadratic: Q must be square");
  if (q.size() != Q.rows()) throw shape_error("quadratic: q dimension mismatch");
  ResolventOracle o;
  o.dim = Q.rows();
  o.label = "quadratic";
  o.eval = [Q = std::move(Q), q = std::move(q)](double lambda, const Vector& x) -> Vector {
    Matrix M = Matrix::Identity(Q.rows(), Q.cols()) + lambda * Q;
    return M.partialPivLu().solve(x - lambda * q);
  };
  return o;
}

ResolventOracle scaled_identity_shift(ResolventOracle inner, double m) {
  ResolventOracle o = shifted_oracle(std::move(inner), m);
  o.label = "scaled_identity_shift";
  return o;
}

ResolventOracle moreau_conjugate(ResolventOracle prox_f) {
  ResolventOracle o;
  o.dim = prox_f.dim;
  o.label = "conjugate(" + prox_f.label + ")";
  o.eval = [inner = std::move(prox_f)](double lambda, const Vector& x) -> Vector {
    return x - lambda * inner(1.0 / lambda, x / lambda);
  };
  return o;
}

ResolventOracle make_prox(const std::string& name, const nlohmann::json& params_in) {
  const nlohmann::json params =
      params_in.is_null() ? nlohmann::json::object() : params_in;
  Eigen::Index dim = params.value("dim", 1);
  if (dim < 1) throw parameter_error("make_prox: dim must be positive");
  if (name == "zero") return zero_operator(dim);
  if (name == "l1_norm") return l1_norm(dim, params.value("weight", 1.0));
  if (name == "box_indicator") {
    return box_indicator(dim, params.value("lo", -1.0), params.value("hi", 1.0));
  }
  if (name == "halfspace_indicator") {
    std::vector<double> av = params.at("a").get<std::vector<double>>();
    Vector a = Eigen::Map<Vector>(av.data(), static_cast<Eigen::Index>(av.size()));
    return halfspace_indicator(std::move(a), params.value("b", 0.0));
  }
  if (name == "quadratic") {
    if (params.contains("Q")) {
      std::vector<double> qv = params.at("Q").get<std::vector<double>>();
      if (static_cast<Eigen::Index>(qv.size()) != dim * dim) {
        throw parameter_error("make_prox: quadratic Q must have dim*dim entries (row-major)");
      }
      Matrix Q(dim, dim);
      for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) Q(r, c) = qv[r * dim + c];
      return quadratic(std::move(Q), Vector::Zero(dim));
    }
    double scale = params.value("scale", 1.0);
    return quadratic(scale * Matrix::Identity(dim, dim), Vector::Zero(dim));
  }
  if (name == "scaled_identity_shift") {
    double m = params.value("m", 1.0);
    if (params.contains("inner")) {
      const auto& inner = params.at("inner");
      return scaled_identity_shift(
          make_prox(inner.at("name").get<std::string>(), inner.value("params", nlohmann::json::object())), m);
    }
    return scaled_identity_shift(zero_operator(dim), m);
  }
  throw config_error("make_prox: unknown gallery entry '" + name + "'");
}

}  // namespace monosplit
