#pragma once

#include <string>

#include <json.hpp>

#include "monosplit/operators.hpp"

// Gallery of closed-form resolvents. Closed forms:
//   zero                 J(x) = x
//   l1_norm (weight w)   soft threshold, J(x)_i = sign(x_i) max(|x_i| - lambda w, 0)
//   box_indicator        projection onto [lo, hi]^n, independent of lambda
//   halfspace_indicator  projection onto {x : <a, x> <= b}
//   quadratic            A(x) = Qx + q, J(x) solves (I + lambda Q) u = x - lambda q
//   scaled_identity_shift  A + mI via the resolvent shift identity
//   moreau_conjugate     J_{lambda df*}(x) = x - lambda J_{(1/lambda) df}(x / lambda)
// The Moreau entry is the standard way to obtain the resolvent of B^{-1} = df*
// required by the product-space embedding when B is a subdifferential.

namespace monosplit {

ResolventOracle zero_operator(Eigen::Index dim);
ResolventOracle l1_norm(Eigen::Index dim, double weight);
ResolventOracle box_indicator(Eigen::Index dim, double lo, double hi);
ResolventOracle halfspace_indicator(Vector a, double b);
ResolventOracle quadratic(Matrix Q, Vector q);
ResolventOracle scaled_identity_shift(ResolventOracle inner, double m);
ResolventOracle moreau_conjugate(ResolventOracle prox_f);

/// Gallery factory by name. Unknown names raise config_error, invalid
/// parameters raise parameter_error.
ResolventOracle make_prox(const std::string& name, const nlohmann::json& params);

}  // namespace monosplit
