#include "monosplit/diagnostics.hpp"

#include <cmath>

namespace monosplit {

namespace {

void require_full_trace(const SolverRun& run, const SplitInclusion& P) {
  if (!P.reference_solution) {
    throw diagnostic_error("energy diagnostics require a reference solution");
  }
  if (run.iterates.size() != run.lambdas.size() + 1) {
    throw diagnostic_error("energy diagnostics require a full (stride 1) iterate trace");
  }
  if (run.x_minus1.size() != P.dim()) {
    throw diagnostic_error("energy diagnostics require the x_{-1} seed point");
  }
}

double lipschitz_of(const SplitInclusion& P) {
  if (P.constants.L) return *P.constants.L;
  if (P.B.lipschitz) return *P.B.lipschitz;
  return 0.0;
}

}  // namespace

EnergyReport energy_forb(const SolverRun& run, const SplitInclusion& P, double tol) {
  require_full_trace(run, P);
  const Vector& sol = *P.reference_solution;
  const std::size_t K = run.lambdas.size();

  double lam_min = run.lambda_minus1;
  double lam_max = run.lambda_minus1;
  for (double l : run.lambdas) {
    lam_min = std::min(lam_min, l);
    lam_max = std::max(lam_max, l);
  }
  double L = lipschitz_of(P);
  double eps = std::max(0.0, std::min(lam_min, (1.0 - 2.0 * L * lam_max) / 2.0));

  EnergyReport rep;
  rep.epsilon_used = eps;

  // phi_k needs B at x_{k-1} and x_k; evaluate each point once.
  std::vector<Vector> Bvals(K + 2);
  Bvals[0] = P.B(run.x_minus1);
  for (std::size_t k = 0; k <= K; ++k) Bvals[k + 1] = P.B(run.iterates[k]);

  auto phi_at = [&](std::size_t k) {
    const Vector& xk = run.iterates[k];
    const Vector& xkm = k == 0 ? run.x_minus1 : run.iterates[k - 1];
    double lam_prev = k == 0 ? run.lambda_minus1 : run.lambdas[k - 1];
    const Vector diffB = Bvals[k + 1] - Bvals[k];
    return (xk - sol).squaredNorm() + 2.0 * lam_prev * diffB.dot(sol - xk) +
           0.5 * (xk - xkm).squaredNorm();
  };

  std::vector<double> phi(K + 1);
  for (std::size_t k = 0; k <= K; ++k) {
    phi[k] = phi_at(k);
    if (phi[k] < 0.5 * (run.iterates[k] - sol).squaredNorm() - tol) {
      ++rep.lower_bound_violations;
    }
  }
  for (std::size_t k = 0; k < K; ++k) {
    double step2 = (run.iterates[k + 1] - run.iterates[k]).squaredNorm();
    EnergyReport::Entry e;
    e.phi = phi[k];
    e.slack = phi[k] - phi[k + 1] - eps * step2;
    e.decrease_ok = e.slack >= -tol;
    if (!e.decrease_ok) ++rep.violations;
    rep.per_iteration.push_back(e);
  }
  return rep;
}

EnergyReport energy_strong(const SolverRun& run, const SplitInclusion& P, double tol) {
  require_full_trace(run, P);
  if (!P.constants.m || !(*P.constants.m > 0.0)) {
    throw diagnostic_error("energy_strong: strong monotonicity constant m required");
  }
  double L = lipschitz_of(P);
  if (!(L > 0.0)) throw diagnostic_error("energy_strong: Lipschitz constant required");
  if (run.lambdas.empty()) throw diagnostic_error("energy_strong: empty run");
  const double lam = run.lambdas.front();
  for (double l : run.lambdas) {
    if (l != lam) throw diagnostic_error("energy_strong: constant stepsize required");
  }
  const double m = *P.constants.m;
  const double eps = std::min(0.5 - lam * L, 5.0 * m * lam);
  if (!(eps > 0.0)) throw diagnostic_error("energy_strong: stepsize out of the guaranteed range");
  const double alpha = std::min(1.0 + 4.0 * m * lam - 0.75 * eps, 1.0 + 0.5 * eps);

  const Vector& sol = *P.reference_solution;
  const std::size_t K = run.lambdas.size();

  std::vector<Vector> Bvals(K + 2);
  Bvals[0] = P.B(run.x_minus1);
  for (std::size_t k = 0; k <= K; ++k) Bvals[k + 1] = P.B(run.iterates[k]);

  auto a_at = [&](std::size_t k) {
    return 0.5 * (run.iterates[k] - sol).squaredNorm();
  };
  auto b_at = [&](std::size_t k) {
    const Vector& xk = run.iterates[k];
    const Vector& xkm = k == 0 ? run.x_minus1 : run.iterates[k - 1];
    const Vector diffB = Bvals[k + 1] - Bvals[k];
    return 0.5 * (xk - sol).squaredNorm() + 2.0 * lam * diffB.dot(sol - xk) +
           0.5 * (xk - xkm).squaredNorm();
  };

  EnergyReport rep;
  rep.epsilon_used = eps;
  rep.alpha_used = alpha;

  std::vector<double> ab(K + 1);
  for (std::size_t k = 0; k <= K; ++k) {
    double a = a_at(k);
    double b = b_at(k);
    ab[k] = a + b;
    if (b < -tol) ++rep.lower_bound_violations;
    // Geometric envelope a_k <= (a_0 + b_0) / alpha^k.
    if (k > 0 && a > ab[0] / std::pow(alpha, static_cast<double>(k)) + tol) {
      ++rep.violations;
    }
  }
  for (std::size_t k = 0; k < K; ++k) {
    EnergyReport::Entry e;
    e.phi = ab[k];
    e.slack = ab[k] + tol - alpha * ab[k + 1];
    e.decrease_ok = e.slack >= 0.0;
    if (!e.decrease_ok) ++rep.violations;
    rep.per_iteration.push_back(e);
  }
  return rep;
}

RateEstimate estimate_rate(const std::vector<double>& series, IterationWindow window) {
  if (window.lo < 0 || window.hi < window.lo ||
      window.hi >= static_cast<int>(series.size())) {
    throw diagnostic_error("estimate_rate: window outside the series range");
  }
  const int n = window.hi - window.lo + 1;
  if (n < 2) throw diagnostic_error("estimate_rate: window must span at least 2 points");

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::vector<double> logs(n);
  for (int i = 0; i < n; ++i) {
    double v = series[static_cast<std::size_t>(window.lo + i)];
    if (!(v > 0.0)) throw diagnostic_error("estimate_rate: nonpositive metric value in window");
    double x = static_cast<double>(window.lo + i);
    double y = std::log(v);
    logs[i] = y;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = n * sxx - sx * sx;
  double slope = (n * sxy - sx * sy) / denom;
  double intercept = (sy - slope * sx) / n;

  double ss_res = 0.0, ss_tot = 0.0;
  double mean = sy / n;
  for (int i = 0; i < n; ++i) {
    double x = static_cast<double>(window.lo + i);
    double fit = slope * x + intercept;
    ss_res += (logs[i] - fit) * (logs[i] - fit);
    ss_tot += (logs[i] - mean) * (logs[i] - mean);
  }

  RateEstimate est;
  est.rho = std::exp(slope);
  est.window = window;
  est.r_squared = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
  return est;
}

RateEstimate estimate_rate(const SolverRun& run, const SplitInclusion& P,
                           RateMetric metric, IterationWindow window) {
  std::vector<double> series;
  if (metric == RateMetric::dist_to_solution) {
    if (!P.reference_solution) {
      throw diagnostic_error("estimate_rate: reference solution required for this metric");
    }
    series.reserve(run.iterates.size());
    for (const Vector& x : run.iterates) {
      series.push_back((x - *P.reference_solution).norm());
    }
  } else {
    series = run.residuals;
  }
  RateEstimate est = estimate_rate(series, window);
  est.metric = metric;
  return est;
}

double fixed_point_form_check(const SplitInclusion& P, double lambda,
                              const Vector& x0, const Vector& x_minus1,
                              int iters) {
  if (x0.size() != P.dim() || x_minus1.size() != P.dim()) {
    throw shape_error("fixed_point_form_check: dimension mismatch");
  }
  if (!(lambda > 0.0)) throw parameter_error("fixed_point_form_check: lambda must be positive");
  if (iters < 1) throw parameter_error("fixed_point_form_check: iters must be >= 1");

  SolverConfig cfg;
  cfg.x0 = x0;
  cfg.x_minus1 = x_minus1;
  cfg.step = StepPlan::constant_step(lambda);
  cfg.max_iters = iters;
  cfg.residual_tol = 0.0;
  SolverRun run = run_forb(P, cfg);

  // (x, u) -> (J_{lambda A}(x - 2 lambda B(x) + lambda u), B(x)).
  Vector x = x0;
  Vector u = P.B(x_minus1);
  double dev = (x - run.iterates[0]).norm();
  std::size_t count = std::min<std::size_t>(run.iterates.size() - 1,
                                            static_cast<std::size_t>(iters));
  for (std::size_t k = 0; k < count; ++k) {
    Vector Bx = P.B(x);
    Vector xn = P.A(lambda, x - 2.0 * lambda * Bx + lambda * u);
    u = std::move(Bx);
    x = std::move(xn);
    dev = std::max(dev, (x - run.iterates[k + 1]).norm());
  }
  return dev;
}

double lprime(OperatorClass cls, double L, double rho) {
  if (!(L > 0.0)) throw parameter_error("lprime: L must be positive");
  if (!(rho >= 0.0)) throw parameter_error("lprime: rho must be nonnegative");
  if (cls == OperatorClass::lipschitz) return L + rho;
  return rho <= 0.5 * L ? L - rho : rho;
}

}  // namespace monosplit
