#include "monosplit/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "monosplit/rng.hpp"

namespace monosplit {

namespace {

constexpr double kDivergenceLimit = 1e12;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Stride-thinned iterate storage; the final point is always kept.
struct IterateTrace {
  SolverRun& run;
  int stride;
  int last_stored = -1;

  void store(int k, const Vector& x) {
    if (stride <= 1 || k % stride == 0) {
      run.iterates.push_back(x);
      last_stored = k;
    }
  }
  void finalize(int k, const Vector& x) {
    if (last_stored != k) run.iterates.push_back(x);
  }
};

bool out_of_range(const Vector& x) {
  return !x.allFinite() || x.norm() > kDivergenceLimit;
}

void check_problem_config(const SplitInclusion& P, const SolverConfig& cfg) {
  cfg.validate();
  if (cfg.x0.size() != P.dim()) throw shape_error("solver: x0 dimension mismatch");
  if (cfg.x_minus1 && cfg.x_minus1->size() != P.dim()) {
    throw shape_error("solver: x_minus1 dimension mismatch");
  }
}

void warn_if_above_bound(SolverRun& run, double lambda, double bound,
                         const char* what) {
  if (bound > 0.0 && std::isfinite(bound) && lambda >= bound) {
    run.warnings.push_back(std::string("stepsize ") + std::to_string(lambda) +
                           " >= " + what + " bound " + std::to_string(bound) +
                           "; outside the guaranteed range");
  }
}

OperatorClass class_of(const ForwardOracle& B) {
  return B.cocoercivity ? OperatorClass::cocoercive : OperatorClass::lipschitz;
}

}  // namespace

void StepPlan::validate() const {
  switch (kind) {
    case StepKind::constant:
      if (!(lambda > 0.0)) throw parameter_error("StepPlan: lambda must be positive");
      break;
    case StepKind::schedule:
      if (schedule.empty()) throw parameter_error("StepPlan: empty schedule");
      for (double l : schedule) {
        if (!(l > 0.0)) throw parameter_error("StepPlan: schedule entries must be positive");
      }
      break;
    case StepKind::linesearch:
      if (!(linesearch.delta > 0.0 && linesearch.delta < 1.0)) {
        throw parameter_error("StepPlan: linesearch delta must be in (0,1)");
      }
      if (!(linesearch.sigma > 0.0 && linesearch.sigma < 1.0)) {
        throw parameter_error("StepPlan: linesearch sigma must be in (0,1)");
      }
      if (!(linesearch.lambda0 > 0.0)) {
        throw parameter_error("StepPlan: linesearch lambda0 must be positive");
      }
      if (linesearch.max_backtracks < 1) {
        throw parameter_error("StepPlan: max_backtracks must be >= 1");
      }
      break;
  }
  if (lambda_minus1 < 0.0) throw parameter_error("StepPlan: lambda_minus1 must be >= 0");
}

double StepPlan::at(int k) const {
  if (kind == StepKind::schedule) {
    std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(k), schedule.size() - 1);
    return schedule[i];
  }
  return lambda;
}

void SolverConfig::validate() const {
  if (x0.size() < 1) throw parameter_error("SolverConfig: x0 must be nonempty");
  if (max_iters < 1) throw parameter_error("SolverConfig: max_iters must be >= 1");
  if (!(residual_tol >= 0.0)) throw parameter_error("SolverConfig: residual_tol must be >= 0");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw parameter_error("SolverConfig: alpha must be in [0,1)");
  if (!(beta > 0.0 && beta <= 1.0)) throw parameter_error("SolverConfig: beta must be in (0,1]");
  if (iterate_stride < 1 || residual_stride < 1) {
    throw parameter_error("SolverConfig: strides must be >= 1");
  }
  step.validate();
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iters: return "max_iters";
    case SolveStatus::diverged: return "diverged";
    case SolveStatus::linesearch_failed: return "linesearch_failed";
  }
  return "unknown";
}

double natural_residual(const SplitInclusion& P, double lambda, const Vector& x) {
  Vector arg = x - lambda * P.B(x);
  if (P.C) arg -= lambda * (*P.C)(x);
  return (x - P.A(lambda, arg)).norm();
}

SolverRun run_forb(const SplitInclusion& P, const SolverConfig& cfg) {
  check_problem_config(P, cfg);
  if (cfg.step.kind == StepKind::linesearch) {
    throw config_error("run_forb: use run_forb_linesearch for linesearch step plans");
  }
  if (P.C) throw config_error("run_forb: instance has a C operator; use run_forb3");

  SolverRun run;
  Vector x = cfg.x0;
  Vector xm = cfg.x_minus1.value_or(cfg.x0);
  double lam_prev = cfg.step.lambda_minus1 > 0.0 ? cfg.step.lambda_minus1 : cfg.step.at(0);
  run.lambda_minus1 = lam_prev;
  run.x_minus1 = xm;
  if (P.constants.L) {
    double hi = cfg.step.kind == StepKind::schedule
                    ? *std::max_element(cfg.step.schedule.begin(), cfg.step.schedule.end())
                    : cfg.step.lambda;
    warn_if_above_bound(run, hi, 1.0 / (2.0 * *P.constants.L), "1/(2L)");
  }

  IterateTrace trace{run, cfg.iterate_stride};
  trace.store(0, x);
  Vector Bm = P.B(xm);
  ++run.oracle_calls.forward_B;

  run.status = SolveStatus::max_iters;
  run.final_point = x;
  double last_res = kInf;
  for (int k = 0; k < cfg.max_iters; ++k) {
    double lam = cfg.step.at(k);
    Vector Bx = P.B(x);
    ++run.oracle_calls.forward_B;
    Vector arg = x - lam * Bx - lam_prev * (Bx - Bm);
    run.lambdas.push_back(lam);
    if (!arg.allFinite()) {
      run.residuals.push_back(kInf);
      run.status = SolveStatus::diverged;
      break;
    }
    Vector xn = P.A(lam, arg);
    ++run.oracle_calls.resolvent;
    trace.store(k + 1, xn);
    run.final_point = xn;

    bool diverged = out_of_range(xn);
    bool check = diverged || k % cfg.residual_stride == 0 || k + 1 == cfg.max_iters;
    if (check) last_res = natural_residual(P, lam, xn);
    run.residuals.push_back(last_res);
    if (diverged) {
      run.status = SolveStatus::diverged;
      trace.finalize(k + 1, xn);
      break;
    }
    if (check && last_res <= cfg.residual_tol) {
      run.status = SolveStatus::converged;
      trace.finalize(k + 1, xn);
      break;
    }
    Bm = std::move(Bx);
    x = std::move(xn);
    lam_prev = lam;
    if (k + 1 == cfg.max_iters) trace.finalize(k + 1, x);
  }
  return run;
}

SolverRun run_forb_linesearch(const SplitInclusion& P, const SolverConfig& cfg) {
  check_problem_config(P, cfg);
  if (cfg.step.kind != StepKind::linesearch) {
    throw config_error("run_forb_linesearch: step plan must be of kind linesearch");
  }
  if (P.C) throw config_error("run_forb_linesearch: instance has a C operator");
  const LinesearchParams& ls = cfg.step.linesearch;

  SolverRun run;
  Vector x = cfg.x0;
  Vector xm = cfg.x_minus1.value_or(cfg.x0);
  double lam_prev = ls.lambda0;
  run.lambda_minus1 = lam_prev;
  run.x_minus1 = xm;

  IterateTrace trace{run, cfg.iterate_stride};
  trace.store(0, x);
  Vector Bm = P.B(xm);
  Vector Bx = P.B(x);
  run.oracle_calls.forward_B += 2;

  run.status = SolveStatus::max_iters;
  run.final_point = x;
  double last_res = kInf;
  for (int k = 0; k < cfg.max_iters; ++k) {
    // The reflection term is frozen while searching over lambda_k.
    Vector held = lam_prev * (Bx - Bm);
    double rho = ls.rho_policy == RhoPolicy::always_increase ? 1.0 / ls.sigma : 1.0;
    double lam = rho * lam_prev;

    int accepted = -1;
    Vector xn, Bxn;
    for (int i = 0; i <= ls.max_backtracks; ++i) {
      Vector arg = x - lam * Bx - held;
      if (!arg.allFinite()) break;
      xn = P.A(lam, arg);
      ++run.oracle_calls.resolvent;
      Bxn = P.B(xn);
      ++run.oracle_calls.forward_B;
      if (lam * (Bxn - Bx).norm() <= 0.5 * ls.delta * (xn - x).norm()) {
        accepted = i;
        break;
      }
      lam *= ls.sigma;
    }
    if (accepted < 0) {
      run.status = SolveStatus::linesearch_failed;
      break;
    }
    run.backtracks.push_back(accepted);
    run.lambdas.push_back(lam);
    trace.store(k + 1, xn);
    run.final_point = xn;

    bool diverged = out_of_range(xn);
    bool check = diverged || k % cfg.residual_stride == 0 || k + 1 == cfg.max_iters;
    if (check) last_res = natural_residual(P, lam, xn);
    run.residuals.push_back(last_res);
    if (diverged) {
      run.status = SolveStatus::diverged;
      trace.finalize(k + 1, xn);
      break;
    }
    if (check && last_res <= cfg.residual_tol) {
      run.status = SolveStatus::converged;
      trace.finalize(k + 1, xn);
      break;
    }
    xm = std::move(x);
    Bm = std::move(Bx);
    x = std::move(xn);
    Bx = std::move(Bxn);
    lam_prev = lam;
    if (k + 1 == cfg.max_iters) trace.finalize(k + 1, x);
  }
  return run;
}

SolverRun run_relaxed_inertial(const SplitInclusion& P, const SolverConfig& cfg) {
  check_problem_config(P, cfg);
  if (cfg.step.kind != StepKind::constant) {
    throw config_error("run_relaxed_inertial: constant stepsize required");
  }
  if (P.C) throw config_error("run_relaxed_inertial: instance has a C operator");
  const double lam = cfg.step.lambda;
  const double alpha = cfg.alpha;
  const double beta = cfg.beta;

  SolverRun run;
  if (P.constants.L) {
    double bound = max_stepsize(Alg::relaxed_inertial, P.constants, alpha, beta,
                                class_of(P.B));
    warn_if_above_bound(run, lam, bound, "relaxed-inertial");
    if (bound == 0.0) {
      run.warnings.push_back("(alpha, beta) pair is outside the feasible region");
    }
  }

  Vector x = cfg.x0;
  Vector xm = cfg.x_minus1.value_or(cfg.x0);
  run.lambda_minus1 = lam;
  run.x_minus1 = xm;

  IterateTrace trace{run, cfg.iterate_stride};
  trace.store(0, x);
  Vector Bm = P.B(xm);
  ++run.oracle_calls.forward_B;

  run.status = SolveStatus::max_iters;
  run.final_point = x;
  double last_res = kInf;
  for (int k = 0; k < cfg.max_iters; ++k) {
    Vector Bx = P.B(x);
    ++run.oracle_calls.forward_B;
    Vector arg = x - lam * Bx - (lam / beta) * (Bx - Bm) + (alpha / beta) * (x - xm);
    run.lambdas.push_back(lam);
    if (!arg.allFinite()) {
      run.residuals.push_back(kInf);
      run.status = SolveStatus::diverged;
      break;
    }
    Vector z = P.A(lam, arg);
    ++run.oracle_calls.resolvent;
    Vector xn = (1.0 - beta) * x + beta * z;
    trace.store(k + 1, xn);
    run.final_point = xn;

    bool diverged = out_of_range(xn);
    bool check = diverged || k % cfg.residual_stride == 0 || k + 1 == cfg.max_iters;
    if (check) {
      last_res = natural_residual(P, lam, xn);
      run.aux_residuals.push_back(natural_residual(P, lam, z));
    } else {
      run.aux_residuals.push_back(run.aux_residuals.empty() ? kInf : run.aux_residuals.back());
    }
    run.residuals.push_back(last_res);
    if (diverged) {
      run.status = SolveStatus::diverged;
      trace.finalize(k + 1, xn);
      break;
    }
    if (check && last_res <= cfg.residual_tol) {
      run.status = SolveStatus::converged;
      trace.finalize(k + 1, xn);
      break;
    }
    Bm = std::move(Bx);
    xm = std::move(x);
    x = std::move(xn);
    if (k + 1 == cfg.max_iters) trace.finalize(k + 1, x);
  }
  return run;
}

SolverRun run_forb3(const SplitInclusion& P, const SolverConfig& cfg) {
  check_problem_config(P, cfg);
  if (!P.C) throw config_error("run_forb3: instance has no C operator");
  if (cfg.step.kind != StepKind::constant) {
    throw config_error("run_forb3: constant stepsize required");
  }
  const double lam = cfg.step.lambda;

  SolverRun run;
  if (P.constants.L1 && P.constants.L2) {
    warn_if_above_bound(run, lam, 2.0 / (4.0 * *P.constants.L1 + *P.constants.L2),
                        "2/(4*L1+L2)");
  }

  Vector x = cfg.x0;
  Vector xm = cfg.x_minus1.value_or(cfg.x0);
  run.lambda_minus1 = lam;
  run.x_minus1 = xm;

  IterateTrace trace{run, cfg.iterate_stride};
  trace.store(0, x);
  Vector Bm = P.B(xm);
  ++run.oracle_calls.forward_B;

  run.status = SolveStatus::max_iters;
  run.final_point = x;
  double last_res = kInf;
  for (int k = 0; k < cfg.max_iters; ++k) {
    Vector Bx = P.B(x);
    ++run.oracle_calls.forward_B;
    Vector Cx = (*P.C)(x);
    ++run.oracle_calls.forward_C;
    Vector arg = x - lam * Bx - lam * (Bx - Bm) - lam * Cx;
    run.lambdas.push_back(lam);
    if (!arg.allFinite()) {
      run.residuals.push_back(kInf);
      run.status = SolveStatus::diverged;
      break;
    }
    Vector xn = P.A(lam, arg);
    ++run.oracle_calls.resolvent;
    trace.store(k + 1, xn);
    run.final_point = xn;

    bool diverged = out_of_range(xn);
    bool check = diverged || k % cfg.residual_stride == 0 || k + 1 == cfg.max_iters;
    if (check) last_res = natural_residual(P, lam, xn);
    run.residuals.push_back(last_res);
    if (diverged) {
      run.status = SolveStatus::diverged;
      trace.finalize(k + 1, xn);
      break;
    }
    if (check && last_res <= cfg.residual_tol) {
      run.status = SolveStatus::converged;
      trace.finalize(k + 1, xn);
      break;
    }
    Bm = std::move(Bx);
    x = std::move(xn);
    if (k + 1 == cfg.max_iters) trace.finalize(k + 1, x);
  }
  return run;
}

SolverRun run_stochastic_forb(const SplitInclusion& P,
                              const std::vector<ForwardOracle>& parts,
                              const SolverConfig& cfg) {
  check_problem_config(P, cfg);
  if (parts.empty()) throw config_error("run_stochastic_forb: empty parts list");
  for (const auto& p : parts) {
    if (p.dim != P.dim()) throw shape_error("run_stochastic_forb: part dimension mismatch");
  }
  if (cfg.step.kind != StepKind::constant) {
    throw config_error("run_stochastic_forb: constant stepsize required");
  }
  const double lam = cfg.step.lambda;
  const std::size_t n = parts.size();

  SolverRun run;
  if (P.constants.L) {
    warn_if_above_bound(run, lam, 1.0 / (2.0 * *P.constants.L), "1/(2L)");
  }

  SplitMix64 rng(cfg.seed);
  Vector x = cfg.x0;
  Vector xm = cfg.x_minus1.value_or(cfg.x0);
  run.lambda_minus1 = lam;
  run.x_minus1 = xm;

  IterateTrace trace{run, cfg.iterate_stride};
  trace.store(0, x);

  run.status = SolveStatus::max_iters;
  run.final_point = x;
  double last_res = kInf;
  for (int k = 0; k < cfg.max_iters; ++k) {
    std::size_t i = rng.index(n);
    Vector Bx = P.B(x);
    ++run.oracle_calls.forward_B;
    Vector Bi_x = parts[i](x);
    Vector Bi_xm = parts[i](xm);
    run.oracle_calls.forward_Bi += 2;
    Vector arg = x - lam * Bx - lam * (Bi_x - Bi_xm);
    run.lambdas.push_back(lam);
    if (!arg.allFinite()) {
      run.residuals.push_back(kInf);
      run.status = SolveStatus::diverged;
      break;
    }
    Vector xn = P.A(lam, arg);
    ++run.oracle_calls.resolvent;
    trace.store(k + 1, xn);
    run.final_point = xn;

    bool diverged = out_of_range(xn);
    bool check = diverged || k % cfg.residual_stride == 0 || k + 1 == cfg.max_iters;
    if (check) last_res = natural_residual(P, lam, xn);
    run.residuals.push_back(last_res);
    if (diverged) {
      run.status = SolveStatus::diverged;
      trace.finalize(k + 1, xn);
      break;
    }
    if (check && last_res <= cfg.residual_tol) {
      run.status = SolveStatus::converged;
      trace.finalize(k + 1, xn);
      break;
    }
    xm = std::move(x);
    x = std::move(xn);
    if (k + 1 == cfg.max_iters) trace.finalize(k + 1, x);
  }
  return run;
}

SolverRun run_baseline(BaselineAlg alg, const SplitInclusion& P,
                       const SolverConfig& cfg) {
  check_problem_config(P, cfg);
  if (P.C) throw config_error("run_baseline: instance has a C operator");
  if (cfg.step.kind == StepKind::linesearch) {
    throw config_error("run_baseline: linesearch step plans are not supported");
  }
  if (alg == BaselineAlg::projected_reflected_gradient && !P.A.is_projection) {
    throw config_error("run_baseline: projected reflected gradient requires a projection resolvent");
  }
  if (alg == BaselineAlg::popov && !P.A.is_identity) {
    throw config_error("run_baseline: Popov's method requires A = 0");
  }

  SolverRun run;
  Vector x = cfg.x0;
  Vector xm = cfg.x_minus1.value_or(cfg.x0);
  run.lambda_minus1 = cfg.step.lambda_minus1 > 0.0 ? cfg.step.lambda_minus1 : cfg.step.at(0);
  run.x_minus1 = xm;
  Vector y = x;  // Popov auxiliary sequence

  IterateTrace trace{run, cfg.iterate_stride};
  trace.store(0, x);

  run.status = SolveStatus::max_iters;
  run.final_point = x;
  double last_res = kInf;
  for (int k = 0; k < cfg.max_iters; ++k) {
    double lam = cfg.step.at(k);
    run.lambdas.push_back(lam);
    Vector xn;
    switch (alg) {
      case BaselineAlg::tseng: {
        Vector Bx = P.B(x);
        ++run.oracle_calls.forward_B;
        Vector yk = P.A(lam, x - lam * Bx);
        ++run.oracle_calls.resolvent;
        Vector By = P.B(yk);
        ++run.oracle_calls.forward_B;
        xn = yk - lam * By + lam * Bx;
        break;
      }
      case BaselineAlg::forward_backward: {
        Vector Bx = P.B(x);
        ++run.oracle_calls.forward_B;
        xn = P.A(lam, x - lam * Bx);
        ++run.oracle_calls.resolvent;
        break;
      }
      case BaselineAlg::proximal_point: {
        xn = P.A(lam, x);
        ++run.oracle_calls.resolvent;
        break;
      }
      case BaselineAlg::projected_reflected_gradient: {
        Vector Br = P.B(2.0 * x - xm);
        ++run.oracle_calls.forward_B;
        xn = P.A(lam, x - lam * Br);
        ++run.oracle_calls.resolvent;
        break;
      }
      case BaselineAlg::popov: {
        Vector Bx = P.B(x);
        ++run.oracle_calls.forward_B;
        y = y - lam * Bx;
        xn = y - lam * Bx;
        break;
      }
    }
    trace.store(k + 1, xn);
    run.final_point = xn;

    bool diverged = out_of_range(xn);
    bool check = diverged || k % cfg.residual_stride == 0 || k + 1 == cfg.max_iters;
    if (check) last_res = natural_residual(P, lam, xn);
    run.residuals.push_back(last_res);
    if (diverged) {
      run.status = SolveStatus::diverged;
      trace.finalize(k + 1, xn);
      break;
    }
    if (check && last_res <= cfg.residual_tol) {
      run.status = SolveStatus::converged;
      trace.finalize(k + 1, xn);
      break;
    }
    xm = std::move(x);
    x = std::move(xn);
    if (k + 1 == cfg.max_iters) trace.finalize(k + 1, x);
  }
  return run;
}

double max_stepsize(Alg alg, const SplitInclusion::Constants& c, double alpha,
                    double beta, OperatorClass cls) {
  auto require = [](const std::optional<double>& v, const char* name) {
    if (!v || !(*v > 0.0)) {
      throw config_error(std::string("max_stepsize: missing constant ") + name);
    }
    return *v;
  };
  switch (alg) {
    case Alg::forb:
    case Alg::stochastic_forb:
    case Alg::popov:
    case Alg::projected_reflected_gradient:
      return 1.0 / (2.0 * require(c.L, "L"));
    case Alg::tseng:
      return 1.0 / require(c.L, "L");
    case Alg::forward_backward:
      // No guarantee for merely Lipschitz B.
      return cls == OperatorClass::cocoercive ? 2.0 / require(c.L, "L") : 0.0;
    case Alg::proximal_point:
    case Alg::forb_linesearch:
      return std::numeric_limits<double>::infinity();
    case Alg::relaxed_inertial: {
      double L = require(c.L, "L");
      if (!(alpha >= 0.0 && alpha < 1.0 && beta > 0.0 && beta <= 1.0)) return 0.0;
      double bound;
      if (cls == OperatorClass::lipschitz) {
        bound = std::min((2.0 - beta - alpha * beta - 2.0 * alpha) / (2.0 * L),
                         (1.0 - alpha - alpha * beta) / (beta * L));
      } else {
        if (!(alpha < (2.0 - beta) / (2.0 + beta))) return 0.0;
        bound = std::min((2.0 - beta - alpha * beta + 2.0 * alpha) / (2.0 * L),
                         (1.0 - alpha + alpha * beta) / (beta * L));
      }
      return bound > 0.0 ? bound : 0.0;
    }
    case Alg::forb3:
      return 2.0 / (4.0 * require(c.L1, "L1") + require(c.L2, "L2"));
  }
  throw config_error("max_stepsize: unknown algorithm");
}

}  // namespace monosplit
