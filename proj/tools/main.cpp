// Command-line experiment runner: loads a JSON config, builds a problem,
// runs the requested methods, and writes CSV traces plus a JSON report.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "monosplit/diagnostics.hpp"
#include "monosplit/problems.hpp"
#include "monosplit/prox.hpp"
#include "monosplit/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace monosplit;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitConfig = 3;
constexpr int kExitIo = 4;

struct CliError {
  int code;
  std::string message;
};

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::optional<std::uint64_t> seed_override() {
  const char* env = std::getenv("MONOSPLIT_SEED_OVERRIDE");
  if (!env || !*env) return std::nullopt;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    throw CliError{kExitParse, "MONOSPLIT_SEED_OVERRIDE is not an unsigned integer"};
  }
}

ProblemInstance build_problem(const json& j) {
  std::string name = j.value("name", "");
  json params = j.value("params", json::object());
  std::uint64_t seed = j.value("seed", std::uint64_t{0});
  if (auto ov = seed_override()) seed = *ov;
  if (name == "rotation") return make_rotation(params.value("n", 1));
  if (name == "affine_vi") {
    return make_affine_vi(seed, params.value("n", 4), params.value("skew_weight", 0.5));
  }
  if (name == "strongly_monotone") {
    return make_strongly_monotone(seed, params.value("n", 3), params.value("m", 0.5),
                                  params.value("L", 2.0));
  }
  if (name == "composite_min") {
    return make_composite_min(seed, params.value("rows", 10), params.value("cols", 20),
                              params.value("tau", 0.1));
  }
  if (name == "three_operator") {
    return make_three_operator(seed, params.value("n", 4), params.value("L1", 1.5),
                               params.value("L2", 3.0));
  }
  if (name == "saddle_bilinear") {
    return make_saddle_bilinear(seed, params.value("n1", 3), params.value("n2", 2));
  }
  throw CliError{kExitConfig, "unknown problem name '" + name + "'"};
}

Alg parse_alg(const std::string& s) {
  if (s == "forb") return Alg::forb;
  if (s == "forb_linesearch") return Alg::forb_linesearch;
  if (s == "relaxed_inertial") return Alg::relaxed_inertial;
  if (s == "forb3") return Alg::forb3;
  if (s == "stochastic_forb") return Alg::stochastic_forb;
  if (s == "tseng") return Alg::tseng;
  if (s == "forward_backward") return Alg::forward_backward;
  if (s == "proximal_point") return Alg::proximal_point;
  if (s == "projected_reflected_gradient") return Alg::projected_reflected_gradient;
  if (s == "popov") return Alg::popov;
  throw CliError{kExitConfig, "unknown method '" + s + "'"};
}

StepPlan parse_step(const json& m) {
  if (m.contains("lambda") && !m.contains("step")) {
    return StepPlan::constant_step(m.at("lambda").get<double>());
  }
  json s = m.value("step", json::object());
  std::string kind = s.value("kind", "constant");
  if (kind == "constant") return StepPlan::constant_step(s.value("lambda", 0.1));
  if (kind == "schedule") {
    return StepPlan::scheduled(s.value("values", std::vector<double>{}));
  }
  if (kind == "linesearch") {
    LinesearchParams ls;
    ls.delta = s.value("delta", ls.delta);
    ls.sigma = s.value("sigma", ls.sigma);
    ls.lambda0 = s.value("lambda0", ls.lambda0);
    ls.max_backtracks = s.value("max_backtracks", ls.max_backtracks);
    std::string rp = s.value("rho_policy", "always_increase");
    if (rp == "always_increase") ls.rho_policy = RhoPolicy::always_increase;
    else if (rp == "never_increase") ls.rho_policy = RhoPolicy::never_increase;
    else throw CliError{kExitConfig, "unknown rho_policy '" + rp + "'"};
    return StepPlan::backtracking(ls);
  }
  throw CliError{kExitConfig, "unknown step kind '" + kind + "'"};
}

SolverConfig parse_method_config(const json& m, Eigen::Index dim, int stride) {
  SolverConfig cfg;
  if (m.contains("x0")) {
    const json& x = m.at("x0");
    if (x.is_array()) {
      std::vector<double> v = x.get<std::vector<double>>();
      if (static_cast<Eigen::Index>(v.size()) != dim) {
        throw CliError{kExitConfig, "x0 has wrong dimension"};
      }
      cfg.x0 = Eigen::Map<Vector>(v.data(), dim);
    } else if (x.is_object()) {
      cfg.x0 = Vector::Constant(dim, x.value("fill", 1.0));
    } else {
      throw CliError{kExitConfig, "x0 must be an array or {\"fill\": value}"};
    }
  } else {
    cfg.x0 = Vector::Ones(dim);
  }
  cfg.step = parse_step(m);
  cfg.max_iters = m.value("max_iters", 1000);
  cfg.residual_tol = m.value("tol", 1e-10);
  cfg.alpha = m.value("alpha", 0.0);
  cfg.beta = m.value("beta", 1.0);
  cfg.seed = m.value("seed", std::uint64_t{0});
  if (auto ov = seed_override()) cfg.seed = *ov;
  cfg.iterate_stride = stride;
  return cfg;
}

SolverRun dispatch(Alg alg, const ProblemInstance& p, const SolverConfig& cfg) {
  switch (alg) {
    case Alg::forb: return run_forb(p.inclusion, cfg);
    case Alg::forb_linesearch: return run_forb_linesearch(p.inclusion, cfg);
    case Alg::relaxed_inertial: return run_relaxed_inertial(p.inclusion, cfg);
    case Alg::forb3: return run_forb3(p.inclusion, cfg);
    case Alg::stochastic_forb:
      if (p.parts.empty()) {
        throw CliError{kExitConfig, "problem '" + p.name + "' exposes no parts for stochastic_forb"};
      }
      return run_stochastic_forb(p.inclusion, p.parts, cfg);
    case Alg::tseng: return run_baseline(BaselineAlg::tseng, p.inclusion, cfg);
    case Alg::forward_backward:
      return run_baseline(BaselineAlg::forward_backward, p.inclusion, cfg);
    case Alg::proximal_point:
      return run_baseline(BaselineAlg::proximal_point, p.inclusion, cfg);
    case Alg::projected_reflected_gradient:
      return run_baseline(BaselineAlg::projected_reflected_gradient, p.inclusion, cfg);
    case Alg::popov: return run_baseline(BaselineAlg::popov, p.inclusion, cfg);
  }
  throw CliError{kExitConfig, "unhandled method"};
}

// Cumulative (forward, resolvent) calls after producing iterate k, rebuilt
// from each recursion's fixed per-iteration cost.
std::pair<long, long> calls_at(Alg alg, const SolverRun& run, int k) {
  long fwd = 0, res = 0;
  switch (alg) {
    case Alg::forb:
    case Alg::relaxed_inertial:
      fwd = k + 1; res = k; break;
    case Alg::forb3:
      fwd = 2 * k + 1; res = k; break;
    case Alg::stochastic_forb:
      fwd = 3L * k; res = k; break;
    case Alg::forb_linesearch: {
      fwd = 2; res = 0;
      for (int i = 0; i < k && i < static_cast<int>(run.backtracks.size()); ++i) {
        fwd += run.backtracks[i] + 1;
        res += run.backtracks[i] + 1;
      }
      break;
    }
    case Alg::tseng: fwd = 2L * k; res = k; break;
    case Alg::forward_backward:
    case Alg::projected_reflected_gradient:
      fwd = k; res = k; break;
    case Alg::proximal_point: fwd = 0; res = k; break;
    case Alg::popov: fwd = k; res = 0; break;
  }
  return {fwd, res};
}

void atomic_write(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CliError{kExitIo, "cannot open '" + tmp.string() + "' for writing"};
    out << contents;
    if (!out) throw CliError{kExitIo, "write failed for '" + tmp.string() + "'"};
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw CliError{kExitIo, "rename failed for '" + path.string() + "': " + ec.message()};
}

std::string trace_csv(Alg alg, const SolverRun& run, const ProblemInstance& p,
                      const std::optional<EnergyReport>& energy) {
  std::string csv = "k,lambda,residual,dist_to_solution,energy,forward_calls,resolvent_calls\n";
  bool full = run.iterates.size() == run.lambdas.size() + 1;
  int n = static_cast<int>(run.iterates.size());
  for (int k = 0; k < n; ++k) {
    csv += std::to_string(k);
    csv += ',';
    if (full && k >= 1) csv += fmt17(run.lambdas[static_cast<std::size_t>(k - 1)]);
    csv += ',';
    if (full && k >= 1) csv += fmt17(run.residuals[static_cast<std::size_t>(k - 1)]);
    csv += ',';
    if (p.inclusion.reference_solution) {
      csv += fmt17((run.iterates[static_cast<std::size_t>(k)] -
                    *p.inclusion.reference_solution).norm());
    }
    csv += ',';
    if (energy && k < static_cast<int>(energy->per_iteration.size())) {
      csv += fmt17(energy->per_iteration[static_cast<std::size_t>(k)].phi);
    }
    csv += ',';
    if (full) {
      auto [fwd, res] = calls_at(alg, run, k);
      csv += std::to_string(fwd);
      csv += ',';
      csv += std::to_string(res);
    } else {
      csv += ',';
    }
    csv += '\n';
  }
  return csv;
}

int run_experiment(const std::string& config_path, const std::string& out_dir,
                   bool quiet) {
  json cfg;
  {
    std::ifstream in(config_path);
    if (!in) throw CliError{kExitIo, "cannot read config '" + config_path + "'"};
    try {
      cfg = json::parse(in);
    } catch (const json::exception& e) {
      throw CliError{kExitParse, std::string("config parse failure: ") + e.what()};
    }
  }
  if (!cfg.contains("problem") || !cfg.contains("methods")) {
    throw CliError{kExitParse, "config must contain 'problem' and 'methods'"};
  }
  const json& methods = cfg.at("methods");
  if (!methods.is_array() || methods.empty()) {
    throw CliError{kExitConfig, "config must list at least one method"};
  }
  json outputs = cfg.value("outputs", json::object());
  int stride = outputs.value("iterate_stride", 1);
  fs::path base(out_dir);
  fs::path trace_dir = base / outputs.value("trace_path", std::string("traces"));
  fs::path report_path = base / outputs.value("report_path", std::string("report.json"));
  std::error_code ec;
  fs::create_directories(trace_dir, ec);
  if (ec) throw CliError{kExitIo, "cannot create trace directory: " + ec.message()};
  fs::create_directories(report_path.parent_path(), ec);

  ProblemInstance problem;
  try {
    problem = build_problem(cfg.at("problem"));
  } catch (const CliError&) {
    throw;
  } catch (const std::exception& e) {
    throw CliError{kExitConfig, std::string("problem construction failed: ") + e.what()};
  }

  json report;
  report["problem"] = to_json(problem);
  report["methods"] = json::array();

  int idx = 0;
  for (const json& m : methods) {
    std::string alg_name = m.value("alg", "");
    Alg alg = parse_alg(alg_name);
    SolverConfig scfg = parse_method_config(m, problem.inclusion.dim(), stride);
    SolverRun run;
    try {
      run = dispatch(alg, problem, scfg);
    } catch (const config_error& e) {
      throw CliError{kExitConfig, alg_name + ": " + e.what()};
    } catch (const std::exception& e) {
      throw CliError{kExitConfig, alg_name + ": internal error: " + e.what()};
    }

    std::optional<EnergyReport> energy;
    if (problem.inclusion.reference_solution &&
        run.iterates.size() == run.lambdas.size() + 1 && !problem.inclusion.C) {
      try {
        energy = energy_forb(run, problem.inclusion);
      } catch (const std::exception&) {
        energy.reset();
      }
    }

    json entry;
    entry["method"] = alg_name;
    entry["status"] = to_string(run.status);
    entry["iterations"] = run.iterations();
    entry["final_residual"] =
        run.residuals.empty() ? json() : json(run.residuals.back());
    entry["energy_violations"] = energy ? json(energy->violations) : json();
    try {
      double bound = max_stepsize(alg, problem.inclusion.constants, scfg.alpha,
                                  scfg.beta,
                                  problem.inclusion.B.cocoercivity
                                      ? OperatorClass::cocoercive
                                      : OperatorClass::lipschitz);
      entry["max_stepsize_bound"] = std::isfinite(bound) ? json(bound) : json();
    } catch (const std::exception&) {
      entry["max_stepsize_bound"] = json();
    }
    entry["rate_estimate"] = json();
    if (run.iterations() > 12) {
      try {
        RateEstimate est = estimate_rate(run.residuals,
                                         IterationWindow{10, run.iterations() - 1});
        entry["rate_estimate"] = {{"rho", est.rho},
                                  {"r_squared", est.r_squared},
                                  {"window", {est.window.lo, est.window.hi}}};
      } catch (const std::exception&) {
      }
    }
    if (!run.warnings.empty()) entry["warnings"] = run.warnings;
    report["methods"].push_back(entry);

    fs::path trace_file =
        trace_dir / (std::to_string(idx) + "_" + alg_name + ".csv");
    atomic_write(trace_file, trace_csv(alg, run, problem, energy));
    if (!quiet) {
      std::cout << alg_name << ": " << to_string(run.status) << " after "
                << run.iterations() << " iterations";
      if (!run.residuals.empty()) std::cout << ", residual " << run.residuals.back();
      std::cout << "\n";
    }
    ++idx;
  }

  atomic_write(report_path, report.dump(2) + "\n");
  if (!quiet) std::cout << "report: " << report_path.string() << "\n";
  return 0;
}

void print_catalog() {
  std::cout << "problems:\n"
               "  rotation            params: n\n"
               "  affine_vi           params: n, skew_weight; seeded\n"
               "  strongly_monotone   params: n, m, L; seeded\n"
               "  composite_min       params: rows, cols, tau; seeded\n"
               "  three_operator      params: n, L1, L2; seeded\n"
               "  saddle_bilinear     params: n1, n2; seeded\n"
               "prox gallery:\n"
               "  zero  l1_norm  box_indicator  halfspace_indicator  quadratic  "
               "scaled_identity_shift\n"
               "methods (admissible stepsize supremum):\n"
               "  forb  bound: 1/(2L)\n"
               "  forb_linesearch  bound: adaptive (backtracking; no a-priori limit)\n"
               "  relaxed_inertial  bound: min{(2-b-ab-2a)/(2L), (1-a-ab)/(bL)} "
               "[Lipschitz] | min{(2-b-ab+2a)/(2L), (1-a+ab)/(bL)} [cocoercive]\n"
               "  forb3 bound: 2/(4*L1+L2)\n"
               "  stochastic_forb  bound: 1/(2L)\n"
               "baselines:\n"
               "  tseng  bound: 1/L\n"
               "  forward_backward  bound: 2/L (cocoercive only)\n"
               "  proximal_point  bound: unrestricted\n"
               "  projected_reflected_gradient  bound: 1/(2L)\n"
               "  popov  bound: 1/(2L)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"monosplit: operator-splitting experiment runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  bool quiet = false;
  CLI::App* run_cmd = app.add_subcommand("run", "run an experiment config");
  run_cmd->add_option("config", config_path, "JSON experiment config")->required();
  run_cmd->add_option("--out-dir", out_dir, "base directory for outputs");
  run_cmd->add_flag("--quiet", quiet, "suppress progress output");
  CLI::App* catalog_cmd =
      app.add_subcommand("catalog", "list problems, methods, and prox gallery");

  CLI11_PARSE(app, argc, argv);

  try {
    if (catalog_cmd->parsed()) {
      print_catalog();
      return 0;
    }
    return run_experiment(config_path, out_dir, quiet);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
