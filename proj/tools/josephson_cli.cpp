// josephson: command-line front end.
//
//   josephson gap --epsilon 0.3 --beta 1e4
//   josephson ness --gamma 1e-3 --phi-II -0.5
//   josephson sweep --config run.json --output curve.csv
//   josephson check [--only finite-n]
//   josephson finite-n --n 2
//
// Exit codes: 0 ok, 1 invariant failure, 2 usage, 3 solver non-convergence,
// 4 resource limit.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "josephson/errors.hpp"
#include "josephson/finite_n.hpp"
#include "josephson/invariant_suite.hpp"
#include "josephson/observables.hpp"
#include "josephson/sweep.hpp"

using namespace josephson;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kInvariant = 1, kUsage = 2, kSolver = 3, kResource = 4 };

struct Globals {
  std::string config;
  std::string output;
  std::optional<std::string> format;
  std::optional<double> tolerance;
  std::optional<std::size_t> max_iter;
  std::optional<double> damping;
  std::optional<double> seed_lambda;
  std::optional<double> seed_phi;
  std::optional<std::size_t> memory_cap;
  std::string only;
};

struct ParamFlags {
  std::optional<double> eps_I, eps_II, beta_I, beta_II, gamma, phi_I, phi_II;
};

struct AxisFlags {
  std::optional<std::string> axis;
  std::optional<double> start, stop;
  std::optional<std::size_t> count;
};

void add_param_flags(CLI::App* cmd, ParamFlags& f) {
  cmd->add_option("--epsilon-I", f.eps_I, "kinetic energy, plate I");
  cmd->add_option("--epsilon-II", f.eps_II, "kinetic energy, plate II");
  cmd->add_option("--beta-I", f.beta_I, "inverse temperature, plate I");
  cmd->add_option("--beta-II", f.beta_II, "inverse temperature, plate II");
  cmd->add_option("--gamma", f.gamma, "tunneling coupling");
  cmd->add_option("--phi-I", f.phi_I, "bulk phase of plate I (radians)");
  cmd->add_option("--phi-II", f.phi_II, "bulk phase of plate II (radians)");
}

template <class T>
void set_if(const std::optional<T>& v, T& target) {
  if (v) target = *v;
}

RunConfig build_config(const Globals& g, const ParamFlags& f, const AxisFlags* axis = nullptr) {
  RunConfig cfg = g.config.empty() ? RunConfig{} : load_config(g.config);
  set_if(f.eps_I, cfg.params.bulk_I.epsilon);
  set_if(f.eps_II, cfg.params.bulk_II.epsilon);
  set_if(f.beta_I, cfg.params.bulk_I.beta);
  set_if(f.beta_II, cfg.params.bulk_II.beta);
  set_if(f.gamma, cfg.params.gamma);
  set_if(f.phi_I, cfg.params.bulk_I.phi);
  set_if(f.phi_II, cfg.params.bulk_II.phi);
  if (!g.output.empty()) cfg.output = g.output;
  if (g.format) cfg.format = parse_format(*g.format);
  set_if(g.tolerance, cfg.solver.tolerance);
  if (g.max_iter) cap_iterations(cfg.solver, *g.max_iter);
  set_if(g.damping, cfg.solver.damping);
  if (g.seed_lambda) cfg.seed.lambda = g.seed_lambda;
  if (g.seed_phi) cfg.seed.phi = g.seed_phi;
  set_if(g.memory_cap, cfg.oracle.memory_cap);
  if (axis) {
    if (axis->axis) cfg.axis = parse_axis(*axis->axis);
    set_if(axis->start, cfg.grid.start);
    set_if(axis->stop, cfg.grid.stop);
    set_if(axis->count, cfg.grid.count);
  }
  cfg.validate();
  return cfg;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

int cmd_gap(const Globals& g, double eps, double beta) {
  const BulkParams p{eps, beta, 0.0};
  p.validate();
  const BulkSolution s = solve_gap(p);
  json report{{"epsilon", eps}, {"beta", beta},
              {"criterion", superconducting_criterion(eps, beta)},
              {"superconducting", s.superconducting}};
  if (eps < 0.5) report["critical_beta"] = critical_beta(eps);
  json branches = json::array();
  branches.push_back({{"branch", "normal"}, {"lambda", 0.0}, {"mu", eps}});
  if (s.superconducting) {
    branches.push_back({{"branch", "superconducting"},
                        {"lambda", s.lambda},
                        {"mu", s.mu},
                        {"fixed_point_defect", std::abs(gap_map(s.lambda, p) - s.lambda)}});
  }
  report["branches"] = branches;
  emit(g.output, report.dump(2) + "\n");
  return kOk;
}

int cmd_ness(const Globals& g, const ParamFlags& f) {
  const RunConfig cfg = build_config(g, f);
  const JunctionParams& p = cfg.params;
  if (p.strong_coupling_warning()) {
    std::cerr << "warning: gamma = " << p.gamma << " is outside the weak-coupling regime\n";
  }
  const NessSolution sol = solve_ness(p, point_solver(cfg, p));
  json report{{"epsilon_I", p.bulk_I.epsilon}, {"epsilon_II", p.bulk_II.epsilon},
              {"beta_I", p.bulk_I.beta},       {"beta_II", p.bulk_II.beta},
              {"gamma", p.gamma},              {"phi_I", p.bulk_I.phi},
              {"phi_II", p.bulk_II.phi},       {"lambda_I", sol.lambda_bulk_I},
              {"lambda_II", sol.lambda_bulk_II}};
  for (Side s : {Side::I, Side::II}) {
    const std::string tag = std::string("_") + to_string(s);
    report["Lambda_b" + tag] = complex_json(sol.Lambda_b(s));
    report["lambda_t" + tag] = sol.lambda_t(s);
    report["phi_t" + tag] = sol.phi_t(s);
    report["field" + tag] = complex_json(sol.field(s));
    report["mu_t" + tag] = sol.mu_t(s);
    const GoldstonePair q = goldstone_operators(s, sol);
    report["nu_t" + tag] = 2.0 * sol.mu_t(s);
    report["ccr_exact" + tag] = complex_json(q.ccr_exact);
    report["ccr_defect" + tag] = ccr_defect(q);
  }
  report["current"] = josephson_current(sol, p.gamma).j;
  report["fixed_point_residual"] = sol.fixed_point_residual;
  report["verify_steady"] = verify_steady(sol, p);
  report["residual"] = sol.residual;
  report["iterations"] = sol.iterations;
  report["method"] = to_string(sol.method);
  report["converged"] = sol.converged;
  emit(cfg.output, report.dump(2) + "\n");
  if (!sol.converged) {
    std::cerr << "error: NESS solver did not converge (residual " << sol.residual << ", method "
              << to_string(sol.method) << ")\n";
    return kSolver;
  }
  return kOk;
}

int cmd_sweep(const Globals& g, const ParamFlags& f, const AxisFlags& a) {
  const RunConfig cfg = build_config(g, f, &a);
  const auto rows = run_sweep(cfg);
  std::ostringstream out;
  write_rows(out, rows, cfg.format);
  emit(cfg.output, out.str());
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.converged ? 0 : 1;
  if (failed > 0) {
    std::cerr << "error: " << failed << " of " << rows.size() << " sweep points did not converge\n";
    return kSolver;
  }
  return kOk;
}

int cmd_check(const Globals& g) {
  const RunConfig cfg = build_config(g, {});
  SuiteOptions options;
  options.only = g.only;
  options.solver = cfg.solver;
  options.dimension_cap = cfg.oracle.lattice().dimension_cap;
  const auto results = run_invariant_suite(options);
  std::ostringstream out;
  for (const CheckResult& c : results) {
    out << (c.informational ? "INFO" : c.pass ? "PASS" : "FAIL") << "  [" << c.group << "] "
        << c.name << "  measured=" << format_number(c.measured);
    if (!c.informational) out << "  threshold=" << format_number(c.threshold);
    out << '\n';
  }
  const bool ok = all_passed(results);
  out << (ok ? "all invariants passed\n" : "invariant failures detected\n");
  emit(g.output, out.str());
  return ok ? kOk : kInvariant;
}

int cmd_finite_n(const Globals& g, const ParamFlags& f, std::optional<std::size_t> n) {
  RunConfig cfg = build_config(g, f);
  if (n) cfg.oracle.n = *n;
  const LatticeSpec spec = cfg.oracle.lattice();
  spec.validate();
  const JunctionParams& p = cfg.params;
  const BigOperator h = build_hamiltonian(spec, p);
  const BigOperator q = build_relative_number(spec);
  const BigOperator j = build_current(spec, p.gamma);
  const BulkSolution bI = solve_gap(p.bulk_I);
  const BulkSolution bII = solve_gap(p.bulk_II);
  const auto states = plate_product_state(spec, bI.rho, bII.rho);
  const cplx current = product_state_expectation(j, states) / static_cast<double>(spec.n);
  const double formula =
      -4.0 * p.gamma * bI.lambda * bII.lambda * std::sin(p.bulk_I.phi - p.bulk_II.phi);
  const BigOperator bulk = build_plate_hamiltonian(spec, Side::I, p.bulk_I.epsilon) +
                           build_plate_hamiltonian(spec, Side::II, p.bulk_II.epsilon);

  const double identity = commutator_identity_defect(h, q, cplx(0.0, 1.0), j);
  const double conservation = commutator_identity_defect(bulk, q, 1.0, BigOperator(spec));
  const double hermiticity = std::max(hermiticity_defect(h), hermiticity_defect(j));
  const double current_defect = std::abs(current - formula);
  json report{{"n", spec.n},
              {"sites", spec.num_sites()},
              {"dimension", spec.dimension()},
              {"commutator_identity_defect", identity},
              {"bulk_conservation_defect", conservation},
              {"hermiticity_defect", hermiticity},
              {"current_per_boundary_site", complex_json(current)},
              {"current_formula", formula},
              {"current_defect", current_defect}};
  const bool ok = identity <= tol::kOracleIdentity && conservation <= tol::kOracleIdentity &&
                  hermiticity <= tol::kOracleIdentity && current_defect <= tol::kOracleCurrent;
  report["pass"] = ok;
  emit(cfg.output, report.dump(2) + "\n");
  return ok ? kOk : kInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-plate BCS Josephson junction: bulk gap, boundary steady state, sweeps and checks"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config, "JSON run configuration");
  app.add_option("--output", g.output, "output path (default stdout)");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--tolerance", g.tolerance, "NESS solver tolerance");
  app.add_option("--max-iter", g.max_iter, "iteration cap for each NESS solver stage");
  app.add_option("--damping", g.damping, "fixed-point damping in (0, 1]");
  app.add_option("--seed-lambda", g.seed_lambda, "seed modulus for the boundary solver");
  app.add_option("--seed-phi", g.seed_phi, "seed phase offset for the boundary solver (radians)");
  app.add_option("--memory-cap", g.memory_cap, "finite-N state-vector memory cap in bytes");
  app.add_option("--only", g.only, "restrict check to one group");

  double eps = 0.0;
  double beta = 0.0;
  auto* gap = app.add_subcommand("gap", "bulk gap equation, both branches");
  gap->add_option("--epsilon", eps, "kinetic energy")->required();
  gap->add_option("--beta", beta, "inverse temperature")->required();

  ParamFlags params;
  auto* ness = app.add_subcommand("ness", "boundary steady state as JSON");
  add_param_flags(ness, params);

  AxisFlags axis;
  auto* sweep = app.add_subcommand("sweep", "parameter sweep to CSV or JSON");
  add_param_flags(sweep, params);
  sweep->add_option("--axis", axis.axis,
                    "delta_phi, gamma, beta_I, beta_II, epsilon_I or epsilon_II");
  sweep->add_option("--start", axis.start, "first grid value");
  sweep->add_option("--stop", axis.stop, "last grid value");
  sweep->add_option("--count", axis.count, "number of grid points");

  auto* check = app.add_subcommand("check", "run the invariant suite");

  std::optional<std::size_t> n;
  auto* finite = app.add_subcommand("finite-n", "finite-lattice operator identities");
  add_param_flags(finite, params);
  finite->add_option("--n", n, "plate side length N");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*gap) return cmd_gap(g, eps, beta);
    if (*ness) return cmd_ness(g, params);
    if (*sweep) return cmd_sweep(g, params, axis);
    if (*check) return cmd_check(g);
    if (*finite) return cmd_finite_n(g, params, n);
  } catch (const InputError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolver;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return kResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvariant;
  }
  return kUsage;
}
