#include "josephson/invariant_suite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "josephson/constants.hpp"
#include "josephson/errors.hpp"
#include "josephson/observables.hpp"
#include "josephson/perturbation.hpp"

namespace josephson {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

class Recorder {
 public:
  explicit Recorder(std::vector<CheckResult>& out) : out_(out) {}

  void group(std::string name) { group_ = std::move(name); }

  void check(std::string name, double measured, double threshold) {
    const bool pass = std::isfinite(measured) && measured <= threshold;
    out_.push_back({group_, std::move(name), measured, threshold, pass, false});
  }

  // Inclusive range check, reported as the distance outside [lo, hi].
  void within(std::string name, double measured, double lo, double hi) {
    const bool pass = std::isfinite(measured) && measured >= lo && measured <= hi;
    out_.push_back({group_, std::move(name), measured, hi, pass, false});
  }

  void info(std::string name, double measured) {
    out_.push_back({group_, std::move(name), measured, 0.0, true, true});
  }

 private:
  std::vector<CheckResult>& out_;
  std::string group_;
};

std::vector<JunctionParams> standard_points() {
  std::vector<JunctionParams> out;
  for (double eI : standard_epsilons()) {
    for (double eII : standard_epsilons()) {
      for (double g : standard_gammas()) {
        for (double d : standard_phase_grid()) out.push_back(standard_params(eI, eII, g, d));
      }
    }
  }
  return out;
}

void spin_algebra_checks(Recorder& r) {
  r.group("spin-algebra");
  const Op2 sp = pauli(Pauli::plus);
  const Op2 sm = pauli(Pauli::minus);
  const Op2 sx = pauli(Pauli::x);
  const Op2 sy = pauli(Pauli::y);
  const Op2 sz = pauli(Pauli::z);
  r.check("sigma+ = (sigma^x + i sigma^y)/2", (sp - 0.5 * (sx + kI * sy)).max_norm(),
          tol::kIdentity);
  r.check("[sigma+, sigma-] = sigma^z", (commutator(sp, sm) - sz).max_norm(), tol::kIdentity);
  r.check("[sigma^z, sigma+] = 2 sigma+", (commutator(sz, sp) - 2.0 * sp).max_norm(),
          tol::kIdentity);

  double roundtrip = 0.0;
  double heisenberg = 0.0;
  double projection = 0.0;
  for (double t : {0.1, 0.7, 2.3, 5.0}) {
    const Op2 evolved = evolve_heisenberg(sx, sz, t);
    heisenberg = std::max(
        heisenberg, (evolved - (std::cos(2.0 * t) * sx - std::sin(2.0 * t) * sy)).max_norm());
    const Vec3 a{0.3 * std::cos(t), 0.2 * std::sin(t), 0.5 - 0.1 * t};
    roundtrip = std::max(roundtrip, norm([&] {
                           const Vec3 b = bloch_vector(density_from_bloch(a));
                           return Vec3{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
                         }()));
    const Op2 h = effective_hamiltonian(0.3, std::polar(0.4, t));
    const Op2 proj = commutant_projection(density_from_bloch(a), h);
    projection = std::max(projection, commutator(h, proj).max_norm());
  }
  r.check("sigma^x(t) under sigma^z rotates into -sigma^y", heisenberg, tol::kIdentity);
  r.check("Bloch round trip", roundtrip, tol::kIdentity);
  r.check("commutant projection commutes with h", projection, tol::kIdentity);
}

void gap_checks(Recorder& r) {
  r.group("gap");
  const BulkSolution s = solve_gap({0.3, 1e4, 0.0});
  r.check("lambda(eps=0.3, beta=1e4) - 0.4", std::abs(s.lambda - 0.4), 1e-6);
  r.check("gap fixed-point defect", std::abs(gap_map(s.lambda, {0.3, 1e4, 0.0}) - s.lambda),
          tol::kGapResidual);

  double mismatches = 0.0;
  for (double eps : {0.1, 0.2, 0.3, 0.4, 0.45}) {
    const double bc = critical_beta(eps);
    if (!solve_gap({eps, 1.01 * bc, 0.0}).superconducting) mismatches += 1.0;
    if (solve_gap({eps, 0.99 * bc, 0.0}).superconducting) mismatches += 1.0;
  }
  for (double eps : {0.5, 0.6, 1.0}) {
    for (double beta : {1.0, 1e2, 1e4, 1e8}) {
      if (solve_gap({eps, beta, 0.0}).superconducting) mismatches += 1.0;
    }
  }
  r.check("threshold mismatches (eps, beta 1% off critical)", mismatches, 0.0);
}

void ness_checks(Recorder& r, const SolverOptions& options) {
  r.group("ness");
  double failures = 0.0;
  double closed_form = 0.0;
  double steady = 0.0;
  for (const JunctionParams& p : standard_points()) {
    const NessSolution sol = solve_ness(p, options);
    if (!sol.converged) {
      failures += 1.0;
      continue;
    }
    const BoundaryPair rhs = closed_form_rhs(sol.boundary(), p, sol.bulk);
    closed_form = std::max({closed_form, std::abs(rhs.I - sol.Lambda_b_I),
                            std::abs(rhs.II - sol.Lambda_b_II)});
    steady = std::max(steady, verify_steady(sol, p));
  }
  r.check("non-converged grid points", failures, 0.0);
  r.check("projection vs closed-form equations", closed_form, tol::kClosedForm);
  r.check("verify_steady residual", steady, tol::kSteadyResidual);

  const JunctionParams p0 = standard_params(0.3, 0.2, 0.0, 0.8);
  const NessSolution s0 = solve_ness(p0, options);
  r.check("gamma = 0 echoes the bulk",
          std::max(std::abs(s0.Lambda_b_I - s0.bulk.I.order_parameter()),
                   std::abs(s0.Lambda_b_II - s0.bulk.II.order_parameter())),
          tol::kClosedForm);

  SolverOptions newton = options;
  newton.newton_only = true;
  const JunctionParams pn = standard_params(0.3, 0.3, 1e-2, 1.1);
  const NessSolution a = solve_ness(pn, options);
  const NessSolution b = solve_ness(pn, newton);
  r.check("Newton fallback agrees with fixed point",
          b.converged ? std::max(std::abs(a.Lambda_b_I - b.Lambda_b_I),
                                 std::abs(a.Lambda_b_II - b.Lambda_b_II))
                      : std::numeric_limits<double>::infinity(),
          tol::kClosedForm);
}

void gauge_checks(Recorder& r, const SolverOptions& options) {
  r.group("gauge");
  double invariant = 0.0;
  double phase = 0.0;
  for (double g : standard_gammas()) {
    for (double d : standard_phase_grid()) {
      const JunctionParams p = standard_params(0.3, 0.2, g, d);
      const NessSolution base = solve_ness(p, options);
      const GoldstonePair qI = goldstone_operators(Side::I, base);
      const GoldstonePair qII = goldstone_operators(Side::II, base);
      for (double delta : {0.37, -1.2, 2.9, kPi}) {
        const JunctionParams ps = gauge_shift(p, delta);
        const NessSolution s = solve_ness(ps, options);
        const GoldstonePair sI = goldstone_operators(Side::I, s);
        const GoldstonePair sII = goldstone_operators(Side::II, s);
        invariant = std::max(
            {invariant, std::abs(s.lambda_t(Side::I) - base.lambda_t(Side::I)),
             std::abs(s.lambda_t(Side::II) - base.lambda_t(Side::II)),
             std::abs(s.mu_t_I - base.mu_t_I), std::abs(s.mu_t_II - base.mu_t_II),
             std::abs(josephson_current(s, g).j - josephson_current(base, g).j),
             std::abs(sI.ccr_exact - qI.ccr_exact), std::abs(sII.ccr_exact - qII.ccr_exact)});
        for (Side side : {Side::I, Side::II}) {
          phase = std::max(phase,
                           std::abs(wrap_angle(s.phi_t(side) - base.phi_t(side) - delta)));
        }
      }
    }
  }
  r.check("gauge-invariant outputs under phase shift", invariant, tol::kGauge);
  r.check("boundary phases shift with the input", phase, tol::kGauge);
}

// Boundary generator rebuilt from Tr(rho_b sigma^+) of the far plate.
Op2 state_hamiltonian(Side side, const NessSolution& sol) {
  const cplx far = expectation(sol.rho_b(other(side)), pauli(Pauli::plus));
  const cplx field = sol.bulk[side].order_parameter() + sol.params.gamma * far;
  return effective_hamiltonian(sol.params.bulk(side).epsilon, field);
}

void observables_checks(Recorder& r, const SolverOptions& options) {
  r.group("observables");
  {
    const NessSolution s = solve_ness(standard_params(0.3, 0.3, 0.0, 0.4), options);
    const GoldstonePair q = goldstone_operators(Side::I, s);
    r.check("CCR at gamma = 0 equals 4i lambda^2/mu", ccr_defect(q), 1e-12);
    r.check("CCR at gamma = 0 equals 1.28i (eps = 0.3)", std::abs(q.ccr_exact - 1.28 * kI), 1e-12);
  }
  for (double g : {1e-3, 1e-4}) {
    double worst = 0.0;
    for (double d : standard_phase_grid()) {
      const NessSolution s = solve_ness(standard_params(0.3, 0.3, g, d), options);
      for (Side side : {Side::I, Side::II}) {
        const GoldstonePair q = goldstone_operators(side, s);
        worst = std::max(worst, ccr_defect(q) / std::abs(q.ccr_formula));
      }
    }
    r.check("relative CCR defect at gamma = " + std::string(g == 1e-3 ? "1e-3" : "1e-4"), worst,
            g == 1e-3 ? 1e-2 : 1e-3);
  }

  double dynamics = 0.0;
  double geometry = 0.0;
  double means = 0.0;
  for (const JunctionParams& p : standard_points()) {
    const NessSolution s = solve_ness(p, options);
    for (Side side : {Side::I, Side::II}) {
      const GoldstonePair q = goldstone_operators(side, s);
      const Op2 h = state_hamiltonian(side, s);
      const double period = 2.0 * kPi / q.frequency;
      std::vector<double> times;
      for (int k = 0; k < 32; ++k) times.push_back(2.0 * period * k / 31.0);
      dynamics = std::max(dynamics, goldstone_dynamics_residual(q, h, times));
      const GoldstoneGeometry geo = goldstone_geometry(q, h);
      geometry = std::max({geometry, geo.q_axis_overlap, geo.p_axis_overlap, geo.norm_mismatch});
      means = std::max({means, q.mean_Q, q.mean_P});
    }
  }
  r.check("Goldstone oscillator residual over two periods", dynamics, tol::kDynamics);
  r.check("Q, P orthogonal to the h axis with equal norms", geometry, tol::kGoldstoneGeometry);
  r.check("Q, P have zero mean", means, tol::kGoldstoneGeometry);

  JunctionParams normal = standard_params(0.6, 0.7, 1e-3, 0.5);
  const NessSolution s = solve_ness(normal, options);
  double zero = 0.0;
  for (Side side : {Side::I, Side::II}) {
    const GoldstonePair q = goldstone_operators(side, s);
    zero = std::max({zero, q.Q.max_norm(), q.P.max_norm(), std::abs(q.ccr_exact)});
  }
  r.check("normal phase: Goldstone operators vanish", zero, 0.0);
}

struct LawErrors {
  double sine = 0.0;
  double cosine = 0.0;
};

// max |x - x_lin| / max |x_lin| over the phase grid.
LawErrors law_errors(double gamma, const SolverOptions& options) {
  double sine_dev = 0.0;
  double sine_amp = 0.0;
  double cos_dev = 0.0;
  double cos_amp = 0.0;
  for (double d : standard_phase_grid()) {
    const JunctionParams p = standard_params(0.3, 0.3, gamma, d);
    const NessSolution s = solve_ness(p, options);
    const double j_lin = current_first_order(p);
    sine_dev = std::max(sine_dev, std::abs(josephson_current(s, gamma).j - j_lin));
    sine_amp = std::max(sine_amp, std::abs(j_lin));
    const double nu = 2.0 * s.bulk.I.mu;
    const double shift_lin = frequency_first_order(p).I - nu;
    cos_dev = std::max(cos_dev, std::abs(goldstone_frequencies(s).I - nu - shift_lin));
    cos_amp = std::max(cos_amp, std::abs(shift_lin));
  }
  return {sine_dev / sine_amp, cos_dev / cos_amp};
}

void perturbation_checks(Recorder& r, const SolverOptions& options) {
  r.group("perturbation");
  const LawErrors big = law_errors(1e-3, options);
  const LawErrors small = law_errors(1e-4, options);
  r.check("sine law relative error at gamma = 1e-3", big.sine, 1e-2);
  r.within("sine law error ratio 1e-3 / 1e-4", big.sine / small.sine, 5.0, 20.0);
  r.check("cosine law relative error at gamma = 1e-3", big.cosine, 1e-2);
  r.within("cosine law error ratio 1e-3 / 1e-4", big.cosine / small.cosine, 5.0, 20.0);

  double evenness = 0.0;
  double increases = 0.0;
  double previous = std::numeric_limits<double>::infinity();
  for (double d : standard_phase_grid()) {
    const NessSolution plus = solve_ness(standard_params(0.3, 0.2, 1e-3, d), options);
    const NessSolution minus = solve_ness(standard_params(0.3, 0.2, 1e-3, -d), options);
    const FrequencyPair a = goldstone_frequencies(plus);
    const FrequencyPair b = goldstone_frequencies(minus);
    evenness = std::max({evenness, std::abs(a.I - b.I), std::abs(a.II - b.II)});
    if (d >= 0.0) {
      if (a.I > previous) increases += 1.0;
      previous = a.I;
    }
  }
  r.check("frequencies even in the phase difference", evenness, 1e-11);
  r.check("frequency not decreasing on [0, pi/2] (count)", increases, 0.0);

  double defect = 0.0;
  double printed_numerical = 0.0;
  double printed_analytic = 0.0;
  const double gammas[] = {1e-3, 1e-4};
  for (double d : {-1.3, -0.4, 0.0, 0.9, 1.5}) {
    const FirstOrderReport rep = certify_first_order(standard_params(0.3, 0.2, 0.0, d), gammas,
                                                     options);
    defect = std::max(defect, rep.max_derivative_defect());
    printed_numerical = std::max(
        {printed_numerical, rep.printed_vs_numerical.I, rep.printed_vs_numerical.II});
    printed_analytic =
        std::max({printed_analytic, rep.printed_vs_analytic.I, rep.printed_vs_analytic.II});
  }
  r.check("analytic vs numerical slopes (relative)", defect, tol::kSlopeAgreement);
  r.info("alternative first-order lambda block vs numerical slopes", printed_numerical);
  r.info("alternative first-order lambda block vs analytic slopes", printed_analytic);
}

void finite_n_checks(Recorder& r, std::size_t cap) {
  r.group("finite-n");
  const JunctionParams p = standard_params(0.3, 0.2, 1e-3, 0.7);
  const BulkSolution bI = solve_gap(p.bulk_I);
  const BulkSolution bII = solve_gap(p.bulk_II);
  const double expected = -4.0 * p.gamma * bI.lambda * bII.lambda *
                          std::sin(p.bulk_I.phi - p.bulk_II.phi);
  for (std::size_t n : {std::size_t{1}, std::size_t{2}}) {
    const LatticeSpec spec{n, cap};
    const std::string tag = " (N = " + std::to_string(n) + ")";
    const BigOperator h = build_hamiltonian(spec, p);
    const BigOperator q = build_relative_number(spec);
    const BigOperator j = build_current(spec, p.gamma);
    r.check("i[H, Q] = J" + tag, commutator_identity_defect(h, q, kI, j), tol::kOracleIdentity);
    const BigOperator bulk = build_plate_hamiltonian(spec, Side::I, p.bulk_I.epsilon) +
                             build_plate_hamiltonian(spec, Side::II, p.bulk_II.epsilon);
    r.check("[H_bulk, Q] = 0" + tag, commutator_identity_defect(bulk, q, 1.0, BigOperator(spec)),
            tol::kOracleIdentity);
    r.check("H, J Hermitian" + tag, std::max(hermiticity_defect(h), hermiticity_defect(j)),
            tol::kOracleIdentity);

    const auto states = plate_product_state(spec, bI.rho, bII.rho);
    const cplx current = product_state_expectation(j, states) / static_cast<double>(n);
    r.check("product-state current per boundary site" + tag, std::abs(current - expected),
            tol::kOracleCurrent);

    double gauge = 0.0;
    for (double alpha : {0.3, -1.1}) {
      const auto rotated =
          plate_product_state(spec, gauge_rotate(bI.rho, alpha), gauge_rotate(bII.rho, alpha));
      gauge = std::max(gauge, std::abs(product_state_expectation(j, rotated) -
                                       product_state_expectation(j, states)));
      gauge = std::max(gauge, std::abs(expectation(rotated.front(), pauli(Pauli::plus)) -
                                       std::polar(1.0, 2.0 * alpha) *
                                           expectation(states.front(), pauli(Pauli::plus))));
    }
    r.check("gauge covariance of product-state expectations" + tag, gauge, tol::kOracleCurrent);
  }

  const LatticeSpec spec{2, cap};
  const BigOperator h = build_hamiltonian(spec, p);
  BigOperator id(spec);
  id.add_term(1.0, {});
  const auto states = plate_product_state(spec, solve_gap(p.bulk_I).rho, solve_gap(p.bulk_II).rho);
  std::vector<double> times;
  for (int k = 0; k <= 10; ++k) times.push_back(static_cast<double>(k));
  double norm_drift = 0.0;
  for (cplx v : time_evolve_expectations(id, h, states, times)) {
    norm_drift = std::max(norm_drift, std::abs(v - 1.0));
  }
  r.check("norm conservation over t in [0, 10] (N = 2)", norm_drift, tol::kKrylov);

  const BigOperator j = build_current(spec, p.gamma);
  EvolutionOptions krylov;
  krylov.dense_threshold = 0;
  const auto dense = time_evolve_expectations(j, h, states, times);
  const auto iterative = time_evolve_expectations(j, h, states, times, krylov);
  double agreement = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    agreement = std::max(agreement, std::abs(dense[k] - iterative[k]));
  }
  r.check("Krylov vs dense evolution of <J> (N = 2)", agreement, tol::kKrylov);
}

}  // namespace

const std::vector<std::string>& suite_groups() {
  static const std::vector<std::string> groups{"spin-algebra", "gap",          "ness",    "gauge",
                                               "observables",  "perturbation", "finite-n"};
  return groups;
}

std::vector<double> standard_phase_grid() {
  std::vector<double> out;
  for (int k = 0; k < 17; ++k) out.push_back(-0.5 * kPi + kPi * k / 16.0);
  out[8] = 0.0;
  return out;
}

const std::vector<double>& standard_epsilons() {
  static const std::vector<double> v{0.2, 0.3};
  return v;
}

const std::vector<double>& standard_gammas() {
  static const std::vector<double> v{1e-4, 1e-3, 1e-2};
  return v;
}

JunctionParams standard_params(double eps_I, double eps_II, double gamma, double delta_phi) {
  JunctionParams p;
  p.bulk_I = {eps_I, kStandardBeta, 0.0};
  p.bulk_II = {eps_II, kStandardBeta, -delta_phi};
  p.gamma = gamma;
  return p;
}

std::vector<CheckResult> run_invariant_suite(const SuiteOptions& options) {
  const auto& groups = suite_groups();
  if (!options.only.empty() &&
      std::find(groups.begin(), groups.end(), options.only) == groups.end()) {
    throw InputError("unknown check group '" + options.only + "'");
  }
  options.solver.validate();
  auto wanted = [&](const char* g) { return options.only.empty() || options.only == g; };

  std::vector<CheckResult> out;
  Recorder r(out);
  if (wanted("spin-algebra")) spin_algebra_checks(r);
  if (wanted("gap")) gap_checks(r);
  if (wanted("ness")) ness_checks(r, options.solver);
  if (wanted("gauge")) gauge_checks(r, options.solver);
  if (wanted("observables")) observables_checks(r, options.solver);
  if (wanted("perturbation")) perturbation_checks(r, options.solver);
  if (wanted("finite-n")) finite_n_checks(r, options.dimension_cap);
  return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const auto& c) { return c.pass; });
}

}  // namespace josephson
