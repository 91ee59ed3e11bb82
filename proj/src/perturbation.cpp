#include "josephson/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

#include "josephson/errors.hpp"

namespace josephson {

namespace {

void require_superconducting(const JunctionBulk& bulk, const char* who) {
  if (!bulk.I.superconducting || !bulk.II.superconducting) {
    throw InputError(std::string(who) + ": both plates must be superconducting");
  }
}

JunctionParams with_gamma(JunctionParams p, double gamma) {
  p.gamma = gamma;
  return p;
}

struct PointValues {
  double lambda_I = 0.0;
  double lambda_II = 0.0;
  double current = 0.0;
  double nu_I = 0.0;
  double nu_II = 0.0;
};

PointValues evaluate(const JunctionParams& p, const SolverOptions& options) {
  const NessSolution sol = solve_ness(p, options);
  if (!sol.converged) {
    throw SolverError("NESS solver did not converge at gamma = " + std::to_string(p.gamma));
  }
  const FrequencyPair nu = goldstone_frequencies(sol);
  return {sol.lambda_t(Side::I), sol.lambda_t(Side::II), josephson_current(sol, p.gamma).j, nu.I,
          nu.II};
}

std::vector<PointValues> evaluate_all(const JunctionParams& p, std::span<const double> gammas,
                                      const SolverOptions& options) {
  std::vector<std::future<PointValues>> jobs;
  jobs.reserve(gammas.size());
  for (double g : gammas) {
    jobs.push_back(std::async(std::launch::async, [&p, &options, g] {
      return evaluate(with_gamma(p, g), options);
    }));
  }
  std::vector<PointValues> out;
  out.reserve(jobs.size());
  for (auto& job : jobs) out.push_back(job.get());
  return out;
}

double relative(double a, double b, double scale) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), scale});
}

}  // namespace

LambdaPair lambda_first_order(const JunctionParams& p) {
  const JunctionBulk bulk = solve_bulk(p);
  require_superconducting(bulk, "lambda_first_order");
  const double c = std::cos(p.bulk_I.phi - p.bulk_II.phi);
  const double eI2 = p.bulk_I.epsilon * p.bulk_I.epsilon;
  const double eII2 = p.bulk_II.epsilon * p.bulk_II.epsilon;
  return {bulk.I.lambda + p.gamma * bulk.II.lambda * eI2 / (bulk.I.mu * bulk.I.mu) * c,
          bulk.II.lambda + p.gamma * bulk.I.lambda * eII2 / (bulk.II.mu * bulk.II.mu) * c};
}

LambdaPair printed_first_order(const JunctionParams& p) {
  const JunctionBulk bulk = solve_bulk(p);
  require_superconducting(bulk, "printed_first_order");
  const double lI = bulk.I.lambda;
  const double lII = bulk.II.lambda;
  const double eII2 = p.bulk_II.epsilon * p.bulk_II.epsilon;
  return {lI - p.gamma * lI * lI * lII / (bulk.I.mu * bulk.I.mu),
          lII + p.gamma * lI * lI * eII2 / (bulk.II.mu * bulk.II.mu)};
}

double current_first_order(const JunctionParams& p) {
  const JunctionBulk bulk = solve_bulk(p);
  return -4.0 * p.gamma * bulk.I.lambda * bulk.II.lambda * std::sin(p.bulk_I.phi - p.bulk_II.phi);
}

FrequencyPair frequency_first_order(const JunctionParams& p) {
  const JunctionBulk bulk = solve_bulk(p);
  const double shift = 4.0 * p.gamma * bulk.I.lambda * bulk.II.lambda *
                       std::cos(p.bulk_I.phi - p.bulk_II.phi);
  const double nu_I = 2.0 * bulk.I.mu;
  const double nu_II = 2.0 * bulk.II.mu;
  return {nu_I + shift / nu_I, nu_II + shift / nu_II};
}

BoundaryPair boundary_slope(const JunctionParams& p) {
  const JunctionBulk bulk = solve_bulk(p);
  require_superconducting(bulk, "boundary_slope");
  BoundaryPair out;
  for (Side s : {Side::I, Side::II}) {
    const cplx own = bulk[s].order_parameter();
    const cplx far = bulk[other(s)].order_parameter();
    const double mu2 = bulk[s].mu * bulk[s].mu;
    // d|F|/d gamma = Re(far conj(own)) / lambda; the projection scalar moves by -lambda d|F| / mu^2.
    const double radial = std::real(far * std::conj(own)) / bulk[s].lambda;
    out[s] = far - own * bulk[s].lambda * radial / mu2;
  }
  return out;
}

Slopes analytic_slopes(const JunctionParams& p) {
  const JunctionBulk bulk = solve_bulk(p);
  require_superconducting(bulk, "analytic_slopes");
  const double delta = p.bulk_I.phi - p.bulk_II.phi;
  const double ll = bulk.I.lambda * bulk.II.lambda;
  const double eI2 = p.bulk_I.epsilon * p.bulk_I.epsilon;
  const double eII2 = p.bulk_II.epsilon * p.bulk_II.epsilon;
  return {bulk.II.lambda * eI2 / (bulk.I.mu * bulk.I.mu) * std::cos(delta),
          bulk.I.lambda * eII2 / (bulk.II.mu * bulk.II.mu) * std::cos(delta),
          -4.0 * ll * std::sin(delta), 4.0 * ll * std::cos(delta) / (2.0 * bulk.I.mu),
          4.0 * ll * std::cos(delta) / (2.0 * bulk.II.mu)};
}

Slopes numerical_slopes(const JunctionParams& p, double step, const SolverOptions& options) {
  const double gammas[] = {0.0, step, 2.0 * step};
  const auto v = evaluate_all(p, gammas, options);
  auto stencil = [&](auto field) {
    return (-3.0 * field(v[0]) + 4.0 * field(v[1]) - field(v[2])) / (2.0 * step);
  };
  return {stencil([](const PointValues& x) { return x.lambda_I; }),
          stencil([](const PointValues& x) { return x.lambda_II; }),
          stencil([](const PointValues& x) { return x.current; }),
          stencil([](const PointValues& x) { return x.nu_I; }),
          stencil([](const PointValues& x) { return x.nu_II; })};
}

double FirstOrderReport::max_derivative_defect() const {
  return *std::max_element(derivative_defects.begin(), derivative_defects.end());
}

FirstOrderReport certify_first_order(const JunctionParams& p, std::span<const double> gammas,
                                     const SolverOptions& options) {
  for (double g : gammas) {
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw InputError("certify_first_order: remainder gammas must be positive");
    }
  }
  FirstOrderReport report;
  const JunctionBulk bulk = solve_bulk(p);
  require_superconducting(bulk, "certify_first_order");

  const LambdaPair lin = lambda_first_order(p);
  const FrequencyPair nu_lin = frequency_first_order(p);
  report.lambda_t_I_lin = lin.I;
  report.lambda_t_II_lin = lin.II;
  report.current_lin = current_first_order(p);
  report.nu_t_I_lin = nu_lin.I;
  report.nu_t_II_lin = nu_lin.II;

  report.analytic = analytic_slopes(p);
  report.numerical = numerical_slopes(p, tol::kSlopeStep, options);

  const double eI2 = p.bulk_I.epsilon * p.bulk_I.epsilon;
  const double eII2 = p.bulk_II.epsilon * p.bulk_II.epsilon;
  const double muI2 = bulk.I.mu * bulk.I.mu;
  const double muII2 = bulk.II.mu * bulk.II.mu;
  const double ll = bulk.I.lambda * bulk.II.lambda;
  // Amplitude of each slope over all phase differences.
  const std::array<double, 5> amplitude{bulk.II.lambda * eI2 / muI2, bulk.I.lambda * eII2 / muII2,
                                        4.0 * ll, 2.0 * ll / bulk.I.mu, 2.0 * ll / bulk.II.mu};
  const std::array<double, 5> a{report.analytic.lambda_I, report.analytic.lambda_II,
                                report.analytic.current, report.analytic.nu_I,
                                report.analytic.nu_II};
  const std::array<double, 5> n{report.numerical.lambda_I, report.numerical.lambda_II,
                                report.numerical.current, report.numerical.nu_I,
                                report.numerical.nu_II};
  for (std::size_t k = 0; k < 5; ++k) {
    report.derivative_defects[k] = relative(a[k], n[k], amplitude[k]);
  }

  report.printed_slope = {-bulk.I.lambda * bulk.I.lambda * bulk.II.lambda / muI2,
                          bulk.I.lambda * bulk.I.lambda * eII2 / muII2};
  report.printed_vs_numerical = {relative(report.printed_slope.I, n[0], amplitude[0]),
                                 relative(report.printed_slope.II, n[1], amplitude[1])};
  report.printed_vs_analytic = {relative(report.printed_slope.I, a[0], amplitude[0]),
                                relative(report.printed_slope.II, a[1], amplitude[1])};

  const auto full = evaluate_all(p, gammas, options);
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    const double g = gammas[k];
    const JunctionParams pg = with_gamma(p, g);
    const LambdaPair l = lambda_first_order(pg);
    const FrequencyPair f = frequency_first_order(pg);
    RemainderRow row;
    row.gamma = g;
    row.current_full = full[k].current;
    row.current_lin = current_first_order(pg);
    const double g2 = g * g;
    row.current_constant = std::abs(row.current_full - row.current_lin) / g2;
    row.lambda_I_constant = std::abs(full[k].lambda_I - l.I) / g2;
    row.lambda_II_constant = std::abs(full[k].lambda_II - l.II) / g2;
    row.nu_I_constant = std::abs(full[k].nu_I - f.I) / g2;
    row.nu_II_constant = std::abs(full[k].nu_II - f.II) / g2;
    report.remainders.push_back(row);
  }
  return report;
}

}  // namespace josephson
