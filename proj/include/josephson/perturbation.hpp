#pragma once

// First-order-in-gamma expansions of the boundary order parameters, current and
// Goldstone frequencies, and a harness that certifies them against numerical
// slopes of the full solver.

#include <array>
#include <span>
#include <vector>

#include "josephson/ness.hpp"
#include "josephson/observables.hpp"

namespace josephson {

struct LambdaPair {
  double I = 0.0;
  double II = 0.0;
};

/// lambda_I + gamma lambda_II (eps_I^2/mu_I^2) cos(phi_I - phi_II), and I <-> II.
/// Throws InputError unless both plates are superconducting.
LambdaPair lambda_first_order(const JunctionParams& p);

/// The alternative first-order block
///   lambda_I - gamma lambda_I^2 lambda_II / mu_I^2,
///   lambda_II + gamma lambda_I^2 eps_II^2 / mu_II^2,
/// kept verbatim for side-by-side comparison. It is not I <-> II symmetric.
LambdaPair printed_first_order(const JunctionParams& p);

/// -4 gamma lambda_I lambda_II sin(phi_I - phi_II).
double current_first_order(const JunctionParams& p);

/// nu + 4 gamma lambda_I lambda_II cos(phi_I - phi_II) / nu, nu = 2 mu, per side.
FrequencyPair frequency_first_order(const JunctionParams& p);

/// Complex d L_b / d gamma at gamma = 0.
BoundaryPair boundary_slope(const JunctionParams& p);

struct Slopes {
  double lambda_I = 0.0;
  double lambda_II = 0.0;
  double current = 0.0;
  double nu_I = 0.0;
  double nu_II = 0.0;
};

/// d/d gamma at gamma = 0 of the first-order expressions.
Slopes analytic_slopes(const JunctionParams& p);

/// Second-order one-sided difference (-3 f(0) + 4 f(h) - f(2h)) / 2h of the
/// full solver in gamma. Throws SolverError if any solve fails.
Slopes numerical_slopes(const JunctionParams& p, double step, const SolverOptions& options = {});

struct RemainderRow {
  double gamma = 0.0;
  double current_full = 0.0;
  double current_lin = 0.0;
  // |full - linear| / gamma^2
  double current_constant = 0.0;
  double lambda_I_constant = 0.0;
  double lambda_II_constant = 0.0;
  double nu_I_constant = 0.0;
  double nu_II_constant = 0.0;
};

struct FirstOrderReport {
  // Linearized values at the gamma of the input parameters.
  double lambda_t_I_lin = 0.0;
  double lambda_t_II_lin = 0.0;
  double current_lin = 0.0;
  double nu_t_I_lin = 0.0;
  double nu_t_II_lin = 0.0;

  Slopes analytic;
  Slopes numerical;
  LambdaPair printed_slope;
  /// |analytic - numerical| relative to each slope's amplitude over phase
  /// differences; order lambda_I, lambda_II, current, nu_I, nu_II.
  std::array<double, 5> derivative_defects{};
  /// |printed - numerical| and |printed - analytic| for the lambda slopes, relative.
  LambdaPair printed_vs_numerical;
  LambdaPair printed_vs_analytic;

  std::vector<RemainderRow> remainders;

  double max_derivative_defect() const;
};

/// Solves the NESS across `gammas` (concurrently), compares analytic and
/// numerical slopes at gamma = 0 and tabulates O(gamma^2) remainder constants.
/// Throws SolverError if any point fails to converge.
FirstOrderReport certify_first_order(const JunctionParams& p, std::span<const double> gammas,
                                     const SolverOptions& options = {});

}  // namespace josephson
