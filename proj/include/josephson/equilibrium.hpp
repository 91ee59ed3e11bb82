#pragma once

// Bulk strong-coupling BCS self-consistency for a single plate.
//
// The one-site state is rho = exp(-beta h)/Tr with
//   h = epsilon sigma^z - (conj(L) sigma^+ + L sigma^-),   L = lambda e^{i phi},
// and the order parameter is fixed by L = Tr(rho sigma^+). Written out this is
// lambda = lambda tanh(beta mu) / (2 mu), mu = sqrt(epsilon^2 + lambda^2), so the
// superconducting branch solves tanh(beta mu) = 2 mu. It exists iff
// tanh(beta epsilon) > 2 epsilon, which needs epsilon < 1/2.

#include "josephson/spin_algebra.hpp"

namespace josephson {

struct BulkParams {
  double epsilon = 0.3;  // kinetic energy in units of the pairing coupling
  double beta = 1e4;     // inverse temperature, finite
  double phi = 0.0;      // phase, radians

  /// Throws InputError unless epsilon > 0 and beta > 0, all finite.
  void validate() const;
};

struct BulkSolution {
  double lambda = 0.0;
  double mu = 0.0;
  bool superconducting = false;
  Op2 rho;
  double residual = 0.0;  // |lambda - |Tr(rho sigma^+)||
  double phi = 0.0;

  cplx order_parameter() const { return std::polar(lambda, phi); }
};

/// epsilon sigma^z - (conj(field) sigma^+ + field sigma^-). Spectrum +-sqrt(epsilon^2 + |field|^2).
Op2 effective_hamiltonian(double epsilon, cplx field);

/// One application of the self-consistency map lambda -> |Tr(rho(lambda) sigma^+)|.
double gap_map(double lambda, const BulkParams& p);

/// tanh(beta epsilon) - 2 epsilon; positive iff the superconducting branch exists.
double superconducting_criterion(double epsilon, double beta);

/// Inverse temperature at which the criterion vanishes. Requires 0 < epsilon < 1/2.
double critical_beta(double epsilon);

/// Superconducting branch when it exists, otherwise the normal branch lambda = 0.
BulkSolution solve_gap(const BulkParams& p);

/// Gibbs state of the self-consistent effective Hamiltonian.
Op2 equilibrium_state(const BulkParams& p);

}  // namespace josephson
