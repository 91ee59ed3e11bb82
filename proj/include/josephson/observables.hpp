#pragma once

// Physical outputs of a solved NESS: Josephson current and the two boundary
// Goldstone modes (fluctuation operators, their commutator, variances,
// oscillator dynamics and frequencies).

#include <span>
#include <utility>

#include "josephson/ness.hpp"

namespace josephson {

struct CurrentValue {
  double j = 0.0;  // per boundary site
};

/// j = -4 gamma lambda_I lambda_II sin(phi_I - phi_II) in the boundary order parameters.
CurrentValue josephson_current(const NessSolution& sol, double gamma);

struct GoldstonePair {
  Side region = Side::I;
  Op2 Q;  // broken-symmetry generator, shifted to zero mean
  Op2 P;  // order-parameter fluctuation
  cplx ccr_exact;          // Tr(rho [Q, P])
  cplx ccr_formula;        // 4i lambda^2/mu with lambda = |boundary order parameter|
  cplx ccr_field_reading;  // 4i |F|^2/mu, lambda read as the effective-field modulus
  double mean_Q = 0.0;     // |Tr(rho Q)|, must vanish
  double mean_P = 0.0;
  double var_Q = 0.0;
  double var_P = 0.0;
  double frequency = 0.0;  // 2 mu
  double mu = 0.0;
};

/// Q = (|F|^2/mu^2) sigma^z + (eps/mu^2)(conj(F) sigma^+ + F sigma^-),
/// P = (i/mu)(conj(F) sigma^+ - F sigma^-), F the boundary effective field.
/// In the normal phase (F = 0) both operators and all moments are zero.
GoldstonePair goldstone_operators(Side region, const NessSolution& sol);

/// |ccr_exact - ccr_formula|.
double ccr_defect(const GoldstonePair& pair);

/// Orientation s in Q(t) = Q cos(2 mu t) + s P sin(2 mu t), read off the
/// rotation sense of Q's Bloch vector about the axis of h. Zero if Q vanishes.
int oscillator_orientation(const GoldstonePair& pair, const Op2& hamiltonian);

/// Max over t of the operator max-norm of the deviation of the exact
/// Heisenberg evolution from the oscillator solution, for both Q and P rows.
double goldstone_dynamics_residual(const GoldstonePair& pair, const Op2& hamiltonian,
                                   std::span<const double> times);

struct FrequencyPair {
  double I = 0.0;
  double II = 0.0;
};

/// (2 mu_I, 2 mu_II) from the boundary effective fields.
FrequencyPair goldstone_frequencies(const NessSolution& sol);

/// Second moments Tr(rho Q^2) - Tr(rho Q)^2 and the same for P.
std::pair<double, double> fluctuation_variances(const GoldstonePair& pair, const Op2& rho_b);

/// Bloch-geometry diagnostics: |q.n_hat|, |p.n_hat| and ||q| - |p||.
struct GoldstoneGeometry {
  double q_axis_overlap = 0.0;
  double p_axis_overlap = 0.0;
  double norm_mismatch = 0.0;
};
GoldstoneGeometry goldstone_geometry(const GoldstonePair& pair, const Op2& hamiltonian);

}  // namespace josephson
