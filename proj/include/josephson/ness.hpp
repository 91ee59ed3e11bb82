#pragma once

// Non-equilibrium steady state of two plates coupled through their boundary rows.
//
// Bulk sites of each plate keep their equilibrium one-site state. A boundary
// site of plate I sees the effective Hamiltonian
//   h_I = eps_I sigma^z - (conj(F_I) sigma^+ + F_I sigma^-),
//   F_I = lambda_I e^{i phi_I} + gamma * L_II,
// with L_II = Tr(rho_II_b sigma^+) the boundary order parameter of plate II
// (and symmetrically for II). The boundary state is the projection of the bulk
// equilibrium state onto the commutant of h, and the boundary order parameters
// are fixed by self-consistency.

#include <array>
#include <cstddef>
#include <optional>
#include <string>

#include "josephson/constants.hpp"
#include "josephson/equilibrium.hpp"
#include "josephson/spin_algebra.hpp"

namespace josephson {

enum class Side { I, II };
enum class Region { I_a, I_b, II_a, II_b };

constexpr Side other(Side s) { return s == Side::I ? Side::II : Side::I; }
const char* to_string(Side s);
const char* to_string(Region r);

struct JunctionParams {
  BulkParams bulk_I;
  BulkParams bulk_II;
  double gamma = 0.0;

  /// Throws InputError for invalid bulk parameters or gamma < 0.
  void validate() const;
  /// True when gamma is outside the weak-coupling regime gamma << min(eps).
  bool strong_coupling_warning() const;

  const BulkParams& bulk(Side s) const { return s == Side::I ? bulk_I : bulk_II; }
};

/// Boundary order parameters (L_I, L_II).
struct BoundaryPair {
  cplx I;
  cplx II;

  cplx operator[](Side s) const { return s == Side::I ? I : II; }
  cplx& operator[](Side s) { return s == Side::I ? I : II; }
};

/// Solved bulk plates, the fixed input of every NESS evaluation.
struct JunctionBulk {
  BulkSolution I;
  BulkSolution II;

  const BulkSolution& operator[](Side s) const { return s == Side::I ? I : II; }
};

JunctionBulk solve_bulk(const JunctionParams& p);

struct SolverOptions {
  double damping = tol::kNessDamping;
  double tolerance = tol::kNessTolerance;
  std::size_t max_iterations = tol::kNessMaxIterations;
  double newton_step = tol::kNewtonStep;
  std::size_t newton_max_iterations = tol::kNewtonMaxIterations;
  /// Starting point; defaults to the bulk order parameters.
  std::optional<BoundaryPair> seed;
  /// Skip straight to Newton (used to exercise the fallback).
  bool newton_only = false;

  void validate() const;
};

enum class SolverMethod { fixed_point, newton, none };
const char* to_string(SolverMethod m);

struct NessSolution {
  JunctionParams params;
  JunctionBulk bulk;

  double lambda_bulk_I = 0.0;
  double lambda_bulk_II = 0.0;
  cplx Lambda_b_I;
  cplx Lambda_b_II;
  cplx field_I;
  cplx field_II;
  double mu_t_I = 0.0;
  double mu_t_II = 0.0;
  Op2 rho_b_I;
  Op2 rho_b_II;

  double fixed_point_residual = 0.0;  // |L - ness_map(L)|
  double steady_residual = 0.0;       // verify_steady
  double residual = 0.0;              // max of the two
  std::size_t iterations = 0;
  bool converged = false;
  SolverMethod method = SolverMethod::none;

  BoundaryPair boundary() const { return {Lambda_b_I, Lambda_b_II}; }
  cplx Lambda_b(Side s) const { return s == Side::I ? Lambda_b_I : Lambda_b_II; }
  cplx field(Side s) const { return s == Side::I ? field_I : field_II; }
  double mu_t(Side s) const { return s == Side::I ? mu_t_I : mu_t_II; }
  const Op2& rho_b(Side s) const { return s == Side::I ? rho_b_I : rho_b_II; }
  double lambda_t(Side s) const { return std::abs(Lambda_b(s)); }
  double phi_t(Side s) const { return std::arg(Lambda_b(s)); }
};

/// Effective field on the boundary of `side`: own bulk order parameter plus
/// gamma times the other side's boundary order parameter.
cplx boundary_field(Side side, const JunctionParams& p, const JunctionBulk& bulk,
                    const BoundaryPair& boundary);

/// h for any of the four regions. Bulk regions ignore `boundary`.
Op2 region_hamiltonian(Region region, const JunctionParams& p, const JunctionBulk& bulk,
                       const BoundaryPair& boundary);

/// Boundary effective Hamiltonian of `side` for the given boundary guess.
Op2 boundary_hamiltonian(Side side, const JunctionParams& p, const JunctionBulk& bulk,
                         const BoundaryPair& boundary);

/// Boundary one-site state: commutant projection of the bulk state onto h_side.
Op2 boundary_state(Side side, const JunctionParams& p, const JunctionBulk& bulk,
                   const BoundaryPair& boundary);

/// One application of the self-consistency map built from the projection.
BoundaryPair ness_map(const BoundaryPair& guess, const JunctionParams& p,
                      const JunctionBulk& bulk);

/// Closed-form right-hand sides
///   L_I = F_I (eps^2 + lambda |F_I| cos(phi - arg F_I)) / (eps^2 + |F_I|^2),
/// evaluated independently of the projection route (cross-validation only).
BoundaryPair closed_form_rhs(const BoundaryPair& values, const JunctionParams& p,
                             const JunctionBulk& bulk);

/// Damped fixed-point iteration seeded at the bulk values; damped Newton with a
/// finite-difference Jacobian when that fails. Never throws on non-convergence:
/// the result carries `converged = false` and the best iterate.
NessSolution solve_ness(const JunctionParams& p, const SolverOptions& options = {});

/// Max over the four regions of ||[h_x, rho_x]||_max plus |L_x - Tr(rho_x sigma^+)|.
double verify_steady(const NessSolution& sol, const JunctionParams& p);

/// Both bulk phases shifted by delta.
JunctionParams gauge_shift(const JunctionParams& p, double delta);

/// Exchange the roles of plates I and II.
JunctionParams swap_sides(const JunctionParams& p);

/// Wrap an angle into (-pi, pi].
double wrap_angle(double a);

}  // namespace josephson
