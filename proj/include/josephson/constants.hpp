#pragma once

#include <cstddef>

// Global tolerance table. Every numeric threshold used by the library and its
// check suite is defined here so that nothing drifts between modules.
namespace josephson::tol {

/// Entrywise tolerance for constructed objects (Hermiticity, unit trace).
inline constexpr double kConstruction = 1e-14;
/// Operator max-norm tolerance for algebraic identities (commutators, idempotency).
inline constexpr double kIdentity = 1e-13;
/// Bloch-vector length slack for density matrices.
inline constexpr double kBlochLength = 1e-12;
/// Allowed negativity of density-matrix eigenvalues.
inline constexpr double kPositivity = 1e-14;

/// Bisection width on the bulk spectrum scale mu.
inline constexpr double kGapBisection = 1e-14;
/// Fixed-point defect accepted for the bulk gap equation.
inline constexpr double kGapResidual = 1e-11;

/// NESS solver defaults.
inline constexpr double kNessDamping = 0.5;
inline constexpr double kNessTolerance = 1e-13;
inline constexpr std::size_t kNessMaxIterations = 100000;
inline constexpr double kNewtonStep = 1e-7;
inline constexpr std::size_t kNewtonMaxIterations = 200;
/// Steady-state residual a converged NESS must meet.
inline constexpr double kSteadyResidual = 1e-12;
/// Agreement between the projection fixed point and the closed-form equations.
inline constexpr double kClosedForm = 1e-11;

/// Gauge covariance of full-pipeline outputs.
inline constexpr double kGauge = 1e-11;
/// Oscillator decomposition residual of the Goldstone dynamics.
inline constexpr double kDynamics = 1e-10;
/// Orthogonality / equal-norm checks of the Goldstone Bloch vectors.
inline constexpr double kGoldstoneGeometry = 1e-12;

/// Finite-size oracle identities.
inline constexpr double kOracleIdentity = 1e-13;
inline constexpr double kOracleCurrent = 1e-12;
inline constexpr double kKrylov = 1e-10;

/// Step used for numerical slopes in gamma.
inline constexpr double kSlopeStep = 1e-5;
/// Analytic vs numerical slope agreement (relative).
inline constexpr double kSlopeAgreement = 1e-6;

}  // namespace josephson::tol
