#include "josephson/observables.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace josephson {

namespace {

constexpr cplx kI{0.0, 1.0};

Vec3 unit(const Vec3& v) {
  const double n = norm(v);
  if (n == 0.0) return {0.0, 0.0, 0.0};
  return {v[0] / n, v[1] / n, v[2] / n};
}

}  // namespace

CurrentValue josephson_current(const NessSolution& sol, double gamma) {
  // lambda_I lambda_II sin(phi_I - phi_II) = Im(L_I conj(L_II)).
  return {-4.0 * gamma * std::imag(sol.Lambda_b_I * std::conj(sol.Lambda_b_II))};
}

GoldstonePair goldstone_operators(Side region, const NessSolution& sol) {
  GoldstonePair pair;
  pair.region = region;
  const cplx field = sol.field(region);
  const double modulus2 = std::norm(field);
  if (modulus2 == 0.0) return pair;

  const double eps = sol.params.bulk(region).epsilon;
  const double mu = sol.mu_t(region);
  const double mu2 = mu * mu;
  const Op2 plus = pauli(Pauli::plus);
  const Op2 minus = pauli(Pauli::minus);

  pair.mu = mu;
  pair.frequency = 2.0 * mu;
  pair.Q = (modulus2 / mu2) * pauli(Pauli::z) +
           (eps / mu2) * (std::conj(field) * plus + field * minus);
  pair.P = (kI / mu) * (std::conj(field) * plus - field * minus);

  const Op2& rho = sol.rho_b(region);
  pair.mean_Q = std::abs(expectation(rho, pair.Q));
  pair.mean_P = std::abs(expectation(rho, pair.P));
  pair.ccr_exact = expectation(rho, commutator(pair.Q, pair.P));
  const double lambda_t = std::abs(sol.Lambda_b(region));
  pair.ccr_formula = 4.0 * kI * lambda_t * lambda_t / mu;
  pair.ccr_field_reading = 4.0 * kI * modulus2 / mu;
  std::tie(pair.var_Q, pair.var_P) = fluctuation_variances(pair, rho);
  return pair;
}

double ccr_defect(const GoldstonePair& pair) { return std::abs(pair.ccr_exact - pair.ccr_formula); }

int oscillator_orientation(const GoldstonePair& pair, const Op2& hamiltonian) {
  const Vec3 q = to_bloch(pair.Q).vector;
  const Vec3 p = to_bloch(pair.P).vector;
  const Vec3 n = to_bloch(hamiltonian).vector;
  // dq/dt = -2 n x q; compare its direction with p.
  const double sense = -dot(cross(n, q), p);
  if (sense == 0.0) return 0;
  return sense > 0.0 ? 1 : -1;
}

double goldstone_dynamics_residual(const GoldstonePair& pair, const Op2& hamiltonian,
                                   std::span<const double> times) {
  const int orientation = oscillator_orientation(pair, hamiltonian);
  const double s = orientation == 0 ? 1.0 : static_cast<double>(orientation);
  const double omega = 2.0 * pair.mu;
  double out = 0.0;
  for (double t : times) {
    const double c = std::cos(omega * t);
    const double sn = std::sin(omega * t);
    const Op2 q_t = evolve_heisenberg(pair.Q, hamiltonian, t);
    const Op2 p_t = evolve_heisenberg(pair.P, hamiltonian, t);
    out = std::max(out, (q_t - (c * pair.Q + (s * sn) * pair.P)).max_norm());
    out = std::max(out, (p_t - ((-s * sn) * pair.Q + c * pair.P)).max_norm());
  }
  return out;
}

FrequencyPair goldstone_frequencies(const NessSolution& sol) {
  return {2.0 * sol.mu_t_I, 2.0 * sol.mu_t_II};
}

std::pair<double, double> fluctuation_variances(const GoldstonePair& pair, const Op2& rho_b) {
  const double mean_q = expectation(rho_b, pair.Q).real();
  const double mean_p = expectation(rho_b, pair.P).real();
  const double var_q = expectation(rho_b, pair.Q * pair.Q).real() - mean_q * mean_q;
  const double var_p = expectation(rho_b, pair.P * pair.P).real() - mean_p * mean_p;
  return {var_q, var_p};
}

GoldstoneGeometry goldstone_geometry(const GoldstonePair& pair, const Op2& hamiltonian) {
  const Vec3 q = to_bloch(pair.Q).vector;
  const Vec3 p = to_bloch(pair.P).vector;
  const Vec3 axis = unit(to_bloch(hamiltonian).vector);
  return {std::abs(dot(q, axis)), std::abs(dot(p, axis)), std::abs(norm(q) - norm(p))};
}

}  // namespace josephson
