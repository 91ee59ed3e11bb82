#include "josephson/equilibrium.hpp"

#include <cmath>

#include "josephson/constants.hpp"
#include "josephson/errors.hpp"

namespace josephson {

void BulkParams::validate() const {
  if (!std::isfinite(epsilon) || epsilon <= 0.0) {
    throw InputError("epsilon must be finite and positive");
  }
  if (!std::isfinite(beta) || beta <= 0.0) {
    throw InputError("beta must be finite and positive");
  }
  if (!std::isfinite(phi)) throw InputError("phi must be finite");
}

Op2 effective_hamiltonian(double epsilon, cplx field) {
  return epsilon * pauli(Pauli::z) -
         (std::conj(field) * pauli(Pauli::plus) + field * pauli(Pauli::minus));
}

double gap_map(double lambda, const BulkParams& p) {
  p.validate();
  if (!(lambda >= 0.0)) throw InputError("gap_map: lambda must be non-negative");
  const Op2 h = effective_hamiltonian(p.epsilon, std::polar(lambda, p.phi));
  return std::abs(expectation(gibbs_state(h, p.beta), pauli(Pauli::plus)));
}

double superconducting_criterion(double epsilon, double beta) {
  return std::tanh(beta * epsilon) - 2.0 * epsilon;
}

double critical_beta(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw InputError("critical_beta: requires 0 < epsilon < 1/2");
  }
  return std::atanh(2.0 * epsilon) / epsilon;
}

BulkSolution solve_gap(const BulkParams& p) {
  p.validate();
  BulkSolution out;
  out.phi = p.phi;
  if (superconducting_criterion(p.epsilon, p.beta) > 0.0) {
    // f(mu) = tanh(beta mu) - 2 mu is concave with f(0) = 0, f(eps) > 0 and
    // f(1/2) <= 0, so the root in (eps, 1/2] is unique.
    double lo = p.epsilon;
    double hi = 0.5;
    while (hi - lo > tol::kGapBisection) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (std::tanh(p.beta * mid) - 2.0 * mid > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double mu = 0.5 * (lo + hi);
    out.lambda = std::sqrt((mu - p.epsilon) * (mu + p.epsilon));
    out.superconducting = out.lambda > 0.0;
  }
  out.mu = std::hypot(p.epsilon, out.lambda);
  out.rho = gibbs_state(effective_hamiltonian(p.epsilon, out.order_parameter()), p.beta);
  out.residual = std::abs(out.lambda - std::abs(expectation(out.rho, pauli(Pauli::plus))));
  return out;
}

Op2 equilibrium_state(const BulkParams& p) { return solve_gap(p).rho; }

}  // namespace josephson
