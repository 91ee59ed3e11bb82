#include "josephson/ness.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "josephson/errors.hpp"

namespace josephson {

namespace {

double pair_distance(const BoundaryPair& a, const BoundaryPair& b) {
  return std::max(std::abs(a.I - b.I), std::abs(a.II - b.II));
}

bool finite(const BoundaryPair& x) {
  return std::isfinite(x.I.real()) && std::isfinite(x.I.imag()) && std::isfinite(x.II.real()) &&
         std::isfinite(x.II.imag());
}

using Vec4 = Eigen::Vector4d;

Vec4 pack(const BoundaryPair& x) { return {x.I.real(), x.I.imag(), x.II.real(), x.II.imag()}; }
BoundaryPair unpack(const Vec4& u) { return {{u[0], u[1]}, {u[2], u[3]}}; }

struct NewtonResult {
  BoundaryPair x;
  std::size_t iterations = 0;
  bool converged = false;
};

NewtonResult newton_solve(BoundaryPair start, const JunctionParams& p, const JunctionBulk& bulk,
                          const SolverOptions& options) {
  auto defect = [&](const Vec4& u) -> Vec4 { return u - pack(ness_map(unpack(u), p, bulk)); };

  NewtonResult out;
  Vec4 u = pack(start);
  Vec4 g = defect(u);
  for (std::size_t it = 0; it < options.newton_max_iterations; ++it) {
    if (g.lpNorm<Eigen::Infinity>() <= options.tolerance) {
      out.converged = true;
      break;
    }
    ++out.iterations;
    Eigen::Matrix4d jacobian;
    for (int k = 0; k < 4; ++k) {
      Vec4 up = u;
      Vec4 down = u;
      up[k] += options.newton_step;
      down[k] -= options.newton_step;
      jacobian.col(k) = (defect(up) - defect(down)) / (2.0 * options.newton_step);
    }
    const Vec4 step = jacobian.fullPivLu().solve(-g);
    if (!step.allFinite()) break;

    // Backtracking on the infinity norm of the defect.
    double t = 1.0;
    bool accepted = false;
    const double current = g.lpNorm<Eigen::Infinity>();
    while (t > 1e-10) {
      const Vec4 trial = u + t * step;
      const Vec4 g_trial = defect(trial);
      if (g_trial.allFinite() && g_trial.lpNorm<Eigen::Infinity>() < current) {
        u = trial;
        g = g_trial;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
  }
  if (g.lpNorm<Eigen::Infinity>() <= options.tolerance) out.converged = true;
  out.x = unpack(u);
  return out;
}

}  // namespace

const char* to_string(Side s) { return s == Side::I ? "I" : "II"; }

const char* to_string(Region r) {
  switch (r) {
    case Region::I_a:
      return "I_a";
    case Region::I_b:
      return "I_b";
    case Region::II_a:
      return "II_a";
    case Region::II_b:
      return "II_b";
  }
  return "?";
}

const char* to_string(SolverMethod m) {
  switch (m) {
    case SolverMethod::fixed_point:
      return "fixed_point";
    case SolverMethod::newton:
      return "newton";
    case SolverMethod::none:
      return "none";
  }
  return "?";
}

void JunctionParams::validate() const {
  bulk_I.validate();
  bulk_II.validate();
  if (!std::isfinite(gamma) || gamma < 0.0) {
    throw InputError("gamma must be finite and non-negative");
  }
}

bool JunctionParams::strong_coupling_warning() const {
  return gamma > 0.1 * std::min(bulk_I.epsilon, bulk_II.epsilon);
}

void SolverOptions::validate() const {
  if (!(damping > 0.0 && damping <= 1.0)) throw InputError("damping must lie in (0, 1]");
  if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
    throw InputError("tolerance must be positive");
  }
  if (max_iterations == 0) throw InputError("max_iterations must be at least 1");
  if (!(newton_step > 0.0)) throw InputError("newton_step must be positive");
}

JunctionBulk solve_bulk(const JunctionParams& p) {
  p.validate();
  return {solve_gap(p.bulk_I), solve_gap(p.bulk_II)};
}

cplx boundary_field(Side side, const JunctionParams& p, const JunctionBulk& bulk,
                    const BoundaryPair& boundary) {
  return bulk[side].order_parameter() + p.gamma * boundary[other(side)];
}

Op2 region_hamiltonian(Region region, const JunctionParams& p, const JunctionBulk& bulk,
                       const BoundaryPair& boundary) {
  switch (region) {
    case Region::I_a:
      return effective_hamiltonian(p.bulk_I.epsilon, bulk.I.order_parameter());
    case Region::II_a:
      return effective_hamiltonian(p.bulk_II.epsilon, bulk.II.order_parameter());
    case Region::I_b:
      return boundary_hamiltonian(Side::I, p, bulk, boundary);
    case Region::II_b:
      return boundary_hamiltonian(Side::II, p, bulk, boundary);
  }
  throw InputError("region_hamiltonian: unknown region");
}

Op2 boundary_hamiltonian(Side side, const JunctionParams& p, const JunctionBulk& bulk,
                         const BoundaryPair& boundary) {
  return effective_hamiltonian(p.bulk(side).epsilon, boundary_field(side, p, bulk, boundary));
}

Op2 boundary_state(Side side, const JunctionParams& p, const JunctionBulk& bulk,
                   const BoundaryPair& boundary) {
  return commutant_projection(bulk[side].rho, boundary_hamiltonian(side, p, bulk, boundary));
}

BoundaryPair ness_map(const BoundaryPair& guess, const JunctionParams& p,
                      const JunctionBulk& bulk) {
  const Op2 plus = pauli(Pauli::plus);
  return {expectation(boundary_state(Side::I, p, bulk, guess), plus),
          expectation(boundary_state(Side::II, p, bulk, guess), plus)};
}

BoundaryPair closed_form_rhs(const BoundaryPair& values, const JunctionParams& p,
                             const JunctionBulk& bulk) {
  BoundaryPair out;
  for (Side s : {Side::I, Side::II}) {
    const double eps2 = p.bulk(s).epsilon * p.bulk(s).epsilon;
    const double lambda = bulk[s].lambda;
    const double phi = p.bulk(s).phi;
    const cplx field = boundary_field(s, p, bulk, values);
    const double modulus = std::abs(field);
    const double phase = std::arg(field);
    // tanh(beta mu)/(2 mu): the bulk polarization scale, identically 1 on the
    // superconducting branch where the closed form is usually quoted.
    const double kappa = std::tanh(p.bulk(s).beta * bulk[s].mu) / (2.0 * bulk[s].mu);
    out[s] = field * kappa * (eps2 + lambda * modulus * std::cos(phi - phase)) /
             (eps2 + modulus * modulus);
  }
  return out;
}

NessSolution solve_ness(const JunctionParams& p, const SolverOptions& options) {
  p.validate();
  options.validate();

  NessSolution sol;
  sol.params = p;
  sol.bulk = solve_bulk(p);
  const JunctionBulk& bulk = sol.bulk;

  BoundaryPair x = options.seed.value_or(BoundaryPair{bulk.I.order_parameter(),
                                                      bulk.II.order_parameter()});
  BoundaryPair best = x;
  double best_residual = pair_distance(x, ness_map(x, p, bulk));
  bool converged = false;

  if (!options.newton_only) {
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
      const BoundaryPair mapped = ness_map(x, p, bulk);
      const double residual = pair_distance(x, mapped);
      if (!finite(mapped)) break;
      if (residual < best_residual) {
        best_residual = residual;
        best = x;
      }
      const BoundaryPair next{x.I + options.damping * (mapped.I - x.I),
                              x.II + options.damping * (mapped.II - x.II)};
      const double change = pair_distance(next, x);
      x = next;
      ++sol.iterations;
      if (change < options.tolerance) {
        converged = true;
        sol.method = SolverMethod::fixed_point;
        break;
      }
    }
    if (converged) {
      // One undamped step when it does not hurt: it locks arg(L) to arg(F) exactly.
      const BoundaryPair polished = ness_map(x, p, bulk);
      if (pair_distance(polished, ness_map(polished, p, bulk)) <=
          pair_distance(x, ness_map(x, p, bulk))) {
        x = polished;
      }
    } else if (finite(x) && pair_distance(x, ness_map(x, p, bulk)) < best_residual) {
      best = x;
    }
  }

  if (!converged) {
    const NewtonResult newton = newton_solve(options.newton_only ? x : best, p, bulk, options);
    sol.iterations += newton.iterations;
    x = newton.x;
    converged = newton.converged;
    sol.method = converged ? SolverMethod::newton : SolverMethod::none;
    if (!finite(x)) x = best;
  }

  sol.lambda_bulk_I = bulk.I.lambda;
  sol.lambda_bulk_II = bulk.II.lambda;
  sol.Lambda_b_I = x.I;
  sol.Lambda_b_II = x.II;
  sol.field_I = boundary_field(Side::I, p, bulk, x);
  sol.field_II = boundary_field(Side::II, p, bulk, x);
  sol.mu_t_I = std::hypot(p.bulk_I.epsilon, std::abs(sol.field_I));
  sol.mu_t_II = std::hypot(p.bulk_II.epsilon, std::abs(sol.field_II));
  sol.rho_b_I = boundary_state(Side::I, p, bulk, x);
  sol.rho_b_II = boundary_state(Side::II, p, bulk, x);
  sol.fixed_point_residual = pair_distance(x, ness_map(x, p, bulk));
  sol.steady_residual = verify_steady(sol, p);
  sol.residual = std::max(sol.fixed_point_residual, sol.steady_residual);
  sol.converged = converged && std::isfinite(sol.residual);
  return sol;
}

double verify_steady(const NessSolution& sol, const JunctionParams& p) {
  const JunctionBulk bulk = solve_bulk(p);
  const BoundaryPair boundary = sol.boundary();
  const Op2 plus = pauli(Pauli::plus);

  auto defect = [&](Region region, const Op2& rho, cplx order_parameter) {
    const Op2 h = region_hamiltonian(region, p, bulk, boundary);
    return commutator(h, rho).max_norm() + std::abs(order_parameter - expectation(rho, plus));
  };

  double out = 0.0;
  out = std::max(out, defect(Region::I_a, bulk.I.rho, bulk.I.order_parameter()));
  out = std::max(out, defect(Region::II_a, bulk.II.rho, bulk.II.order_parameter()));
  out = std::max(out, defect(Region::I_b, sol.rho_b_I, sol.Lambda_b_I));
  out = std::max(out, defect(Region::II_b, sol.rho_b_II, sol.Lambda_b_II));
  return out;
}

JunctionParams gauge_shift(const JunctionParams& p, double delta) {
  JunctionParams out = p;
  out.bulk_I.phi += delta;
  out.bulk_II.phi += delta;
  return out;
}

JunctionParams swap_sides(const JunctionParams& p) {
  JunctionParams out = p;
  std::swap(out.bulk_I, out.bulk_II);
  return out;
}

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

}  // namespace josephson
