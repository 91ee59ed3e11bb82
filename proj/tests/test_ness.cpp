#include <cmath>
#include <numbers>

#include "doctest.h"
#include "josephson/errors.hpp"
#include "josephson/ness.hpp"
#include "support.hpp"

using namespace josephson;
using testing::Gen;

namespace {

JunctionParams make(double eI, double eII, double beta, double gamma, double phiI, double phiII) {
  JunctionParams p;
  p.bulk_I = {eI, beta, phiI};
  p.bulk_II = {eII, beta, phiII};
  p.gamma = gamma;
  return p;
}

// Reference boundary fixed points from tests/oracles/mean_field_oracle.py.
struct NessReference {
  JunctionParams p;
  cplx L_I, L_II;
  double mu_I, mu_II;
};

const NessReference kNess[] = {
    {make(0.3, 0.3, 1e4, 1e-3, 0.0, -0.5), {0.40012624408553963, -0.00019155492321005604},
     {0.35123565068639273, -0.19166263482013324}, 0.5002810696214649, 0.5002810696214649},
    {make(0.3, 0.2, 1e4, 1e-2, 0.4, -1.1), {0.37029207675199081, 0.15160022747338297},
     {0.21142598929624021, -0.40661575287596325}, 0.50031204715385902, 0.50031703785669003},
    {make(0.2, 0.3, 1e4, 1e-4, 1.0, 2.5), {0.24756429072566791, 0.38563238513339204},
     {-0.32043102313716729, 0.2394261755567243}, 0.50000259904839705, 0.50000259854840485},
    {make(0.3, 0.35, 5.0, 0.05, 0.0, -2.0), {0.38817774508842251, -0.016103156972176486},
     {-0.12610598265669102, -0.31915487176561938}, 0.48808559400552436, 0.48800062889373388},
};

}  // namespace

TEST_CASE("boundary fixed point against high-precision references") {
  for (const auto& ref : kNess) {
    CAPTURE(ref.p.gamma);
    const NessSolution s = solve_ness(ref.p);
    REQUIRE(s.converged);
    CHECK(std::abs(s.Lambda_b_I - ref.L_I) < 1e-13);
    CHECK(std::abs(s.Lambda_b_II - ref.L_II) < 1e-13);
    CHECK(std::abs(s.mu_t_I - ref.mu_I) < 1e-13);
    CHECK(std::abs(s.mu_t_II - ref.mu_II) < 1e-13);
    CHECK(s.residual < 1e-12);
  }
}

TEST_CASE("zero coupling echoes the bulk") {
  const JunctionParams p = make(0.3, 0.2, 1e4, 0.0, 0.7, -0.4);
  const NessSolution s = solve_ness(p);
  REQUIRE(s.converged);
  CHECK(std::abs(s.Lambda_b_I - s.bulk.I.order_parameter()) < 1e-14);
  CHECK(std::abs(s.Lambda_b_II - s.bulk.II.order_parameter()) < 1e-14);
  CHECK(std::abs(s.mu_t_I - s.bulk.I.mu) < 1e-14);
  CHECK((s.rho_b_I - s.bulk.I.rho).max_norm() < 1e-14);
}

TEST_CASE("normal plates stay normal") {
  const NessSolution s = solve_ness(make(0.6, 0.7, 1e4, 1e-2, 0.0, 1.0));
  REQUIRE(s.converged);
  CHECK(s.Lambda_b_I == cplx{});
  CHECK(s.Lambda_b_II == cplx{});
  CHECK(s.mu_t_I == doctest::Approx(0.6));
}

TEST_CASE("one normal plate") {
  const NessSolution s = solve_ness(make(0.3, 0.6, 1e4, 1e-2, 0.0, 0.0));
  REQUIRE(s.converged);
  CHECK(std::abs(s.Lambda_b_II) > 0.0);
  CHECK(s.residual < 1e-12);
  const BoundaryPair rhs = closed_form_rhs(s.boundary(), s.params, s.bulk);
  CHECK(std::abs(rhs.I - s.Lambda_b_I) < 1e-12);
  CHECK(std::abs(rhs.II - s.Lambda_b_II) < 1e-12);
}

TEST_CASE("projection map agrees with the closed form off the fixed point") {
  Gen gen(7);
  const JunctionParams p = make(0.3, 0.2, 7.0, 0.03, 0.1, -0.9);
  const JunctionBulk bulk = solve_bulk(p);
  for (int k = 0; k < 100; ++k) {
    const BoundaryPair guess{gen.complex(0.5), gen.complex(0.5)};
    const BoundaryPair a = ness_map(guess, p, bulk);
    const BoundaryPair b = closed_form_rhs(guess, p, bulk);
    CHECK(std::abs(a.I - b.I) < 1e-14);
    CHECK(std::abs(a.II - b.II) < 1e-14);
  }
}

TEST_CASE("steady-state residual detects a perturbed solution") {
  const JunctionParams p = make(0.3, 0.3, 1e4, 1e-3, 0.0, -0.5);
  NessSolution s = solve_ness(p);
  CHECK(verify_steady(s, p) < 1e-12);
  s.Lambda_b_I += cplx(1e-6, 0.0);
  CHECK(verify_steady(s, p) > 1e-7);
}

TEST_CASE("Newton path") {
  const JunctionParams p = make(0.3, 0.2, 1e4, 1e-2, 0.3, -1.3);
  SolverOptions newton;
  newton.newton_only = true;
  const NessSolution a = solve_ness(p);
  const NessSolution b = solve_ness(p, newton);
  REQUIRE(b.converged);
  CHECK(b.method == SolverMethod::newton);
  CHECK(a.method == SolverMethod::fixed_point);
  CHECK(std::abs(a.Lambda_b_I - b.Lambda_b_I) < 1e-13);
  CHECK(std::abs(a.Lambda_b_II - b.Lambda_b_II) < 1e-13);
  CHECK(b.residual < 1e-12);
}

TEST_CASE("fixed point falls back to Newton when the iteration budget runs out") {
  const JunctionParams p = make(0.3, 0.2, 1e4, 1e-2, 0.3, -1.3);
  SolverOptions options;
  options.max_iterations = 3;
  const NessSolution s = solve_ness(p, options);
  CHECK(s.converged);
  CHECK(s.method == SolverMethod::newton);
}

TEST_CASE("non-convergence is reported, not thrown") {
  const JunctionParams p = make(0.3, 0.2, 1e4, 1e-2, 0.3, -1.3);
  SolverOptions options;
  options.max_iterations = 1;
  options.newton_max_iterations = 0;
  NessSolution s;
  CHECK_NOTHROW(s = solve_ness(p, options));
  CHECK_FALSE(s.converged);
  CHECK(s.method == SolverMethod::none);
}

TEST_CASE("strong coupling near antiphase either converges or says so") {
  for (double g : {0.1, 0.2, 0.3}) {
    const JunctionParams p = make(0.3, 0.3, 1e4, g, 0.0, -3.1);
    CHECK(p.strong_coupling_warning());
    const NessSolution s = solve_ness(p);
    CAPTURE(g);
    if (s.converged) {
      CHECK(verify_steady(s, p) < 1e-12);
    } else {
      CHECK(s.residual > 1e-12);
    }
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(solve_ness(make(0.3, 0.3, 1e4, -1e-3, 0.0, 0.0)), InputError);
  CHECK_THROWS_AS(solve_ness(make(0.3, -0.3, 1e4, 1e-3, 0.0, 0.0)), InputError);
  SolverOptions bad;
  bad.damping = 0.0;
  CHECK_THROWS_AS(solve_ness(make(0.3, 0.3, 1e4, 1e-3, 0.0, 0.0), bad), InputError);
  bad = {};
  bad.tolerance = -1.0;
  CHECK_THROWS_AS(solve_ness(make(0.3, 0.3, 1e4, 1e-3, 0.0, 0.0), bad), InputError);
  CHECK_FALSE(make(0.3, 0.3, 1e4, 1e-3, 0.0, 0.0).strong_coupling_warning());
}

TEST_CASE("symmetries on random parameters") {
  Gen gen(2024);
  for (int k = 0; k < 60; ++k) {
    const JunctionParams p = make(gen.uniform(0.05, 0.45), gen.uniform(0.05, 0.45),
                                  std::exp(gen.uniform(std::log(20.0), std::log(1e4))),
                                  gen.uniform(0.0, 0.02), gen.uniform(-3.0, 3.0),
                                  gen.uniform(-3.0, 3.0));
    const NessSolution s = solve_ness(p);
    REQUIRE(s.converged);
    CHECK(s.residual < 1e-12);

    const NessSolution swapped = solve_ness(swap_sides(p));
    CHECK(std::abs(swapped.Lambda_b_I - s.Lambda_b_II) < 1e-12);
    CHECK(std::abs(swapped.Lambda_b_II - s.Lambda_b_I) < 1e-12);

    const double delta = gen.uniform(-4.0, 4.0);
    const NessSolution shifted = solve_ness(gauge_shift(p, delta));
    CHECK(std::abs(shifted.Lambda_b_I - std::polar(1.0, delta) * s.Lambda_b_I) < 1e-12);
    CHECK(std::abs(shifted.Lambda_b_II - std::polar(1.0, delta) * s.Lambda_b_II) < 1e-12);
    CHECK(std::abs(shifted.mu_t_I - s.mu_t_I) < 1e-12);
  }
}

TEST_CASE("angle wrapping") {
  constexpr double pi = std::numbers::pi;
  CHECK(wrap_angle(pi) == doctest::Approx(pi));
  CHECK(wrap_angle(-pi) == doctest::Approx(pi));
  CHECK(wrap_angle(3.0 * pi / 2.0) == doctest::Approx(-pi / 2.0));
  CHECK(wrap_angle(0.25) == 0.25);
}

TEST_CASE("region Hamiltonians") {
  const JunctionParams p = make(0.3, 0.2, 1e4, 1e-3, 0.4, -0.2);
  const NessSolution s = solve_ness(p);
  const BoundaryPair b = s.boundary();
  CHECK((region_hamiltonian(Region::I_a, p, s.bulk, b) -
         effective_hamiltonian(0.3, s.bulk.I.order_parameter()))
            .max_norm() == 0.0);
  CHECK((region_hamiltonian(Region::II_b, p, s.bulk, b) - boundary_hamiltonian(Side::II, p, s.bulk, b))
            .max_norm() == 0.0);
  CHECK(std::abs(boundary_field(Side::I, p, s.bulk, b) -
                 (s.bulk.I.order_parameter() + p.gamma * b.II)) == 0.0);
}
