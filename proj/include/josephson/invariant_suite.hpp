#pragma once

// Built-in invariant checks over the standard parameter grid, grouped by module.

#include <string>
#include <string_view>
#include <vector>

#include "josephson/finite_n.hpp"
#include "josephson/ness.hpp"

namespace josephson {

struct CheckResult {
  std::string group;
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool pass = false;
  bool informational = false;  // reported, never fails the suite
};

struct SuiteOptions {
  std::string only;  // group name, empty for all
  SolverOptions solver;
  std::size_t dimension_cap = kDefaultDimensionCap;
};

/// spin-algebra, gap, ness, gauge, observables, perturbation, finite-n
const std::vector<std::string>& suite_groups();

/// Standard grid: eps in {0.2, 0.3} per plate, beta = 1e4,
/// gamma in {1e-4, 1e-3, 1e-2}, 17 phase differences over [-pi/2, pi/2].
std::vector<double> standard_phase_grid();
const std::vector<double>& standard_epsilons();
const std::vector<double>& standard_gammas();
inline constexpr double kStandardBeta = 1e4;

/// phi_I = 0, phi_II = -delta_phi.
JunctionParams standard_params(double eps_I, double eps_II, double gamma, double delta_phi);

/// Throws InputError for an unknown group filter.
std::vector<CheckResult> run_invariant_suite(const SuiteOptions& options);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace josephson
