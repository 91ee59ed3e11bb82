#pragma once

// Run configuration, parameter sweeps and CSV/JSON emission of sweep rows.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "josephson/finite_n.hpp"
#include "josephson/ness.hpp"

namespace josephson {

enum class SweepAxis { delta_phi, gamma, beta_I, beta_II, epsilon_I, epsilon_II };
enum class OutputFormat { csv, json };

SweepAxis parse_axis(std::string_view s);
OutputFormat parse_format(std::string_view s);
const char* to_string(SweepAxis a);
const char* to_string(OutputFormat f);

struct Grid {
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 1;

  /// count evenly spaced points, endpoints included; count = 1 gives {start}.
  std::vector<double> values() const;
};

/// Optional starting point for the boundary solver. The seed for plate s is
/// lambda e^{i(phi_s + phi)}, lambda defaulting to the bulk value.
struct SeedOverride {
  std::optional<double> lambda;
  std::optional<double> phi;

  bool active() const { return lambda.has_value() || phi.has_value(); }
};

struct OracleSettings {
  std::size_t n = 2;
  std::size_t memory_cap = kDefaultDimensionCap * 16;  // bytes, one complex amplitude per state

  LatticeSpec lattice() const { return {n, memory_cap / 16}; }
};

struct RunConfig {
  JunctionParams params;
  SweepAxis axis = SweepAxis::delta_phi;
  Grid grid;
  std::string output;  // empty: stdout
  OutputFormat format = OutputFormat::csv;
  SolverOptions solver;
  SeedOverride seed;
  OracleSettings oracle;

  /// Throws InputError on count = 0, non-positive tolerances or invalid parameters.
  void validate() const;
};

/// Reads the JSON document layout of RunConfig. Unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& doc, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// Caps the fixed-point iterations at `cap` and the Newton fallback at min(its default, cap).
void cap_iterations(SolverOptions& options, std::size_t cap);

/// Parameters of one grid point. delta_phi sets phi_II = phi_I - value.
JunctionParams point_params(const RunConfig& cfg, double value);
SolverOptions point_solver(const RunConfig& cfg, const JunctionParams& p);

struct SweepRow {
  JunctionParams params;
  double lambda_I = 0.0;
  double lambda_II = 0.0;
  double lambda_t_I = 0.0;
  double lambda_t_II = 0.0;
  double phi_t_I = 0.0;
  double phi_t_II = 0.0;
  double mu_t_I = 0.0;
  double mu_t_II = 0.0;
  double current = 0.0;
  double nu_t_I = 0.0;
  double nu_t_II = 0.0;
  double ccr_defect_I = 0.0;
  double ccr_defect_II = 0.0;
  double residual = 0.0;
  bool converged = false;
};

inline constexpr std::string_view kSweepHeader =
    "epsilon_I,epsilon_II,beta_I,beta_II,gamma,phi_I,phi_II,lambda_I,lambda_II,lambda_t_I,"
    "lambda_t_II,phi_t_I,phi_t_II,mu_t_I,mu_t_II,current,nu_t_I,nu_t_II,ccr_defect_I,"
    "ccr_defect_II,residual,converged";

SweepRow compute_row(const JunctionParams& p, const SolverOptions& options);

/// One row per grid point in grid order. Rows are computed concurrently.
std::vector<SweepRow> run_sweep(const RunConfig& cfg);

/// 17 significant digits, '.' separator, independent of the global locale.
std::string format_number(double v);

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);
void write_json(std::ostream& os, const std::vector<SweepRow>& rows);
void write_rows(std::ostream& os, const std::vector<SweepRow>& rows, OutputFormat format);

}  // namespace josephson
