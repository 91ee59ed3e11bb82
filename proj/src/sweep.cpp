#include "josephson/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <cmath>
#include <fstream>
#include <ostream>
#include <thread>

#include "josephson/errors.hpp"
#include "josephson/observables.hpp"

namespace josephson {

namespace {

using nlohmann::json;

double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw InputError("config: '" + key + "' must be a number");
  return v.get<double>();
}

std::size_t count(const json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw InputError("config: '" + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::string text(const json& v, const std::string& key) {
  if (!v.is_string()) throw InputError("config: '" + key + "' must be a string");
  return v.get<std::string>();
}

void require_object(const json& v, const std::string& key) {
  if (!v.is_object()) throw InputError("config: '" + key + "' must be an object");
}

}  // namespace

SweepAxis parse_axis(std::string_view s) {
  if (s == "delta_phi") return SweepAxis::delta_phi;
  if (s == "gamma") return SweepAxis::gamma;
  if (s == "beta_I") return SweepAxis::beta_I;
  if (s == "beta_II") return SweepAxis::beta_II;
  if (s == "epsilon_I") return SweepAxis::epsilon_I;
  if (s == "epsilon_II") return SweepAxis::epsilon_II;
  throw InputError("unknown sweep axis '" + std::string(s) + "'");
}

OutputFormat parse_format(std::string_view s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw InputError("unknown output format '" + std::string(s) + "'");
}

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::delta_phi: return "delta_phi";
    case SweepAxis::gamma: return "gamma";
    case SweepAxis::beta_I: return "beta_I";
    case SweepAxis::beta_II: return "beta_II";
    case SweepAxis::epsilon_I: return "epsilon_I";
    case SweepAxis::epsilon_II: return "epsilon_II";
  }
  return "?";
}

const char* to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

std::vector<double> Grid::values() const {
  std::vector<double> out;
  out.reserve(count);
  if (count == 1) {
    out.push_back(start);
    return out;
  }
  const double step = (stop - start) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(k + 1 == count ? stop : start + static_cast<double>(k) * step);
  }
  return out;
}

void RunConfig::validate() const {
  params.validate();
  solver.validate();
  if (grid.count < 1) throw InputError("grid count must be at least 1");
  if (!std::isfinite(grid.start) || !std::isfinite(grid.stop)) {
    throw InputError("grid endpoints must be finite");
  }
  if (seed.lambda && !(*seed.lambda >= 0.0 && std::isfinite(*seed.lambda))) {
    throw InputError("seed lambda must be finite and non-negative");
  }
  if (seed.phi && !std::isfinite(*seed.phi)) throw InputError("seed phi must be finite");
  if (oracle.n < 1) throw InputError("oracle N must be at least 1");
  if (oracle.memory_cap < 16) throw InputError("memory cap must be at least 16 bytes");
  for (double v : grid.values()) point_params(*this, v).validate();
}

RunConfig config_from_json(const json& doc, RunConfig cfg) {
  require_object(doc, "<root>");
  for (const auto& [key, v] : doc.items()) {
    if (key == "epsilon_I") cfg.params.bulk_I.epsilon = number(v, key);
    else if (key == "epsilon_II") cfg.params.bulk_II.epsilon = number(v, key);
    else if (key == "beta_I") cfg.params.bulk_I.beta = number(v, key);
    else if (key == "beta_II") cfg.params.bulk_II.beta = number(v, key);
    else if (key == "phi_I") cfg.params.bulk_I.phi = number(v, key);
    else if (key == "phi_II") cfg.params.bulk_II.phi = number(v, key);
    else if (key == "gamma") cfg.params.gamma = number(v, key);
    else if (key == "axis") cfg.axis = parse_axis(text(v, key));
    else if (key == "grid") {
      require_object(v, key);
      for (const auto& [gk, gv] : v.items()) {
        if (gk == "start") cfg.grid.start = number(gv, gk);
        else if (gk == "stop") cfg.grid.stop = number(gv, gk);
        else if (gk == "count") cfg.grid.count = count(gv, gk);
        else throw InputError("config: unknown key 'grid." + gk + "'");
      }
    } else if (key == "output") cfg.output = text(v, key);
    else if (key == "format") cfg.format = parse_format(text(v, key));
    else if (key == "solver") {
      require_object(v, key);
      for (const auto& [sk, sv] : v.items()) {
        if (sk == "damping") cfg.solver.damping = number(sv, sk);
        else if (sk == "tolerance") cfg.solver.tolerance = number(sv, sk);
        else if (sk == "max_iterations") cap_iterations(cfg.solver, count(sv, sk));
        else if (sk == "seed_lambda") cfg.seed.lambda = number(sv, sk);
        else if (sk == "seed_phi") cfg.seed.phi = number(sv, sk);
        else throw InputError("config: unknown key 'solver." + sk + "'");
      }
    } else if (key == "oracle") {
      require_object(v, key);
      for (const auto& [ok, ov] : v.items()) {
        if (ok == "n") cfg.oracle.n = count(ov, ok);
        else if (ok == "memory_cap") cfg.oracle.memory_cap = count(ov, ok);
        else throw InputError("config: unknown key 'oracle." + ok + "'");
      }
    } else {
      throw InputError("config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("config file '" + path + "': " + e.what());
  }
  return config_from_json(doc, std::move(base));
}

void cap_iterations(SolverOptions& options, std::size_t cap) {
  options.max_iterations = cap;
  options.newton_max_iterations = std::min(options.newton_max_iterations, cap);
}

JunctionParams point_params(const RunConfig& cfg, double value) {
  JunctionParams p = cfg.params;
  switch (cfg.axis) {
    case SweepAxis::delta_phi: p.bulk_II.phi = p.bulk_I.phi - value; break;
    case SweepAxis::gamma: p.gamma = value; break;
    case SweepAxis::beta_I: p.bulk_I.beta = value; break;
    case SweepAxis::beta_II: p.bulk_II.beta = value; break;
    case SweepAxis::epsilon_I: p.bulk_I.epsilon = value; break;
    case SweepAxis::epsilon_II: p.bulk_II.epsilon = value; break;
  }
  return p;
}

SolverOptions point_solver(const RunConfig& cfg, const JunctionParams& p) {
  SolverOptions options = cfg.solver;
  if (cfg.seed.active()) {
    const JunctionBulk bulk = solve_bulk(p);
    const double shift = cfg.seed.phi.value_or(0.0);
    options.seed = BoundaryPair{
        std::polar(cfg.seed.lambda.value_or(bulk.I.lambda), p.bulk_I.phi + shift),
        std::polar(cfg.seed.lambda.value_or(bulk.II.lambda), p.bulk_II.phi + shift)};
  }
  return options;
}

SweepRow compute_row(const JunctionParams& p, const SolverOptions& options) {
  const NessSolution sol = solve_ness(p, options);
  SweepRow row;
  row.params = p;
  row.lambda_I = sol.lambda_bulk_I;
  row.lambda_II = sol.lambda_bulk_II;
  row.lambda_t_I = sol.lambda_t(Side::I);
  row.lambda_t_II = sol.lambda_t(Side::II);
  row.phi_t_I = sol.phi_t(Side::I);
  row.phi_t_II = sol.phi_t(Side::II);
  row.mu_t_I = sol.mu_t_I;
  row.mu_t_II = sol.mu_t_II;
  row.current = josephson_current(sol, p.gamma).j;
  const FrequencyPair nu = goldstone_frequencies(sol);
  row.nu_t_I = nu.I;
  row.nu_t_II = nu.II;
  row.ccr_defect_I = ccr_defect(goldstone_operators(Side::I, sol));
  row.ccr_defect_II = ccr_defect(goldstone_operators(Side::II, sol));
  row.residual = sol.residual;
  row.converged = sol.converged;
  return row;
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg) {
  cfg.validate();
  const std::vector<double> values = cfg.grid.values();
  std::vector<SweepRow> rows(values.size());
  std::vector<std::exception_ptr> failures(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < values.size(); k = next++) {
      try {
        const JunctionParams p = point_params(cfg, values[k]);
        rows[k] = compute_row(p, point_solver(cfg, p));
      } catch (...) {
        failures[k] = std::current_exception();
      }
    }
  };
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, values.size());
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return rows;
}

std::string format_number(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (ec != std::errc{}) throw std::runtime_error("format_number: buffer too small");
  return std::string(buf, end);
}

namespace {

std::vector<std::string> row_fields(const SweepRow& r) {
  const JunctionParams& p = r.params;
  std::vector<std::string> out;
  for (double v : {p.bulk_I.epsilon, p.bulk_II.epsilon, p.bulk_I.beta, p.bulk_II.beta, p.gamma,
                   p.bulk_I.phi, p.bulk_II.phi, r.lambda_I, r.lambda_II, r.lambda_t_I,
                   r.lambda_t_II, r.phi_t_I, r.phi_t_II, r.mu_t_I, r.mu_t_II, r.current, r.nu_t_I,
                   r.nu_t_II, r.ccr_defect_I, r.ccr_defect_II, r.residual}) {
    out.push_back(format_number(v));
  }
  out.push_back(r.converged ? "1" : "0");
  return out;
}

std::vector<std::string_view> header_fields() {
  std::vector<std::string_view> out;
  std::string_view rest = kSweepHeader;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(rest.substr(0, comma));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

// JSON has no literal for non-finite numbers.
std::string json_value(const std::string& s) {
  if (s == "nan" || s == "-nan" || s == "inf" || s == "-inf") return "null";
  return s;
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kSweepHeader << '\n';
  for (const SweepRow& r : rows) {
    const auto fields = row_fields(r);
    for (std::size_t k = 0; k < fields.size(); ++k) os << (k ? "," : "") << fields[k];
    os << '\n';
  }
}

void write_json(std::ostream& os, const std::vector<SweepRow>& rows) {
  const auto names = header_fields();
  os << '[';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto fields = row_fields(rows[i]);
    os << (i ? ",\n " : "\n ") << '{';
    for (std::size_t k = 0; k < fields.size(); ++k) {
      os << (k ? "," : "") << '"' << names[k] << "\":";
      if (names[k] == "converged") {
        os << (rows[i].converged ? "true" : "false");
      } else {
        os << json_value(fields[k]);
      }
    }
    os << '}';
  }
  os << (rows.empty() ? "]\n" : "\n]\n");
}

void write_rows(std::ostream& os, const std::vector<SweepRow>& rows, OutputFormat format) {
  if (format == OutputFormat::csv) {
    write_csv(os, rows);
  } else {
    write_json(os, rows);
  }
}

}  // namespace josephson
