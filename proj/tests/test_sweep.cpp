#include <clocale>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "josephson/errors.hpp"
#include "josephson/sweep.hpp"
#include "support.hpp"

using namespace josephson;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, sep)) out.push_back(field);
  return out;
}

RunConfig phase_sweep(std::size_t count) {
  RunConfig cfg;
  cfg.params.gamma = 1e-3;
  cfg.axis = SweepAxis::delta_phi;
  cfg.grid = {-0.5 * kPi, 0.5 * kPi, count};
  return cfg;
}

std::string csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  write_csv(out, rows);
  return out.str();
}

}  // namespace

TEST_CASE("grid values") {
  CHECK(Grid{0.3, 9.0, 1}.values() == std::vector<double>{0.3});
  const auto v = Grid{-1.0, 1.0, 5}.values();
  CHECK(v == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
  CHECK(Grid{0.0, 1.0, 0}.values().empty());
}

TEST_CASE("axis parsing") {
  CHECK(parse_axis("delta_phi") == SweepAxis::delta_phi);
  CHECK(parse_axis("epsilon_II") == SweepAxis::epsilon_II);
  CHECK_THROWS_AS(parse_axis("phi"), InputError);
  CHECK(parse_format("json") == OutputFormat::json);
  CHECK_THROWS_AS(parse_format("xml"), InputError);
}

TEST_CASE("grid point parameters") {
  RunConfig cfg;
  cfg.params.bulk_I.phi = 0.4;
  cfg.axis = SweepAxis::delta_phi;
  const JunctionParams p = point_params(cfg, 1.0);
  CHECK(p.bulk_I.phi == 0.4);
  CHECK(p.bulk_II.phi == doctest::Approx(-0.6));
  cfg.axis = SweepAxis::beta_II;
  CHECK(point_params(cfg, 7.0).bulk_II.beta == 7.0);
  cfg.axis = SweepAxis::gamma;
  CHECK(point_params(cfg, 0.02).gamma == 0.02);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(10000.0) == "10000");
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-2.5e-7) == "-2.4999999999999999e-07");
  testing::Gen gen(9);
  for (int k = 0; k < 1000; ++k) {
    const double x = gen.uniform(-1.0, 1.0) * std::pow(10.0, gen.uniform(-20.0, 20.0));
    CHECK(std::strtod(format_number(x).c_str(), nullptr) == x);
  }
}

TEST_CASE("number formatting ignores the C locale") {
  const char* candidates[] = {"de_DE.UTF-8", "de_DE.utf8", "fr_FR.UTF-8", "C.UTF-8"};
  for (const char* name : candidates) {
    if (std::setlocale(LC_ALL, name) != nullptr) break;
  }
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(1234.25) == "1234.25");
  std::setlocale(LC_ALL, "C");
}

TEST_CASE("CSV layout") {
  const auto rows = run_sweep(phase_sweep(5));
  const std::string text = csv(rows);
  CHECK(text.find('\r') == std::string::npos);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == kSweepHeader);
  CHECK(split(line, ',').size() == 22);
  int count = 0;
  while (std::getline(in, line)) {
    const auto fields = split(line, ',');
    CHECK(fields.size() == 22);
    CHECK(fields.back() == "1");
    ++count;
  }
  CHECK(count == 5);
}

TEST_CASE("rows follow grid order and carry solver output") {
  const auto rows = run_sweep(phase_sweep(9));
  REQUIRE(rows.size() == 9);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double d = -0.5 * kPi + kPi * static_cast<double>(k) / 8.0;
    CHECK(rows[k].params.bulk_II.phi == doctest::Approx(-d).epsilon(1e-15));
    CHECK(rows[k].converged);
    CHECK(rows[k].residual < 1e-12);
    CHECK(rows[k].lambda_I == doctest::Approx(0.4));
  }
  CHECK(rows.front().current > 0.0);
  CHECK(rows.back().current < 0.0);
}

TEST_CASE("single-point sweep") {
  RunConfig cfg = phase_sweep(1);
  CHECK(run_sweep(cfg).size() == 1);
}

TEST_CASE("frequency columns are even under grid reflection") {
  const auto rows = run_sweep(phase_sweep(33));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& mirror = rows[rows.size() - 1 - k];
    CHECK(std::abs(rows[k].nu_t_I - mirror.nu_t_I) < 1e-11);
    CHECK(std::abs(rows[k].nu_t_II - mirror.nu_t_II) < 1e-11);
    CHECK(std::abs(rows[k].current + mirror.current) < 1e-15);
  }
}

TEST_CASE("sweeps are byte-identical across runs") {
  RunConfig cfg = phase_sweep(33);
  cfg.params.bulk_II.epsilon = 0.2;
  CHECK(csv(run_sweep(cfg)) == csv(run_sweep(cfg)));
  std::ostringstream a;
  std::ostringstream b;
  write_json(a, run_sweep(cfg));
  write_json(b, run_sweep(cfg));
  CHECK(a.str() == b.str());
}

TEST_CASE("JSON output matches the CSV rows") {
  const auto rows = run_sweep(phase_sweep(4));
  std::ostringstream out;
  write_json(out, rows);
  const json doc = json::parse(out.str());
  REQUIRE(doc.is_array());
  REQUIRE(doc.size() == 4);
  const auto names = split(std::string(kSweepHeader), ',');
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(doc[k].size() == names.size());
    for (const auto& n : names) CHECK(doc[k].contains(n));
    CHECK(doc[k]["current"].get<double>() == rows[k].current);
    CHECK(doc[k]["phi_II"].get<double>() == rows[k].params.bulk_II.phi);
    CHECK(doc[k]["converged"].get<bool>());
  }
}

TEST_CASE("failed points are recorded, not dropped") {
  RunConfig cfg = phase_sweep(3);
  cfg.params.gamma = 1e-2;
  cfg.solver.max_iterations = 1;
  cfg.solver.newton_max_iterations = 0;
  const auto rows = run_sweep(cfg);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) CHECK_FALSE(r.converged);
  CHECK(csv(rows).find(",0\n") != std::string::npos);
}

TEST_CASE("configuration documents") {
  const json doc = json::parse(R"({
    "epsilon_I": 0.25, "epsilon_II": 0.2, "beta_I": 500, "beta_II": 600,
    "gamma": 0.002, "phi_I": 0.1, "phi_II": -0.3,
    "axis": "gamma", "grid": {"start": 0, "stop": 0.01, "count": 3},
    "output": "out.json", "format": "json",
    "solver": {"damping": 0.7, "tolerance": 1e-12, "max_iterations": 500,
               "seed_lambda": 0.3, "seed_phi": 0.2},
    "oracle": {"n": 1, "memory_cap": 4096}
  })");
  const RunConfig cfg = config_from_json(doc);
  CHECK(cfg.params.bulk_I.epsilon == 0.25);
  CHECK(cfg.params.bulk_II.beta == 600.0);
  CHECK(cfg.params.bulk_II.phi == -0.3);
  CHECK(cfg.axis == SweepAxis::gamma);
  CHECK(cfg.grid.count == 3);
  CHECK(cfg.format == OutputFormat::json);
  CHECK(cfg.output == "out.json");
  CHECK(cfg.solver.damping == 0.7);
  CHECK(cfg.solver.max_iterations == 500);
  CHECK(cfg.seed.lambda == 0.3);
  CHECK(cfg.oracle.lattice().dimension_cap == 256);
  CHECK_NOTHROW(cfg.validate());

  CHECK_THROWS_AS(config_from_json(json::parse(R"({"gama": 0.1})")), InputError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"grid": {"count": -1}})")), InputError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"gamma": "small"})")), InputError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"([1, 2])")), InputError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), InputError);
}

TEST_CASE("configuration validation") {
  RunConfig cfg;
  cfg.grid.count = 0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = {};
  cfg.solver.tolerance = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = {};
  cfg.axis = SweepAxis::epsilon_I;
  cfg.grid = {0.1, -0.1, 3};
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg = {};
  cfg.axis = SweepAxis::gamma;
  cfg.grid = {-0.01, 0.01, 3};
  CHECK_THROWS_AS(run_sweep(cfg), InputError);
}

TEST_CASE("seed override reaches the solver") {
  RunConfig cfg = phase_sweep(1);
  cfg.seed.lambda = 0.1;
  cfg.seed.phi = 0.5;
  const JunctionParams p = point_params(cfg, 0.0);
  const SolverOptions options = point_solver(cfg, p);
  REQUIRE(options.seed.has_value());
  CHECK(std::abs(options.seed->I - std::polar(0.1, 0.5)) < 1e-15);
  const SweepRow seeded = compute_row(p, options);
  const SweepRow plain = compute_row(p, cfg.solver);
  CHECK(std::abs(seeded.lambda_t_I - plain.lambda_t_I) < 1e-12);
}
