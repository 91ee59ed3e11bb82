#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string command = std::string(JOSEPHSON_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / ("josephson_cli_" + std::to_string(getpid()));
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("gap") {
  SUBCASE("superconducting") {
    const Run r = run("gap --epsilon 0.3 --beta 10000");
    REQUIRE(r.status == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["superconducting"].get<bool>());
    REQUIRE(doc["branches"].size() == 2);
    CHECK(doc["branches"][1]["lambda"].get<double>() == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(doc["criterion"].get<double>() == doctest::Approx(0.4));
  }
  SUBCASE("epsilon above one half") {
    const Run r = run("gap --epsilon 0.6 --beta 10000");
    REQUIRE(r.status == 0);
    const json doc = json::parse(r.out);
    CHECK_FALSE(doc["superconducting"].get<bool>());
    CHECK(doc["branches"].size() == 1);
  }
  SUBCASE("hot plate") {
    const json doc = json::parse(run("gap --epsilon 0.3 --beta 2").out);
    CHECK(doc["branches"].size() == 1);
    CHECK(doc["criterion"].get<double>() == doctest::Approx(std::tanh(0.6) - 0.6));
  }
  SUBCASE("usage errors") {
    CHECK(run("gap --beta 2").status == 2);
    CHECK(run("gap --epsilon abc --beta 2").status == 2);
    CHECK(run("gap --epsilon -0.3 --beta 2").status == 2);
    CHECK(run("gap --epsilon 0.3 --beta nan").status == 2);
  }
}

TEST_CASE("ness") {
  SUBCASE("zero coupling echoes the bulk") {
    const Run r = run("ness --gamma 0 --phi-II 0.7");
    REQUIRE(r.status == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["lambda_t_I"].get<double>() == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(doc["phi_t_II"].get<double>() == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(doc["current"].get<double>() == 0.0);
  }
  SUBCASE("small coupling") {
    const Run r = run("ness --gamma 1e-3 --phi-II -0.5 --epsilon-II 0.2");
    REQUIRE(r.status == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["converged"].get<bool>());
    CHECK(doc["verify_steady"].get<double>() < 1e-12);
  }
  SUBCASE("starved solver is a solver failure") {
    const Run r = run("ness --gamma 1e-2 --phi-II -3 --max-iter 1");
    CHECK(r.status == 3);
    CHECK_FALSE(json::parse(r.out)["converged"].get<bool>());
  }
  SUBCASE("negative coupling is a usage error") { CHECK(run("ness --gamma -1").status == 2); }
}

TEST_CASE("sweep") {
  const fs::path dir = scratch();
  const fs::path config = dir / "run.json";
  {
    std::ofstream out(config);
    out << R"({"gamma": 1e-3, "epsilon_II": 0.2, "axis": "delta_phi",
               "grid": {"start": -1.5707963267948966, "stop": 1.5707963267948966, "count": 17}})";
  }
  const fs::path a = dir / "a.csv";
  const fs::path b = dir / "b.csv";
  REQUIRE(run("sweep --config " + config.string() + " --output " + a.string()).status == 0);
  REQUIRE(run("sweep --config " + config.string() + " --output " + b.string()).status == 0);
  const std::string text = slurp(a);
  CHECK(text == slurp(b));
  CHECK(std::count(text.begin(), text.end(), '\n') == 18);

  SUBCASE("flags override the file") {
    const Run r = run("sweep --config " + config.string() + " --count 1 --gamma 0.002");
    REQUIRE(r.status == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 2);
    CHECK(r.out.find("\n0.29999999999999999,0.20000000000000001,10000,10000,0.002,") !=
          std::string::npos);
  }
  SUBCASE("json") {
    const Run r = run("sweep --config " + config.string() + " --format json");
    REQUIRE(r.status == 0);
    CHECK(json::parse(r.out).size() == 17);
  }
  SUBCASE("bad config") {
    CHECK(run("sweep --config " + (dir / "missing.json").string()).status == 2);
    CHECK(run("sweep --axis sideways").status == 2);
    CHECK(run("sweep --count 0").status == 2);
  }
  SUBCASE("unconverged rows flag the exit status") {
    const Run r = run("sweep --config " + config.string() + " --max-iter 1");
    CHECK(r.status == 3);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 18);
  }
  fs::remove_all(dir);
}

TEST_CASE("check") {
  SUBCASE("filtered run") {
    const Run r = run("check --only finite-n");
    CHECK(r.status == 0);
    CHECK(r.out.find("[finite-n]") != std::string::npos);
    CHECK(r.out.find("[gap]") == std::string::npos);
  }
  SUBCASE("loosened tolerance fails the dynamics check") {
    const Run r = run("check --only observables --tolerance 1e-4");
    CHECK(r.status == 1);
    CHECK(r.out.find("FAIL  [observables] Goldstone oscillator") != std::string::npos);
  }
  SUBCASE("unknown group") { CHECK(run("check --only everything").status == 2); }
}

TEST_CASE("finite-n") {
  const Run r = run("finite-n --n 1 --gamma 1e-3 --phi-II -0.7");
  REQUIRE(r.status == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["current_defect"].get<double>() < 1e-12);
  CHECK(doc["commutator_identity_defect"].get<double>() < 1e-13);
  CHECK(run("finite-n --n 2").status == 0);
  CHECK(run("finite-n --n 4").status == 4);
  CHECK(run("finite-n --n 2 --memory-cap 1024").status == 4);
}

TEST_CASE("command line plumbing") {
  CHECK(run("").status == 2);
  CHECK(run("frobnicate").status == 2);
  CHECK(run("--help").status == 0);
  CHECK(run("gap --epsilon 0.3 --beta 1e4 --format xml").status == 2);
}
