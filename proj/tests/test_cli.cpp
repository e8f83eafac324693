#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "blowup/error.hpp"
#include "doctest.h"
#include "json.hpp"
#include "lab/config.hpp"
#include "lab/output.hpp"
#include "lab/run.hpp"

namespace fs = std::filesystem;
using namespace lab;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("blowup_lab_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ExperimentConfig small() {
  ExperimentConfig c;
  c.n_r = 16;
  c.n_theta = 16;
  c.truncation = {20.0, 40.0};
  c.lens_samples = 8;
  c.samples_per_decade = 4;
  return c;
}

int run_quiet(const std::string& command, const ExperimentConfig& cfg, const fs::path& out) {
  std::ostringstream log;
  return run(command, cfg, out, log);
}

int exe(const std::string& args) {
  const std::string cmd = std::string(BLOWUP_LAB_EXE) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void expect_error_at(const std::string& text, int line, int column) {
  try {
    parse_config(text);
    FAIL("expected a config error");
  } catch (const blowup::ConfigError& e) {
    CAPTURE(e.what());
    CHECK(e.line() == line);
    CHECK(e.column() == column);
  }
}

}  // namespace

TEST_CASE("config round trip") {
  const ExperimentConfig defaults;
  CHECK(parse_config(serialize_config(defaults)) == defaults);

  ExperimentConfig c = small();
  c.family = "oscillatory_power";
  c.q = 0.1 + 0.2;  // not exactly representable in short decimal
  c.t0 = 12.5;
  c.gamma = 2.0;
  c.lambdas = {0.25, 1.0 / 3.0};
  c.refine = false;
  c.exponent = "half";
  c.dir = "results/run 1";
  const std::string text = serialize_config(c);
  const ExperimentConfig back = parse_config(text);
  CHECK(back == c);
  CHECK(serialize_config(back) == text);
}

TEST_CASE("config grammar") {
  const auto c = parse_config(
      "# comment\n"
      "; another\n"
      "[nonlinearity]\n"
      "  family = exponential   \n"
      "alpha=2\n"
      "\n"
      "[pde]\n"
      "truncation = 10, 20 ,30\n");
  CHECK(c.family == "exponential");
  CHECK(c.alpha == 2.0);
  CHECK(c.truncation == std::vector<double>{10.0, 20.0, 30.0});
  CHECK(c.q == ExperimentConfig{}.q);
}

TEST_CASE("config errors carry line and column") {
  expect_error_at("[pde]\nn_r = abc\n", 2, 7);
  expect_error_at("[pde]\nn_r = 16\nbogus = 1\n", 3, 1);
  expect_error_at("[radial]\n  eps_R = -1\n", 2, 11);
  expect_error_at("q = 3\n", 1, 1);
  expect_error_at("[nowhere]\n", 1, 2);
  expect_error_at("[pde\n", 1, 5);
  expect_error_at("[pde]\nn_r 16\n", 2, 7);
  expect_error_at("[pde]\nn_r = 16\nn_r = 32\n", 3, 1);
  expect_error_at("[pde]\ntruncation = 10, x, 30\n", 2, 18);
  expect_error_at("[nonlinearity]\nfamily = quadratic\n", 2, 10);
  expect_error_at("[symmetry]\nlambdas = 0.5, 1.5\n", 2, 16);
}

TEST_CASE("overrides") {
  ExperimentConfig c;
  apply_override(c, "pde.n_r=32");
  apply_override(c, "maxprinciple.lambda = 0.99");
  CHECK(c.n_r == 32);
  CHECK(c.lambda == 0.99);
  CHECK_THROWS_AS(apply_override(c, "pde.unknown=1"), blowup::ConfigError);
  CHECK_THROWS_AS(apply_override(c, "n_r=1"), blowup::ConfigError);
  try {
    apply_override(c, "pde.n_r=x");
    FAIL("expected a config error");
  } catch (const blowup::ConfigError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 9);
  }
}

TEST_CASE("csv fields") {
  CHECK(csv_number(0.1) == "0.1");
  CHECK(csv_number(1.0 / 3.0) == "0.3333333333333333");
  CHECK(std::stod(csv_number(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(csv_number(NAN).empty());
  CHECK(csv_text("plain") == "plain");
  CHECK(csv_text("a,b") == "\"a,b\"");
  CHECK(csv_text("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("hypotheses exit codes") {
  ExperimentConfig osc = small();
  osc.family = "oscillatory_power";
  const auto a = scratch("hyp_osc");
  CHECK(run_quiet("hypotheses", osc, a) == kSuccess);
  const auto rep = nlohmann::json::parse(slurp(a / "hypotheses.json"));
  CHECK(rep["theorem_applicable"].get<bool>());
  CHECK(slurp(a / "asymptotics.csv").rfind("t,F,psi,phi,Q_h2,Q_exp\n", 0) == 0);

  ExperimentConfig linear = small();
  linear.q = 1.0;
  const auto b = scratch("hyp_linear");
  CHECK(run_quiet("hypotheses", linear, b) == kHypothesesFail);
  CHECK_FALSE(nlohmann::json::parse(slurp(b / "hypotheses.json"))["theorem_applicable"].get<bool>());
  CHECK(run_quiet("all", linear, scratch("all_linear")) == kHypothesesFail);
  CHECK(run_quiet("radial", linear, scratch("radial_linear")) == kFailure);
  CHECK(run_quiet("nonsense", small(), scratch("nonsense")) == kConfigError);
}

TEST_CASE("all: manifest, digests and determinism") {
  const auto a = scratch("all_a");
  const auto b = scratch("all_b");
  REQUIRE(run_quiet("all", small(), a) == kSuccess);
  REQUIRE(run_quiet("all", small(), b) == kSuccess);

  const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
  std::set<std::string> names;
  for (const auto& f : manifest["files"]) {
    const std::string name = f["name"];
    names.insert(name);
    const std::string content = slurp(a / name);
    CHECK(f["sha256"] == sha256_hex(content));
    CHECK(f["bytes"] == content.size());
    CAPTURE(name);
    CHECK(content == slurp(b / name));
  }
  for (const char* required : {"asymptotics.csv", "radial.csv", "disk_solution.csv", "symmetry_report.json",
                               "barrier_report.json", "euler_zeros.csv", "asymptotics.svg", "radial.svg",
                               "disk_solution.svg", "symmetry_defect.svg", "barrier_lens.svg", "euler_solution.svg"})
    CHECK(names.contains(required));
  CHECK(slurp(a / "manifest.json") == slurp(b / "manifest.json"));

  CHECK(slurp(a / "radial.csv").rfind("r,d,U,Uprime,psiU_over_d,Uprime_over_sqrtF\n", 0) == 0);
  CHECK(slurp(a / "disk_solution.csv").rfind("r,theta,u\n", 0) == 0);
  const std::string zeros = slurp(a / "euler_zeros.csv");
  CHECK(zeros.rfind("k,x_k\n", 0) == 0);
  CHECK(std::count(zeros.begin(), zeros.end(), '\n') == 5);

  const auto sym = nlohmann::json::parse(slurp(a / "symmetry_report.json"));
  CHECK(sym["runs"].size() == 2);
  CHECK(sym["truncation_trend"]["label"].get<std::string>().find("exploratory") == 0);
  CHECK(sym["symmetric_control"]["global_defect"].get<double>() <= 1e-10);
  const auto barrier = nlohmann::json::parse(slurp(a / "barrier_report.json"));
  CHECK(barrier["barrier"]["verdict"].get<bool>());
  CHECK(barrier["euler_zero_count"] == 4);
}

TEST_CASE("single stages write their own artifacts") {
  const auto d = scratch("stage_pde");
  REQUIRE(run_quiet("pde", small(), d) == kSuccess);
  CHECK(fs::exists(d / "disk_solution.csv"));
  CHECK_FALSE(fs::exists(d / "symmetry_report.json"));
  const auto m = scratch("stage_mp");
  REQUIRE(run_quiet("maxprinciple", small(), m) == kSuccess);
  CHECK(fs::exists(m / "barrier_report.json"));
  CHECK(fs::exists(m / "euler_zeros.csv"));
}

TEST_CASE("executable exit codes") {
  const auto dir = scratch("exe");
  fs::create_directories(dir);
  {
    std::ofstream(dir / "bad.ini") << "[pde]\nn_r = sixteen\n";
    std::ofstream(dir / "linear.ini") << "[nonlinearity]\nq = 1\n[asymptotics]\nsamples_per_decade = 2\n";
  }
  CHECK(exe("hypotheses --config " + (dir / "bad.ini").string() + " --out " + (dir / "o1").string()) == 3);
  CHECK(exe("hypotheses --config " + (dir / "missing.ini").string() + " --out " + (dir / "o2").string()) == 3);
  CHECK(exe("hypotheses --config " + (dir / "linear.ini").string() + " --out " + (dir / "o3").string()) == 2);
  CHECK(exe("radial --config " + (dir / "linear.ini").string() + " --out " + (dir / "o4").string()) == 1);
  CHECK(exe("hypotheses --override pde.n_r=x --out " + (dir / "o5").string()) == 3);
  CHECK(exe("hypotheses --override asymptotics.samples_per_decade=2 --out " + (dir / "o6").string()) == 0);
  CHECK(fs::exists(dir / "o6" / "manifest.json"));
}

TEST_CASE("zz cleanup") { fs::remove_all(scratch("").parent_path()); }
