// Drives the installed `sqg` binary end to end: determinism, exit-code
// triage, and file formats. The binary path comes from the SQG_CLI
// environment variable (set by ctest).

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "process_helpers.hpp"
#include "test_support.hpp"

namespace {

namespace fs = std::filesystem;

using process_helpers::RunResult;

std::string cli_path() {
  const char* path = std::getenv("SQG_CLI");
  REQUIRE_MESSAGE(path != nullptr, "SQG_CLI must point at the sqg binary");
  return path;
}

RunResult run(const std::string& args) {
  return process_helpers::run_command(cli_path() + " " + args);
}

class TempDir {
 public:
  TempDir() {
    dir_ = fs::temp_directory_path() / ("sqg-cli-test-" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

}  // namespace

using namespace sqg;
using namespace test_support;

TEST_SUITE("cli") {

TEST_CASE("shape writes deterministic clouds and honors --uniform") {
  TempDir dir;
  const SquareGraphon g = new_square_graphon(vec({0.5, 0.5}), mat({{0.2, 0.3}, {0.3, 0.2}}));
  io::save_text(dir.path("g.json"), io::to_json(g));

  const std::string args = "shape " + dir.path("g.json") + " --k 1 --budget 4 --seed 7";
  const RunResult once = run(args);
  const RunResult twice = run(args);
  CHECK(once.exit_code == 0);
  CHECK(once.stdout_text == twice.stdout_text);

  const ShapeCloud cloud = io::cloud_from_json(once.stdout_text);
  CHECK(cloud.k == 1);
  for (const ShapePoint& p : cloud.points) {
    CHECK(p.coords[0] == 1.0);
    CHECK(p.coords[1] == doctest::Approx(1.0).epsilon(1e-12));
  }

  const RunResult uniform =
      run("shape " + dir.path("g.json") + " --k 2 --budget 64 --seed 7 --uniform");
  CHECK(uniform.exit_code == 0);
  const ShapeCloud uniform_cloud = io::cloud_from_json(uniform.stdout_text);
  for (const ShapePoint& p : uniform_cloud.points) {
    CHECK(std::abs(p.coords[0] - 0.5) <= 1e-9);
    CHECK(std::abs(p.coords[1] - 0.5) <= 1e-9);
  }

  // .csv extension switches the format; any other --out stays JSON
  const std::string csv_args =
      "shape " + dir.path("g.json") + " --k 1 --budget 2 --seed 7 --out " + dir.path("c.csv");
  CHECK(run(csv_args).exit_code == 0);
  const std::string csv = io::read_text(dir.path("c.csv"));
  CHECK(csv.rfind("rho_0,nu_0_0\n", 0) == 0);

  CHECK(run("shape " + dir.path("g.json") + " --k 1 --budget 2 --seed 7 --out " +
            dir.path("c.json"))
            .exit_code == 0);
  CHECK(io::load_cloud(dir.path("c.json")).points.size() == 2);
}

TEST_CASE("dist prints the Hausdorff distance and enforces equal k") {
  TempDir dir;
  const SquareGraphon a = new_square_graphon(vec({1.0}), mat({{0.5}}));
  const SquareGraphon b = new_square_graphon(vec({1.0}), mat({{0.7}}));
  io::save_text(dir.path("a.json"),
                io::to_json(sample_kshape(a, 1, SampleStrategy::DeterministicEnumerate, 4, 0)));
  io::save_text(dir.path("b.json"),
                io::to_json(sample_kshape(b, 1, SampleStrategy::DeterministicEnumerate, 4, 0)));
  io::save_text(dir.path("b2.json"),
                io::to_json(sample_kshape(b, 2, SampleStrategy::DeterministicEnumerate, 4, 0)));

  const RunResult same = run("dist " + dir.path("a.json") + " " + dir.path("a.json"));
  CHECK(same.exit_code == 0);
  CHECK(same.stdout_text == "0\n");

  const RunResult apart = run("dist " + dir.path("a.json") + " " + dir.path("b.json"));
  CHECK(apart.exit_code == 0);
  CHECK(std::stod(apart.stdout_text) == doctest::Approx(0.2).epsilon(1e-12));

  CHECK(run("dist " + dir.path("a.json") + " " + dir.path("b2.json")).exit_code == 2);
}

TEST_CASE("converge reports zero distances for constant sequences") {
  TempDir dir;
  const SquareGraphon g = new_square_graphon(vec({0.5, 0.5}), mat({{0, 1}, {1, 0}}));
  io::save_text(dir.path("g.json"), io::to_json(g));
  io::save_text(dir.path("manifest.json"),
                R"({"graphons": ["g.json", "g.json", "g.json"]})");

  const std::string args =
      "converge " + dir.path("manifest.json") + " --ks 1 --ks 2 --budget 32 --seed 1";
  const RunResult once = run(args);
  CHECK(once.exit_code == 0);
  CHECK(once.stdout_text == run(args).stdout_text);
  CHECK(once.stdout_text.find("\"cauchy_residuals\":[0.0,0.0]") != std::string::npos);
}

TEST_CASE("verify distinguishes morphisms from near-misses") {
  TempDir dir;
  const SquareGraphon g = new_square_graphon(vec({0.5, 0.5}), mat({{0.2, 0.3}, {0.3, 0.2}}));
  io::save_text(dir.path("g.json"), io::to_json(g));
  io::save_text(dir.path("id.json"), io::to_json(MarkovKernel::identity(2)));
  const SquareGraphon wrong(g.pi(), EdgeMeasure(2.0 * g.mu().weights()));
  io::save_text(dir.path("wrong.json"), io::to_json(wrong));

  CHECK(run("verify " + dir.path("id.json") + " " + dir.path("g.json") + " " + dir.path("g.json"))
            .exit_code == 0);
  CHECK(run("verify " + dir.path("id.json") + " " + dir.path("g.json") + " " +
            dir.path("wrong.json"))
            .exit_code == 1);
  CHECK(run("verify " + dir.path("id.json") + " " + dir.path("g.json") + " missing.json")
            .exit_code == 2);
}

TEST_CASE("rebalance succeeds on valid kernels and flags precondition failures") {
  TempDir dir;
  const SquareGraphon g = new_square_graphon(vec({0.5, 0.5}), mat({{0.2, 0.3}, {0.3, 0.2}}));
  io::save_text(dir.path("g.json"), io::to_json(g));

  const double d = 1.0 / 32.0;
  io::save_text(dir.path("near.json"),
                io::to_json(MarkovKernel(mat({{0.5 + 2 * d, 0.5 - 2 * d}, {0.5, 0.5}}))));
  const std::string args = "rebalance " + dir.path("near.json") + " " + dir.path("g.json");
  const RunResult result = run(args);
  CHECK(result.exit_code == 0);
  CHECK(result.stdout_text == run(args).stdout_text);
  CHECK(result.stdout_text.find("\"initial_d\":0.03125") != std::string::npos);

  io::save_text(dir.path("far.json"), io::to_json(deterministic_kernel({0, 0}, 2)));
  CHECK(run("rebalance " + dir.path("far.json") + " " + dir.path("g.json")).exit_code == 1);
}

TEST_CASE("limit validates constant sequences") {
  TempDir dir;
  const SquareGraphon g = new_square_graphon(vec({0.5, 0.5}), mat({{0.2, 0.3}, {0.3, 0.2}}));
  io::save_text(dir.path("g.json"), io::to_json(g));
  io::save_text(dir.path("manifest.json"), R"({"graphons": ["g.json", "g.json"]})");

  const std::string id = io::to_json(MarkovKernel::identity(2));
  io::save_text(dir.path("targets.json"),
                R"({"targets": [{"k": 2, "kernels": [)" + id + "," + id + "]}]}");

  const std::string args = "limit " + dir.path("manifest.json") + " " + dir.path("targets.json") +
                           " --ks 1 --ks 2 --budget 32 --seed 3";
  const RunResult result = run(args);
  CHECK(result.exit_code == 0);
  CHECK(result.stdout_text == run(args).stdout_text);
  CHECK(result.stdout_text.find("\"pass\":true") != std::string::npos);
  CHECK(result.stdout_text.find("\"consistency\":0.0") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("shape").exit_code == 2);
  CHECK(run("no-such-command").exit_code == 2);
}

}  // TEST_SUITE
