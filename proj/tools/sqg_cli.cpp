// Command-line front end for the square-graphon library: shape sampling,
// Hausdorff distances, convergence reports, morphism verification, kernel
// rebalancing, and limit construction. Outputs are pure functions of the
// inputs and flags; identical invocations produce byte-identical bytes.
//
// Exit codes: 0 = pass, 1 = a mathematical check failed on valid input,
// 2 = unusable input or usage error. Errors are single-line JSON on stderr
// with a stable "code" field.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sqg/sqg.hpp"

namespace {

using nlohmann::json;

struct CliConfig {
  std::string graphon_path;
  std::string second_path;
  std::string third_path;
  std::string out_path;
  std::string strategy = "mixed";
  std::vector<long long> ks = {1, 2};
  long long k = 1;
  long long budget = 10000;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  double slack = 0.05;
  bool uniform = false;
};

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text << "\n";
  } else {
    sqg::io::save_text(out_path, text);
  }
}

bool has_suffix(const std::string& path, const std::string& suffix) {
  return path.size() >= suffix.size() &&
         path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<sqg::SquareGraphon> load_manifest(const std::string& path) {
  const json j = json::parse(sqg::io::read_text(path), nullptr, false);
  if (j.is_discarded() || !j.contains("graphons") || !j["graphons"].is_array())
    sqg::fail(sqg::ErrorCode::ParseError, "manifest must be {\"graphons\": [paths...]}");
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  std::vector<sqg::SquareGraphon> gs;
  for (const json& entry : j["graphons"]) {
    if (!entry.is_string()) sqg::fail(sqg::ErrorCode::ParseError, "manifest entries must be paths");
    gs.push_back(sqg::io::load_graphon((base / entry.get<std::string>()).string()));
  }
  if (gs.size() < 2) sqg::fail(sqg::ErrorCode::ParseError, "manifest needs at least 2 graphons");
  return gs;
}

std::vector<sqg::LimitTarget> load_targets(const std::string& path, std::size_t sequence_length) {
  const json j = json::parse(sqg::io::read_text(path), nullptr, false);
  if (j.is_discarded() || !j.contains("targets") || !j["targets"].is_array())
    sqg::fail(sqg::ErrorCode::ParseError, "targets must be {\"targets\": [{\"k\":..,\"kernels\":[..]}]}");
  std::vector<sqg::LimitTarget> targets;
  for (const json& t : j["targets"]) {
    if (!t.contains("k") || !t.contains("kernels") || !t["kernels"].is_array())
      sqg::fail(sqg::ErrorCode::ParseError, "each target needs \"k\" and \"kernels\"");
    sqg::LimitTarget target;
    target.k = t["k"].get<Eigen::Index>();
    for (const json& kernel : t["kernels"])
      target.kernels.push_back(sqg::io::kernel_from_json(kernel.dump()));
    if (target.kernels.size() != sequence_length)
      sqg::fail(sqg::ErrorCode::ParseError, "each target needs one kernel per sequence element");
    targets.push_back(std::move(target));
  }
  return targets;
}

std::vector<Eigen::Index> to_eigen_indices(const std::vector<long long>& v) {
  return {v.begin(), v.end()};
}

int cmd_shape(const CliConfig& config) {
  const sqg::SquareGraphon g = sqg::io::load_graphon(config.graphon_path);
  sqg::ShapeCloud cloud =
      config.uniform
          ? sqg::uniform_kshape(g, config.k, config.budget, config.seed)
          : sqg::sample_kshape(g, config.k, sqg::strategy_from_string(config.strategy),
                               config.budget, config.seed);
  cloud.meta.source = config.graphon_path;
  const bool csv = has_suffix(config.out_path, ".csv");
  write_output(config.out_path, csv ? sqg::io::to_csv(cloud) : sqg::io::to_json(cloud));
  return 0;
}

int cmd_dist(const CliConfig& config) {
  const sqg::ShapeCloud a = sqg::io::load_cloud(config.graphon_path);
  const sqg::ShapeCloud b = sqg::io::load_cloud(config.second_path);
  std::printf("%.17g\n", sqg::hausdorff(a, b));
  return 0;
}

int cmd_converge(const CliConfig& config) {
  const std::vector<sqg::SquareGraphon> gs = load_manifest(config.graphon_path);
  const std::vector<Eigen::Index> ks = to_eigen_indices(config.ks);
  const sqg::ConvergenceReport report = sqg::sequence_convergence_report(
      gs, ks, config.budget, config.seed, sqg::strategy_from_string(config.strategy));
  write_output(config.out_path, sqg::io::to_json(report));
  return 0;
}

int cmd_verify(const CliConfig& config) {
  const sqg::MarkovKernel kernel = sqg::io::load_kernel(config.graphon_path);
  const sqg::SquareGraphon src = sqg::io::load_graphon(config.second_path);
  const sqg::SquareGraphon dst = sqg::io::load_graphon(config.third_path);
  const sqg::MorphismReport report = sqg::verify_morphism(kernel, src, dst, config.tol);
  write_output(config.out_path, sqg::io::to_json(report));
  return report.is_morphism ? 0 : 1;
}

int cmd_rebalance(const CliConfig& config) {
  const sqg::MarkovKernel kernel = sqg::io::load_kernel(config.graphon_path);
  const sqg::SquareGraphon g = sqg::io::load_graphon(config.second_path);
  const sqg::RebalanceResult result = sqg::rebalance_kernel(kernel, g);
  write_output(config.out_path, sqg::io::to_json(result));
  return 0;
}

int cmd_limit(const CliConfig& config) {
  const std::vector<sqg::SquareGraphon> gs = load_manifest(config.graphon_path);
  const std::vector<sqg::LimitTarget> targets = load_targets(config.second_path, gs.size());
  const sqg::LimitCandidate candidate = sqg::build_limit_candidate(gs, targets, config.tol);
  const std::vector<Eigen::Index> ks = to_eigen_indices(config.ks);
  const sqg::LimitValidationReport validation = sqg::validate_limit(
      candidate, gs, ks, config.budget, config.seed, config.tol, config.slack);
  json out{{"candidate", json::parse(sqg::io::to_json(candidate))},
           {"validation", json::parse(sqg::io::to_json(validation))}};
  write_output(config.out_path, out.dump());
  return validation.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite square-graphon toolkit"};
  app.require_subcommand(1);
  CliConfig config;

  CLI::App* shape = app.add_subcommand("shape", "sample a k-shape cloud");
  shape->add_option("graphon", config.graphon_path, "graphon JSON file")->required();
  shape->add_option("--k", config.k, "shape size")->required();
  shape->add_option("--strategy", config.strategy,
                    "dirichlet-random | deterministic-enumerate | mixed");
  shape->add_option("--budget", config.budget, "sampling budget");
  shape->add_option("--seed", config.seed, "RNG seed");
  shape->add_flag("--uniform", config.uniform, "rebalance to the uniform-vertex shape");
  shape->add_option("--out", config.out_path, "output path (.csv for CSV, else JSON)");

  CLI::App* dist = app.add_subcommand("dist", "Hausdorff distance between two clouds");
  dist->add_option("cloud-a", config.graphon_path)->required();
  dist->add_option("cloud-b", config.second_path)->required();

  CLI::App* converge = app.add_subcommand("converge", "per-k convergence report for a sequence");
  converge->add_option("manifest", config.graphon_path, "JSON manifest of graphon files")->required();
  converge->add_option("--ks", config.ks, "shape sizes to report")->delimiter(',');
  converge->add_option("--budget", config.budget, "sampling budget");
  converge->add_option("--seed", config.seed, "RNG seed");
  converge->add_option("--strategy", config.strategy,
                       "dirichlet-random | deterministic-enumerate | mixed");
  converge->add_option("--out", config.out_path, "output path (default stdout)");

  CLI::App* verify = app.add_subcommand("verify", "check that a kernel is a morphism");
  verify->add_option("kernel", config.graphon_path)->required();
  verify->add_option("src", config.second_path)->required();
  verify->add_option("dst", config.third_path)->required();
  verify->add_option("--tol", config.tol, "residual tolerance");
  verify->add_option("--out", config.out_path, "output path (default stdout)");

  CLI::App* rebalance = app.add_subcommand("rebalance", "rebalance a kernel to uniform vertices");
  rebalance->add_option("kernel", config.graphon_path)->required();
  rebalance->add_option("graphon", config.second_path)->required();
  rebalance->add_option("--out", config.out_path, "output path (default stdout)");

  CLI::App* limit = app.add_subcommand("limit", "build and validate a limit candidate");
  limit->add_option("manifest", config.graphon_path)->required();
  limit->add_option("targets", config.second_path, "per-factor kernel choices")->required();
  limit->add_option("--ks", config.ks, "shape sizes to validate")->delimiter(',');
  limit->add_option("--budget", config.budget, "sampling budget");
  limit->add_option("--seed", config.seed, "RNG seed");
  limit->add_option("--tol", config.tol, "residual tolerance");
  limit->add_option("--out", config.out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
    if (shape->parsed()) return cmd_shape(config);
    if (dist->parsed()) return cmd_dist(config);
    if (converge->parsed()) return cmd_converge(config);
    if (verify->parsed()) return cmd_verify(config);
    if (rebalance->parsed()) return cmd_rebalance(config);
    if (limit->parsed()) return cmd_limit(config);
    return 2;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << sqg::io::error_json(sqg::ErrorCode::Usage, e.what()) << "\n";
    return 2;
  } catch (const sqg::Error& e) {
    std::cerr << sqg::io::error_json(e.code(), e.what()) << "\n";
    return sqg::is_math_failure(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << sqg::io::error_json(sqg::ErrorCode::ParseError, e.what()) << "\n";
    return 2;
  }
}
