// Acceptance suite: one line per criterion, exit 0 iff all pass.
//
// Every tolerance below is pinned in this file; nothing is recalibrated at
// run time. Criteria that compare sampled shape clouds use the default
// sampling policy (deterministic enumeration when it fits the budget, flat
// Dirichlet interior fill to the budget) and the 0.05 absolute sampling
// slack.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "process_helpers.hpp"
#include "test_support.hpp"

using namespace sqg;
using namespace test_support;

namespace {

struct Criterion {
  int number;
  std::string name;
  std::function<bool(std::string&)> body;
};

bool within(double value, double bound, std::string& detail, const char* what) {
  if (value <= bound) return true;
  detail = std::string(what) + " = " + std::to_string(value) + " exceeds " + std::to_string(bound);
  return false;
}

Eigen::Index random_size(rng::Engine& engine, Eigen::Index lo, Eigen::Index hi) {
  return lo + static_cast<Eigen::Index>(engine.below(static_cast<std::uint64_t>(hi - lo + 1)));
}

// ---------------------------------------------------------------------------
// 1. Categorical laws: associativity, identities, tensor-square
//    functoriality, pushforward composition. 500+ instances, 1e-12.
bool categorical_laws(std::string& detail) {
  rng::Engine engine(1001);
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index n = random_size(engine, 1, 8);
    const Eigen::Index m = random_size(engine, 1, 8);
    const Eigen::Index p = random_size(engine, 1, 8);
    const Eigen::Index q = random_size(engine, 1, 8);
    const MarkovKernel a = random_kernel(engine, n, m);
    const MarkovKernel b = random_kernel(engine, m, p);
    const MarkovKernel c = random_kernel(engine, p, q);
    const FiniteMeasure pi(rng::dirichlet_row(engine, n));

    if (!within(max_abs_diff(compose(compose(a, b), c).rows(),
                             compose(a, compose(b, c)).rows()),
                1e-12, detail, "associativity residual"))
      return false;
    if (!within(max_abs_diff(compose(MarkovKernel::identity(n), a).rows(), a.rows()), 1e-12,
                detail, "left identity residual"))
      return false;
    if (!within(max_abs_diff(compose(a, MarkovKernel::identity(m)).rows(), a.rows()), 1e-12,
                detail, "right identity residual"))
      return false;
    if (!within(max_abs_diff(tensor_square(compose(a, b)).rows(),
                             compose(tensor_square(a), tensor_square(b)).rows()),
                1e-12, detail, "tensor functoriality residual"))
      return false;
    if (!within(max_abs_diff(pushforward(compose(a, b), pi).weights(),
                             pushforward(b, pushforward(a, pi)).weights()),
                1e-12, detail, "pushforward composition residual"))
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// 2. Conservation and symmetry of pushforwards. 500+ instances, 1e-12.
bool conservation_and_symmetry(std::string& detail) {
  rng::Engine engine(1002);
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index n = random_size(engine, 1, 8);
    const Eigen::Index m = random_size(engine, 1, 8);
    const SquareGraphon g = random_symmetric_graphon(engine, n);
    const MarkovKernel kappa = random_kernel(engine, n, m);

    if (!within(std::abs(pushforward(kappa, g.pi().as_finite()).total() - 1.0), 1e-12, detail,
                "vertex mass drift"))
      return false;
    const EdgeMeasure image = pushforward_square(kappa, g.mu());
    if (!within(std::abs(image.total() - total_edge_mass(g)), 1e-12, detail, "edge mass drift"))
      return false;
    if (!is_symmetric(image.weights(), 1e-12)) {
      detail = "pushforward of a symmetric edge measure lost symmetry";
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 3. Perturbation bounds: |rho1-rho2| <= eta, |nu1-nu2| <= 2 eta. 1000+.
bool perturbation_bounds(std::string& detail) {
  rng::Engine engine(1003);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index n = random_size(engine, 1, 6);
    const Eigen::Index k = random_size(engine, 1, 4);
    const SquareGraphon g = random_graphon(engine, n);
    const PerturbationReport report =
        perturbation_bound_check(random_kernel(engine, n, k), random_kernel(engine, n, k), g);
    if (!report.vertex_within_eta || !report.edge_within_two_eta) {
      detail = "perturbation bound failed: eta = " + std::to_string(report.eta) +
               ", vertex = " + std::to_string(report.vertex_deviation) +
               ", edge = " + std::to_string(report.edge_deviation);
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 4. Finite-space Lipschitz bounds: deviations <= m|Omega| and M|Omega|^2.
bool lipschitz_bounds(std::string& detail) {
  rng::Engine engine(1004);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index n = random_size(engine, 1, 6);
    const Eigen::Index m = random_size(engine, 1, 5);
    const SquareGraphon a = random_graphon(engine, n);
    const SquareGraphon b = random_graphon(engine, n);
    const LipschitzReport report = lipschitz_bound_check(a, b, random_kernel(engine, n, m));
    if (!report.holds) {
      detail = "Lipschitz bound failed: vertex " + std::to_string(report.vertex_deviation) +
               " vs " + std::to_string(report.vertex_bound) + ", edge " +
               std::to_string(report.edge_deviation) + " vs " + std::to_string(report.edge_bound);
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 5. Rebalancing: uniform output, <= k-1 steps, beta0 in (0, 2dk), edge
//    perturbation <= 4(1+2 mu(X^2)) k (k-1) d. 1000+ instances.
MarkovKernel kernel_with_small_deviation(rng::Engine& engine, const SquareGraphon& g,
                                         Eigen::Index k, double fraction) {
  const MarkovKernel raw = random_kernel(engine, g.n(), k);
  const double target_d = fraction / (4.0 * static_cast<double>(k) * static_cast<double>(k));
  const Vector rho = pushforward(raw, g.pi()).weights();
  const double d = (rho.array() - 1.0 / static_cast<double>(k)).abs().maxCoeff();
  const double keep = d <= target_d ? 1.0 : target_d / d;
  const Matrix uniform_rows = Matrix::Constant(g.n(), k, 1.0 / static_cast<double>(k));
  return MarkovKernel(keep * raw.rows() + (1.0 - keep) * uniform_rows);
}

bool rebalancing_bounds(std::string& detail) {
  rng::Engine engine(1005);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index n = random_size(engine, 1, 6);
    const Eigen::Index k = random_size(engine, 2, 4);
    const SquareGraphon g = random_graphon(engine, n);
    const MarkovKernel kappa =
        kernel_with_small_deviation(engine, g, k, engine.uniform(0.05, 0.95));
    const double d =
        (pushforward(kappa, g.pi()).weights().array() - 1.0 / static_cast<double>(k))
            .abs()
            .maxCoeff();

    const RebalanceResult result = rebalance_kernel(kappa, g);
    const Vector after = pushforward(result.kernel, g.pi()).weights();
    if (!within((after.array() - 1.0 / static_cast<double>(k)).abs().maxCoeff(), 1e-9, detail,
                "post-rebalance deviation"))
      return false;
    if (result.trace.steps.size() > static_cast<std::size_t>(k - 1)) {
      detail = "used " + std::to_string(result.trace.steps.size()) + " steps with k = " +
               std::to_string(k);
      return false;
    }
    for (const RebalanceStep& step : result.trace.steps) {
      if (!(step.beta0 > 0.0 && step.beta0 < 2.0 * d * static_cast<double>(k))) {
        detail = "beta0 = " + std::to_string(step.beta0) + " outside (0, " +
                 std::to_string(2.0 * d * static_cast<double>(k)) + ")";
        return false;
      }
    }
    const double edge_bound = 4.0 * (1.0 + 2.0 * total_edge_mass(g)) * static_cast<double>(k) *
                              static_cast<double>(k - 1) * d;
    const double edge_move = max_abs_diff(pushforward_square(result.kernel, g.mu()).weights(),
                                          pushforward_square(kappa, g.mu()).weights());
    if (!within(edge_move, edge_bound + 1e-12, detail, "edge perturbation")) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// 6. k = 1 shapes are the exact singleton (1, total edge mass). 100 graphons.
bool one_shape_exactness(std::string& detail) {
  rng::Engine engine(1006);
  for (int trial = 0; trial < 100; ++trial) {
    const SquareGraphon g = random_graphon(engine, random_size(engine, 1, 6));
    const ShapeCloud cloud = sample_kshape(g, 1, SampleStrategy::Mixed, 8, trial);
    for (const ShapePoint& p : cloud.points) {
      if (!within(std::abs(p.coords[0] - 1.0), 1e-12, detail, "vertex coordinate error"))
        return false;
      if (!within(std::abs(p.coords[1] - total_edge_mass(g)), 1e-12, detail,
                  "edge coordinate error"))
        return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 7. Blow-up invariance: 2-shapes of g and blowup(g, m) within the 0.05
//    sampling slack (the true shapes coincide). 20 graphons, m in {2, 3}.
//
// The morphism structure itself is certified exactly; the cloud comparison
// is the stated assertion. Finite clouds sampled with the default policy
// carry an irreducible covering gap near the blow-up's fractional-grid
// faces (about max_i pi_i / (2m)), which exceeds the 0.05 slack for some
// draws; the failure is reported with the measured distance rather than
// absorbed into a looser threshold.
bool blowup_invariance(std::string& detail) {
  rng::Engine engine(1007);
  double worst = 0.0;
  std::string worst_case;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = random_size(engine, 1, 4);
    const SquareGraphon g = random_graphon(engine, n, 0.8);
    const Eigen::Index factor = 2 + static_cast<Eigen::Index>(engine.below(2));
    const SquareGraphon blown = balanced_blowup(g, factor);

    // the bidirectional morphisms that force equal true shapes
    const AtomSplit split = atom_split_kernel(std::vector<Eigen::Index>(n, factor));
    if (!verify_morphism(split.forward, g, blown, 1e-12).is_morphism ||
        !verify_morphism(split.backward, blown, g, 1e-12).is_morphism) {
      detail = "blow-up morphism pair failed verification";
      return false;
    }

    const ShapeCloud base = sample_kshape(g, 2, SampleStrategy::Mixed, 8000, 7 * trial + 1);
    const ShapeCloud image =
        sample_kshape(blown, 2, SampleStrategy::Mixed, 60000, 7 * trial + 2);
    const double distance = hausdorff(base, image);
    if (distance > worst) {
      worst = distance;
      worst_case = "n=" + std::to_string(n) + ", m=" + std::to_string(factor);
    }
  }
  return within(worst, 0.05, detail, ("worst 2-shape distance (" + worst_case + ")").c_str());
}

// ---------------------------------------------------------------------------
// 8. Asymmetry witnesses: present with an asymmetric embedded edge part for
//    forced-asymmetric inputs, absent for symmetric ones. 100 each.
bool asymmetry_witnesses(std::string& detail) {
  rng::Engine engine(1008);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = random_size(engine, 2, 6);
    SquareGraphon g = random_symmetric_graphon(engine, n);

    // force an asymmetric pair with a definite gap
    Matrix mu = g.mu().weights();
    const Eigen::Index i = static_cast<Eigen::Index>(engine.below(n));
    Eigen::Index j = static_cast<Eigen::Index>(engine.below(n));
    if (j == i) j = (j + 1) % n;
    mu(i, j) += engine.uniform(0.01, 0.5);
    const SquareGraphon forced(g.pi(), EdgeMeasure(mu));

    const auto witness = witness_asymmetry(forced);
    if (!witness.has_value()) {
      detail = "no witness for an asymmetric edge measure";
      return false;
    }
    if (witness->point.k != 3) {
      detail = "witness must embed into the 3-point space";
      return false;
    }
    if (is_symmetric(extract(witness->point), 1e-12)) {
      detail = "witness edge part is symmetric at 1e-12";
      return false;
    }
    if (witness_asymmetry(g).has_value()) {
      detail = "witness reported for a symmetric edge measure";
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 9. Limit construction sanity: constant sequences validate exactly, blow-up
//    sequences validate within the slack, alternating masses are flagged.
bool limit_sanity(std::string& detail) {
  rng::Engine engine(1009);
  std::vector<std::string> failures;

  {  // constant sequence
    const SquareGraphon g = random_graphon(engine, 3);
    const std::vector<SquareGraphon> gs = {g, g, g};
    LimitTarget target{3, {MarkovKernel::identity(3), MarkovKernel::identity(3),
                           MarkovKernel::identity(3)}};
    const std::vector<LimitTarget> targets = {target};
    const LimitCandidate candidate = build_limit_candidate(gs, targets, 1e-12);
    const std::vector<Eigen::Index> ks = {1, 2};
    const LimitValidationReport validation =
        validate_limit(candidate, gs, ks, 512, 0, 1e-9, 0.05);
    bool exact = candidate.full_vertex_residual == 0.0 && candidate.full_edge_residual == 0.0 &&
                 validation.pass;
    for (const LimitValidationEntry& entry : validation.per_k)
      exact = exact && entry.candidate_distance == 0.0;
    if (!exact) failures.push_back("constant sequence not exact");
  }

  {  // blow-up sequence with deterministic collapse kernels; the k=2 cloud
     // comparison carries the same covering gap as criterion 7
    const Eigen::Index n = 3;
    Matrix mu(n, n);
    mu << 0.06, 0.03, 0.02, 0.03, 0.05, 0.01, 0.02, 0.01, 0.04;
    const SquareGraphon g(ProbabilityMeasure::uniform(n), EdgeMeasure(mu));
    const std::vector<SquareGraphon> gs = {g, balanced_blowup(g, 2), balanced_blowup(g, 3)};
    LimitTarget target{n,
                       {MarkovKernel::identity(n),
                        atom_split_kernel(std::vector<Eigen::Index>(n, 2)).backward,
                        atom_split_kernel(std::vector<Eigen::Index>(n, 3)).backward}};
    const std::vector<LimitTarget> targets = {target};
    const LimitCandidate candidate = build_limit_candidate(gs, targets, 1e-12);
    if (candidate.full_vertex_residual > 1e-12 || candidate.full_edge_residual > 1e-12)
      failures.push_back("blow-up residuals not exact");
    const std::vector<Eigen::Index> ks = {1, 2};
    const LimitValidationReport validation =
        validate_limit(candidate, gs, ks, 20000, 9, 1e-9, 0.05);
    if (!validation.pass)
      failures.push_back("blow-up validation: k=2 distance " +
                         std::to_string(validation.per_k[1].candidate_distance) +
                         ", residual " + std::to_string(validation.per_k[1].tail_residual));
  }

  {  // alternating edge mass
    const SquareGraphon light =
        new_square_graphon(vec({0.5, 0.5}), mat({{0.25, 0.25}, {0.25, 0.25}}));
    const SquareGraphon heavy =
        new_square_graphon(vec({0.5, 0.5}), mat({{0.5, 0.5}, {0.5, 0.5}}));
    const std::vector<SquareGraphon> gs = {light, heavy, light, heavy};
    // collapse everything to one point: the edge value is the total mass
    const MarkovKernel collapse = deterministic_kernel({0, 0}, 1);
    LimitTarget target{1, {collapse, collapse, collapse, collapse}};
    const std::vector<LimitTarget> targets = {target};
    const LimitCandidate candidate = build_limit_candidate(gs, targets, 1e-12);
    const double gap = 1.0;  // masses alternate between 1 and 2
    const std::vector<Eigen::Index> ks = {1};
    const LimitValidationReport validation =
        validate_limit(candidate, gs, ks, 64, 0, 1e-9, 0.05);
    if (candidate.full_edge_residual < gap - 1e-9 ||
        validation.per_k[0].tail_residual < gap - 1e-9 || validation.pass)
      failures.push_back("alternating sequence not flagged by the mass gap");
  }

  if (failures.empty()) return true;
  detail = failures[0];
  for (std::size_t i = 1; i < failures.size(); ++i) detail += "; " + failures[i];
  detail += " (other clauses pass)";
  return false;
}

// ---------------------------------------------------------------------------
// 10. Uniform-shape Lipschitz bound: for constructed pairs with sampled
//     shape distance below 1/(4k^2) at k = 2, the uniform-shape distance is
//     within (1 + (1+2U) 4k(k-1)) times it plus the 0.05 slack.
bool hausdorff_lipschitz(std::string& detail) {
  rng::Engine engine(1010);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = random_size(engine, 2, 4);
    const SquareGraphon g = random_graphon(engine, n, 0.8);

    // same vertex distribution, slightly moved edge mass
    Matrix delta(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) delta(r, c) = engine.uniform();
    const double epsilon = engine.uniform(0.0005, 0.003);
    Matrix moved = g.mu().weights() + epsilon * delta;
    const SquareGraphon h(g.pi(), EdgeMeasure(moved));

    const long long budget = 4096;
    const std::uint64_t seed = 31 * trial + 5;
    const ShapeCloud ga = sample_kshape(g, 2, SampleStrategy::Mixed, budget, seed);
    const ShapeCloud hb = sample_kshape(h, 2, SampleStrategy::Mixed, budget, seed);
    const double d_full = hausdorff(ga, hb);
    if (!within(d_full, 1.0 / 16.0 - 1e-9, detail, "constructed-pair shape distance"))
      return false;

    const ShapeCloud gu = uniform_kshape(g, 2, budget, seed);
    const ShapeCloud hu = uniform_kshape(h, 2, budget, seed);
    const double d_uniform = hausdorff(gu, hu);

    const double mass_cap = std::max(total_edge_mass(g), total_edge_mass(h));
    const double factor = 1.0 + (1.0 + 2.0 * mass_cap) * 4.0 * 2.0 * 1.0;
    if (!within(d_uniform, factor * d_full + 0.05, detail, "uniform-shape distance")) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// 11. CLI determinism: every subcommand, invoked twice with identical
//     inputs, produces byte-identical output.
bool cli_determinism(std::string& detail) {
  const char* cli = std::getenv("SQG_CLI");
  if (!cli) {
    detail = "SQG_CLI must point at the sqg binary";
    return false;
  }
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("sqg-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto path = [&](const std::string& name) { return (dir / name).string(); };

  const SquareGraphon g = new_square_graphon(vec({0.5, 0.5}), mat({{0.2, 0.3}, {0.3, 0.2}}));
  io::save_text(path("g.json"), io::to_json(g));
  io::save_text(path("id.json"), io::to_json(MarkovKernel::identity(2)));
  const double d = 1.0 / 32.0;
  io::save_text(path("near.json"),
                io::to_json(MarkovKernel(mat({{0.5 + 2 * d, 0.5 - 2 * d}, {0.5, 0.5}}))));
  io::save_text(path("manifest.json"), R"({"graphons": ["g.json", "g.json"]})");
  const std::string id = io::to_json(MarkovKernel::identity(2));
  io::save_text(path("targets.json"),
                R"({"targets": [{"k": 2, "kernels": [)" + id + "," + id + "]}]}");
  io::save_text(path("cloud.json"),
                io::to_json(sample_kshape(g, 2, SampleStrategy::Mixed, 32, 0)));

  const std::vector<std::string> commands = {
      "shape " + path("g.json") + " --k 2 --budget 64 --seed 5",
      "shape " + path("g.json") + " --k 2 --budget 64 --seed 5 --uniform",
      "dist " + path("cloud.json") + " " + path("cloud.json"),
      "converge " + path("manifest.json") + " --ks 1 --ks 2 --budget 32 --seed 2",
      "verify " + path("id.json") + " " + path("g.json") + " " + path("g.json"),
      "rebalance " + path("near.json") + " " + path("g.json"),
      "limit " + path("manifest.json") + " " + path("targets.json") +
          " --ks 1 --ks 2 --budget 32 --seed 2",
  };
  bool ok = true;
  for (const std::string& command : commands) {
    const auto first = process_helpers::run_command(std::string(cli) + " " + command);
    const auto second = process_helpers::run_command(std::string(cli) + " " + command);
    if (first.stdout_text != second.stdout_text || first.exit_code != second.exit_code) {
      detail = "non-deterministic output for: " + command;
      ok = false;
      break;
    }
    if (first.exit_code != 0) {
      detail = "command failed: " + command;
      ok = false;
      break;
    }
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  return ok;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "categorical laws (500 random instances, 1e-12)", categorical_laws},
      {2, "conservation and symmetry (500 random instances, 1e-12)", conservation_and_symmetry},
      {3, "perturbation bounds (1000 random instances)", perturbation_bounds},
      {4, "finite-space Lipschitz bounds (1000 random instances)", lipschitz_bounds},
      {5, "rebalancing bounds (1000 random instances)", rebalancing_bounds},
      {6, "k=1 shape exactness (100 graphons, 1e-12)", one_shape_exactness},
      {7, "blow-up 2-shape invariance (20 graphons, slack 0.05)", blowup_invariance},
      {8, "asymmetry witnesses (100 forced + 100 symmetric)", asymmetry_witnesses},
      {9, "limit construction sanity (constant / blow-up / alternating)", limit_sanity},
      {10, "uniform-shape Lipschitz bound (20 constructed pairs)", hausdorff_lipschitz},
      {11, "CLI determinism (every subcommand twice)", cli_determinism},
  };

  bool all_pass = true;
  for (const Criterion& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool pass = false;
    try {
      pass = criterion.body(detail);
    } catch (const std::exception& e) {
      detail = e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  %2d  %s (%.2f s)%s%s\n", pass ? "PASS" : "FAIL", criterion.number,
                criterion.name.c_str(), seconds, detail.empty() ? "" : " -- ",
                detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && pass;
  }
  return all_pass ? 0 : 1;
}
