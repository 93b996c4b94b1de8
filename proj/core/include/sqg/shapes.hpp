#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sqg/morphisms.hpp"

namespace sqg {

/// A graphon on the k-point space embedded in R^(k + k^2): the first k
/// coordinates are the vertex masses, the remaining k^2 (row-major) the
/// edge masses.
struct ShapePoint {
  Eigen::Index k = 0;
  Vector coords;
};

ShapePoint embed(const ProbabilityMeasure& rho, const EdgeMeasure& nu);
ShapePoint embed(const SquareGraphon& g);

/// Inverse of embed.
SquareGraphon extract(const ShapePoint& p);

/// Max metric on the embedding space. Requires equal k.
double point_distance(const ShapePoint& a, const ShapePoint& b);

enum class SampleStrategy { DirichletRandom, DeterministicEnumerate, Mixed };

std::string_view to_string(SampleStrategy s) noexcept;
SampleStrategy strategy_from_string(std::string_view name);

struct CloudMeta {
  std::string strategy;
  long long budget = 0;
  std::uint64_t seed = 0;
  std::string source;
  bool uniform = false;
};

/// Finite approximation of a k-shape: images of sampled kernels from the
/// source graphon into the k-point space.
struct ShapeCloud {
  Eigen::Index k = 0;
  std::vector<ShapePoint> points;
  CloudMeta meta;
};

/// Samples the k-shape of g. Each point is embed(apply(kappa, g)) for a
/// kernel kappa: [g.n] -> [k].
///
///  - DeterministicEnumerate: all k^n 0/1 kernels, in lexicographic order of
///    the map (vertex 0 the most significant digit). Errors with
///    BudgetExceeded when k^n > budget.
///  - DirichletRandom: `budget` kernels with rows drawn iid from the flat
///    Dirichlet; sample index i uses the RNG stream derived from (seed, i),
///    so the cloud is reproducible regardless of evaluation order.
///  - Mixed: the deterministic enumeration (when k^n <= budget) plus
///    Dirichlet draws filling the remaining budget. When k^n > budget the
///    enumeration is dropped and the whole budget goes to Dirichlet draws.
///
/// Set SQG_THREADS > 1 to sample in parallel; output is identical either way.
ShapeCloud sample_kshape(const SquareGraphon& g, Eigen::Index k, SampleStrategy strategy,
                         long long budget, std::uint64_t seed);

/// Samples the uniform-vertex k-shape: kernels are drawn as in Mixed, kept
/// when their vertex pushforward is within 1/(4k^2) of uniform, rebalanced to
/// push exactly to uniform, and embedded with the first k coordinates set to
/// 1/k. Errors with NoValidSamples when every draw is discarded.
ShapeCloud uniform_kshape(const SquareGraphon& g, Eigen::Index k, long long budget,
                          std::uint64_t seed);

/// Hausdorff distance between clouds under the max metric, brute force over
/// point pairs. Requires equal k (KMismatch).
double hausdorff(const ShapeCloud& a, const ShapeCloud& b);

struct AsymmetryWitness {
  std::vector<Eigen::Index> blocks;  ///< block index in {0,1,2} per ground-set point
  ShapePoint point;                  ///< embedded 3-point image with asymmetric edge part
};

/// If mu is not symmetric, produces a deterministic 3-block kernel built from
/// a pair of singletons (i, j) with mu(i,j) != mu(j,i) and the resulting
/// embedded point, whose edge part fails is_symmetric. Returns nullopt for
/// symmetric mu. On a discrete space singleton pairs always suffice.
std::optional<AsymmetryWitness> witness_asymmetry(const SquareGraphon& g);

struct ConvergenceReport {
  std::vector<Eigen::Index> ks;
  /// successive_distances[a][i] = Hausdorff distance between the sampled
  /// ks[a]-shapes of elements i and i+1.
  std::vector<std::vector<double>> successive_distances;
  /// Max successive distance over the tail half of the sequence.
  std::vector<double> cauchy_residuals;
};

/// Per-k successive Hausdorff distances across a graphon sequence, each
/// element sampled with the same strategy/budget/seed policy.
ConvergenceReport sequence_convergence_report(std::span<const SquareGraphon> gs,
                                              std::span<const Eigen::Index> ks,
                                              long long budget, std::uint64_t seed,
                                              SampleStrategy strategy = SampleStrategy::Mixed);

}  // namespace sqg
