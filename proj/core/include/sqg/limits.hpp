#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "sqg/shapes.hpp"

namespace sqg {

/// Index bookkeeping for a finite product space prod_d [k_d]: row-major
/// flat/tuple conversions and the coordinate-interleaving bijection theta
/// between (prod_d [k_d])^2 and prod_d ([k_d]^2).
class ProductIndex {
 public:
  explicit ProductIndex(std::vector<Eigen::Index> dims);

  const std::vector<Eigen::Index>& dims() const { return dims_; }
  Eigen::Index factors() const { return static_cast<Eigen::Index>(dims_.size()); }
  Eigen::Index total() const { return total_; }           ///< prod k_d
  Eigen::Index squared_total() const { return total_ * total_; }

  Eigen::Index flat(std::span<const Eigen::Index> tuple) const;
  std::vector<Eigen::Index> tuple(Eigen::Index flat) const;

  /// theta((a_d), (b_d)) = ((a_d, b_d))_d, as flat indices: a and b are flat
  /// points of the product, the result is a flat index in prod_d [k_d]^2
  /// (each factor square itself row-major).
  Eigen::Index theta(Eigen::Index a, Eigen::Index b) const;
  std::pair<Eigen::Index, Eigen::Index> theta_inverse(Eigen::Index flat_square) const;

 private:
  std::vector<Eigen::Index> dims_;
  std::vector<Eigen::Index> strides_;
  Eigen::Index total_;
};

/// Reindexes an edge measure on (prod [k_d])^2 as a measure on prod [k_d]^2.
/// Pure permutation of entries; mass preserved exactly.
FiniteMeasure theta_reindex(const EdgeMeasure& mu, const ProductIndex& index);
EdgeMeasure theta_unreindex(const FiniteMeasure& measure, const ProductIndex& index);

/// Deterministic kernel of the canonical projection from the full product
/// onto the factors in `subset` (0-based positions into index.dims(), strictly
/// increasing).
MarkovKernel projection_kernel(const ProductIndex& index, std::span<const int> subset);

struct ConsistencyReport {
  double max_residual = 0.0;
  std::vector<int> worst_inner;  ///< subset I of the worst pair I <= J
  std::vector<int> worst_outer;  ///< subset J
};

/// Checks the inverse-system equations: for every pair of nonempty subsets
/// I <= J of the factor set, the marginal of measures[J] onto I must equal
/// measures[I]. Requires a measure for every nonempty subset (MissingSubset).
ConsistencyReport check_inverse_consistency(
    const std::map<std::vector<int>, FiniteMeasure>& measures, const ProductIndex& index);

/// One factor of the limit construction: a target size k and the chosen
/// kernel from each sequence element into [k].
struct LimitTarget {
  Eigen::Index k = 0;
  std::vector<MarkovKernel> kernels;  ///< kernels[i]: gs[i].n -> k
};

struct LimitCandidate {
  ProductIndex index;
  SquareGraphon graphon;  ///< on the product space, assembled at the last element
  std::vector<double> per_dim_vertex_residual;  ///< tail Cauchy residual of each factor's vertex sequence
  std::vector<double> per_dim_edge_residual;
  double full_vertex_residual = 0.0;  ///< tail Cauchy residual of the full-product sequences
  double full_edge_residual = 0.0;
  double consistency_residual = 0.0;  ///< inverse-system residual over all subset marginals
  bool consistent = false;            ///< consistency_residual <= tol
  std::string note;
};

/// Builds the candidate limit of a sequence prefix: pushes each element
/// through the product of its per-factor kernels, reports Cauchy residuals of
/// the resulting vertex/edge sequences, takes the value at the last element,
/// and assembles the edge measure through the theta reindexing round trip.
/// Since the factor set is finite, the inverse limit of the subset marginals
/// is the full-product measure itself; subset consistency is verified against
/// projections. Requires prod k_d <= product_cap (CapExceeded).
LimitCandidate build_limit_candidate(std::span<const SquareGraphon> gs,
                                     std::span<const LimitTarget> targets, double tol,
                                     Eigen::Index product_cap = 64);

struct LimitValidationEntry {
  Eigen::Index k = 0;
  double candidate_distance = 0.0;  ///< Hausdorff distance to the last element's sampled k-shape
  double tail_residual = 0.0;       ///< the sequence's own per-k Cauchy residual
  bool pass = false;
};

struct LimitValidationReport {
  std::vector<LimitValidationEntry> per_k;
  bool pass = false;
};

/// Validates a candidate against the sequence: for each k, the sampled
/// k-shape of the candidate must lie within tol + slack of the last element's
/// sampled k-shape, and the sequence's own tail residual must be within
/// tol + slack as well.
LimitValidationReport validate_limit(const LimitCandidate& candidate,
                                     std::span<const SquareGraphon> gs,
                                     std::span<const Eigen::Index> ks, long long budget,
                                     std::uint64_t seed, double tol, double slack = 0.05);

}  // namespace sqg
