#include "sqg/limits.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sqg {
namespace {

double tail_max(const std::vector<double>& successive) {
  double residual = 0.0;
  for (std::size_t i = successive.size() / 2; i < successive.size(); ++i)
    residual = std::max(residual, successive[i]);
  return residual;
}

std::vector<double> successive_dinf(const std::vector<Vector>& sequence) {
  std::vector<double> distances;
  for (std::size_t i = 0; i + 1 < sequence.size(); ++i)
    distances.push_back((sequence[i] - sequence[i + 1]).cwiseAbs().maxCoeff());
  return distances;
}

}  // namespace

ProductIndex::ProductIndex(std::vector<Eigen::Index> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) fail(ErrorCode::EmptyList, "product of no factors");
  total_ = 1;
  for (Eigen::Index d : dims_) {
    if (d < 1) fail(ErrorCode::OutOfRange, "factor sizes must be at least 1");
    total_ *= d;
  }
  strides_.assign(dims_.size(), 1);
  for (std::size_t d = dims_.size(); d-- > 1;)
    strides_[d - 1] = strides_[d] * dims_[d];
}

Eigen::Index ProductIndex::flat(std::span<const Eigen::Index> tuple) const {
  if (tuple.size() != dims_.size())
    fail(ErrorCode::DimensionMismatch, "tuple arity does not match the factor count");
  Eigen::Index index = 0;
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    if (tuple[d] < 0 || tuple[d] >= dims_[d]) fail(ErrorCode::OutOfRange, "tuple entry out of range");
    index += tuple[d] * strides_[d];
  }
  return index;
}

std::vector<Eigen::Index> ProductIndex::tuple(Eigen::Index flat) const {
  if (flat < 0 || flat >= total_) fail(ErrorCode::OutOfRange, "flat index out of range");
  std::vector<Eigen::Index> result(dims_.size());
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    result[d] = flat / strides_[d];
    flat %= strides_[d];
  }
  return result;
}

Eigen::Index ProductIndex::theta(Eigen::Index a, Eigen::Index b) const {
  const std::vector<Eigen::Index> at = tuple(a);
  const std::vector<Eigen::Index> bt = tuple(b);
  Eigen::Index index = 0;
  for (std::size_t d = 0; d < dims_.size(); ++d)
    index = index * dims_[d] * dims_[d] + (at[d] * dims_[d] + bt[d]);
  return index;
}

std::pair<Eigen::Index, Eigen::Index> ProductIndex::theta_inverse(Eigen::Index flat_square) const {
  if (flat_square < 0 || flat_square >= total_ * total_)
    fail(ErrorCode::OutOfRange, "flat index out of range");
  std::vector<Eigen::Index> at(dims_.size());
  std::vector<Eigen::Index> bt(dims_.size());
  for (std::size_t d = dims_.size(); d-- > 0;) {
    const Eigen::Index sq = dims_[d] * dims_[d];
    const Eigen::Index digit = flat_square % sq;
    flat_square /= sq;
    at[d] = digit / dims_[d];
    bt[d] = digit % dims_[d];
  }
  return {flat(at), flat(bt)};
}

FiniteMeasure theta_reindex(const EdgeMeasure& mu, const ProductIndex& index) {
  if (mu.size() != index.total())
    fail(ErrorCode::DimensionMismatch, "edge measure does not live on the product space");
  Vector out(index.squared_total());
  for (Eigen::Index a = 0; a < index.total(); ++a)
    for (Eigen::Index b = 0; b < index.total(); ++b) out[index.theta(a, b)] = mu(a, b);
  return FiniteMeasure(std::move(out));
}

EdgeMeasure theta_unreindex(const FiniteMeasure& measure, const ProductIndex& index) {
  if (measure.size() != index.squared_total())
    fail(ErrorCode::DimensionMismatch, "measure does not live on the product of squares");
  Matrix out(index.total(), index.total());
  for (Eigen::Index s = 0; s < measure.size(); ++s) {
    const auto [a, b] = index.theta_inverse(s);
    out(a, b) = measure[s];
  }
  return EdgeMeasure(std::move(out));
}

MarkovKernel projection_kernel(const ProductIndex& index, std::span<const int> subset) {
  if (subset.empty()) fail(ErrorCode::EmptyList, "projection onto no factors");
  std::vector<Eigen::Index> sub_dims;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (subset[i] < 0 || subset[i] >= index.factors())
      fail(ErrorCode::OutOfRange, "subset names a factor outside the index");
    if (i > 0 && subset[i] <= subset[i - 1])
      fail(ErrorCode::OutOfRange, "subset must be strictly increasing");
    sub_dims.push_back(index.dims()[subset[i]]);
  }
  const ProductIndex sub(sub_dims);
  std::vector<Eigen::Index> f(index.total());
  std::vector<Eigen::Index> selected(subset.size());
  for (Eigen::Index u = 0; u < index.total(); ++u) {
    const std::vector<Eigen::Index> t = index.tuple(u);
    for (std::size_t i = 0; i < subset.size(); ++i) selected[i] = t[subset[i]];
    f[u] = sub.flat(selected);
  }
  MarkovKernel kernel = deterministic_kernel(f, sub.total());
  return MarkovKernel(kernel.rows(), sub_dims);
}

namespace {

std::vector<std::vector<int>> nonempty_subsets(int factors) {
  std::vector<std::vector<int>> subsets;
  for (int mask = 1; mask < (1 << factors); ++mask) {
    std::vector<int> subset;
    for (int d = 0; d < factors; ++d)
      if (mask & (1 << d)) subset.push_back(d);
    subsets.push_back(std::move(subset));
  }
  return subsets;
}

/// Marginalizes a measure on the factors in `outer` onto the factors in
/// `inner` (inner must be a subsequence of outer).
Vector marginalize(const Vector& measure, const std::vector<int>& outer,
                   const std::vector<int>& inner, const ProductIndex& index) {
  std::vector<Eigen::Index> outer_dims, inner_dims;
  std::vector<std::size_t> positions;  // position of each inner factor within outer
  for (int d : outer) outer_dims.push_back(index.dims()[d]);
  for (int d : inner) {
    const auto it = std::find(outer.begin(), outer.end(), d);
    positions.push_back(static_cast<std::size_t>(it - outer.begin()));
    inner_dims.push_back(index.dims()[d]);
  }
  const ProductIndex outer_index(outer_dims);
  const ProductIndex inner_index(inner_dims);
  Vector out = Vector::Zero(inner_index.total());
  std::vector<Eigen::Index> selected(inner.size());
  for (Eigen::Index u = 0; u < outer_index.total(); ++u) {
    const std::vector<Eigen::Index> t = outer_index.tuple(u);
    for (std::size_t i = 0; i < positions.size(); ++i) selected[i] = t[positions[i]];
    out[inner_index.flat(selected)] += measure[u];
  }
  return out;
}

bool is_subset(const std::vector<int>& inner, const std::vector<int>& outer) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

}  // namespace

ConsistencyReport check_inverse_consistency(
    const std::map<std::vector<int>, FiniteMeasure>& measures, const ProductIndex& index) {
  const int factors = static_cast<int>(index.factors());
  const std::vector<std::vector<int>> subsets = nonempty_subsets(factors);
  for (const std::vector<int>& subset : subsets) {
    if (!measures.contains(subset)) {
      std::string name;
      for (int d : subset) name += (name.empty() ? "" : ",") + std::to_string(d);
      fail(ErrorCode::MissingSubset, "no measure for the subset {" + name + "}");
    }
  }

  ConsistencyReport report;
  for (const std::vector<int>& outer : subsets) {
    for (const std::vector<int>& inner : subsets) {
      if (inner.size() >= outer.size() || !is_subset(inner, outer)) continue;
      const Vector projected =
          marginalize(measures.at(outer).weights(), outer, inner, index);
      const double residual =
          (projected - measures.at(inner).weights()).cwiseAbs().maxCoeff();
      if (residual > report.max_residual) {
        report.max_residual = residual;
        report.worst_inner = inner;
        report.worst_outer = outer;
      }
    }
  }
  return report;
}

LimitCandidate build_limit_candidate(std::span<const SquareGraphon> gs,
                                     std::span<const LimitTarget> targets, double tol,
                                     Eigen::Index product_cap) {
  if (gs.empty()) fail(ErrorCode::EmptyList, "empty graphon sequence");
  if (targets.empty()) fail(ErrorCode::EmptyList, "no limit targets");
  if (targets.size() > 8)
    fail(ErrorCode::CapExceeded, "at most 8 product factors are supported");

  std::vector<Eigen::Index> dims;
  for (const LimitTarget& target : targets) {
    dims.push_back(target.k);
    if (target.kernels.size() != gs.size())
      fail(ErrorCode::DimensionMismatch, "every factor needs one kernel per sequence element");
  }
  ProductIndex index(dims);
  if (index.total() > product_cap)
    fail(ErrorCode::CapExceeded, "product space has " + std::to_string(index.total()) +
                                     " points, cap is " + std::to_string(product_cap));

  const std::size_t count = gs.size();
  const std::size_t factors = targets.size();
  for (std::size_t d = 0; d < factors; ++d)
    for (std::size_t i = 0; i < count; ++i) {
      if (targets[d].kernels[i].source_size() != gs[i].n() ||
          targets[d].kernels[i].target_size() != targets[d].k)
        fail(ErrorCode::DimensionMismatch,
             "kernel " + std::to_string(i) + " of factor " + std::to_string(d) +
                 " does not map the sequence element into the factor space");
    }

  // Per-factor and full-product pushforward sequences.
  std::vector<std::vector<Vector>> factor_vertex(factors), factor_edge(factors);
  std::vector<Vector> full_vertex, full_edge;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<MarkovKernel> row;
    row.reserve(factors);
    for (std::size_t d = 0; d < factors; ++d) {
      const MarkovKernel& kernel = targets[d].kernels[i];
      factor_vertex[d].push_back(pushforward(kernel, gs[i].pi()).weights());
      const Matrix edge = pushforward_square(kernel, gs[i].mu()).weights();
      factor_edge[d].push_back(Eigen::Map<const Vector>(edge.data(), edge.size()));
      row.push_back(kernel);
    }
    const MarkovKernel product = product_kernel(row);
    full_vertex.push_back(pushforward(product, gs[i].pi()).weights());
    const Matrix edge = pushforward_square(product, gs[i].mu()).weights();
    full_edge.push_back(Eigen::Map<const Vector>(edge.data(), edge.size()));
  }

  // Candidate at the last element; the edge measure goes through the theta
  // reindexing round trip, matching the construction on the product of squares.
  const Eigen::Index total = index.total();
  ProbabilityMeasure pi(full_vertex.back());
  EdgeMeasure nu(Matrix(Eigen::Map<const Matrix>(full_edge.back().data(), total, total)));
  const FiniteMeasure theta_side = theta_reindex(nu, index);
  SquareGraphon graphon(std::move(pi), theta_unreindex(theta_side, index));

  // Inverse-system consistency of the subset marginals at the last element:
  // the vertex family directly, the edge family through theta on the squared
  // factor sizes.
  std::vector<Eigen::Index> squared_dims;
  for (Eigen::Index d : dims) squared_dims.push_back(d * d);
  const ProductIndex squared_index(std::move(squared_dims));
  std::map<std::vector<int>, FiniteMeasure> vertex_family;
  std::map<std::vector<int>, FiniteMeasure> edge_family;
  for (const std::vector<int>& subset : nonempty_subsets(static_cast<int>(factors))) {
    std::vector<MarkovKernel> chosen;
    std::vector<Eigen::Index> sub_dims;
    for (int d : subset) {
      chosen.push_back(targets[d].kernels[count - 1]);
      sub_dims.push_back(targets[d].k);
    }
    const MarkovKernel product = product_kernel(chosen);
    vertex_family.emplace(subset, pushforward(product, gs[count - 1].pi()).as_finite());
    const ProductIndex sub_index(sub_dims);
    edge_family.emplace(subset,
                        theta_reindex(pushforward_square(product, gs[count - 1].mu()), sub_index));
  }
  const ConsistencyReport vertex_consistency = check_inverse_consistency(vertex_family, index);
  const ConsistencyReport edge_consistency =
      check_inverse_consistency(edge_family, squared_index);

  LimitCandidate candidate{std::move(index),
                           std::move(graphon),
                           {},
                           {},
                           0.0,
                           0.0,
                           0.0,
                           false,
                           "finite factor set: the inverse limit of the subset marginals is the "
                           "full-product measure itself"};
  for (std::size_t d = 0; d < factors; ++d) {
    candidate.per_dim_vertex_residual.push_back(tail_max(successive_dinf(factor_vertex[d])));
    candidate.per_dim_edge_residual.push_back(tail_max(successive_dinf(factor_edge[d])));
  }
  candidate.full_vertex_residual = tail_max(successive_dinf(full_vertex));
  candidate.full_edge_residual = tail_max(successive_dinf(full_edge));
  candidate.consistency_residual =
      std::max(vertex_consistency.max_residual, edge_consistency.max_residual);
  candidate.consistent = candidate.consistency_residual <= tol;
  return candidate;
}

LimitValidationReport validate_limit(const LimitCandidate& candidate,
                                     std::span<const SquareGraphon> gs,
                                     std::span<const Eigen::Index> ks, long long budget,
                                     std::uint64_t seed, double tol, double slack) {
  if (gs.empty()) fail(ErrorCode::EmptyList, "empty graphon sequence");
  LimitValidationReport report;
  report.pass = true;

  std::vector<double> tail_residuals(ks.size(), 0.0);
  if (gs.size() >= 2) {
    const ConvergenceReport convergence =
        sequence_convergence_report(gs, ks, budget, seed, SampleStrategy::Mixed);
    tail_residuals = convergence.cauchy_residuals;
  }

  for (std::size_t a = 0; a < ks.size(); ++a) {
    const Eigen::Index k = ks[a];
    const ShapeCloud candidate_cloud =
        sample_kshape(candidate.graphon, k, SampleStrategy::Mixed, budget, seed);
    const ShapeCloud last_cloud =
        sample_kshape(gs.back(), k, SampleStrategy::Mixed, budget, seed);
    LimitValidationEntry entry;
    entry.k = k;
    entry.candidate_distance = hausdorff(candidate_cloud, last_cloud);
    entry.tail_residual = tail_residuals[a];
    entry.pass =
        entry.candidate_distance <= tol + slack && entry.tail_residual <= tol + slack;
    report.pass = report.pass && entry.pass;
    report.per_k.push_back(entry);
  }
  return report;
}

}  // namespace sqg
