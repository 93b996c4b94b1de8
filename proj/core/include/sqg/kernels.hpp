#pragma once

#include <span>
#include <vector>

#include "sqg/measures.hpp"

namespace sqg {

/// Row-stochastic matrix: row i is the distribution of the random image of
/// source point i. Rows are validated to sum to one within kProbabilityTol
/// and then renormalized exactly.
///
/// Kernels into product spaces carry a target_shape [k_1,...,k_L]; the
/// column for the tuple (j_1,...,j_L) is the row-major flat index in the
/// order the factors were given. Plain kernels have target_shape {m}.
class MarkovKernel {
 public:
  explicit MarkovKernel(Matrix rows);
  MarkovKernel(Matrix rows, std::vector<Eigen::Index> target_shape);

  static MarkovKernel identity(Eigen::Index n);

  Eigen::Index source_size() const { return rows_.rows(); }
  Eigen::Index target_size() const { return rows_.cols(); }
  const Matrix& rows() const { return rows_; }
  const std::vector<Eigen::Index>& target_shape() const { return target_shape_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return rows_(i, j); }

 private:
  Matrix rows_;
  std::vector<Eigen::Index> target_shape_;
};

/// Dirac rows: source point i maps to f[i] with probability one.
/// f uses 0-based indices into a target of size m.
MarkovKernel deterministic_kernel(const std::vector<Eigen::Index>& f, Eigen::Index m);

/// Kernel composition; on finite spaces this is the matrix product.
MarkovKernel compose(const MarkovKernel& kappa, const MarkovKernel& kappa_prime);

/// Product kernel into the product target: each source point maps to the
/// product of its per-factor distributions. Target indexed row-major in the
/// given factor order; the result records target_shape.
MarkovKernel product_kernel(std::span<const MarkovKernel> kernels);

/// Kernel on ordered pairs acting independently on each coordinate:
/// entry ((i1,i2),(j1,j2)) = rows(i1,j1) * rows(i2,j2), pairs flattened
/// row-major (i1*n + i2 and j1*m + j2).
MarkovKernel tensor_square(const MarkovKernel& kappa);

/// result[j] = sum_i measure[i] * rows(i, j). Preserves total mass.
FiniteMeasure pushforward(const MarkovKernel& kappa, const FiniteMeasure& measure);
ProbabilityMeasure pushforward(const MarkovKernel& kappa, const ProbabilityMeasure& measure);

/// Pushforward of an edge mass along the tensor square:
/// result(j1,j2) = sum_{i1,i2} mu(i1,i2) * rows(i1,j1) * rows(i2,j2).
EdgeMeasure pushforward_square(const MarkovKernel& kappa, const EdgeMeasure& mu);

/// For a surjective f: [s] -> [k] (0-based), the kernel from [k] to [s]
/// whose row m is uniform over the fiber f^{-1}(m).
MarkovKernel splitting_kernel(const std::vector<Eigen::Index>& f, Eigen::Index k);

struct AtomSplit {
  MarkovKernel forward;   ///< n -> N, splits point i uniformly over copies[i] targets
  MarkovKernel backward;  ///< N -> n, deterministic collapse of copies
};

/// Balanced replacement of each source point by copies[i] equal-weight
/// copies, laid out consecutively in source order.
/// compose(forward, backward) is the identity kernel.
AtomSplit atom_split_kernel(const std::vector<Eigen::Index>& copies);

/// Column-wise L1(gamma) distances between two kernels of equal shape:
/// entry m = sum_i gamma[i] * |k1(i,m) - k2(i,m)|.
Vector l1_column_distances(const MarkovKernel& k1, const MarkovKernel& k2,
                           const FiniteMeasure& gamma);

}  // namespace sqg
