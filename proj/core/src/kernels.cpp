#include "sqg/kernels.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace sqg {
namespace {

Matrix validated_rows(Matrix rows) {
  if (rows.rows() == 0 || rows.cols() == 0)
    fail(ErrorCode::EmptyGraph, "kernel between empty spaces");
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
      const double v = rows(i, j);
      if (!std::isfinite(v) || v < 0.0)
        fail(ErrorCode::Negative, "kernel entry at (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") is negative or non-finite");
      if (v > 1.0 + kProbabilityTol)
        fail(ErrorCode::OutOfRange,
             "kernel entry at (" + std::to_string(i) + "," + std::to_string(j) + ") exceeds 1");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kProbabilityTol)
      fail(ErrorCode::NonStochastic,
           "row " + std::to_string(i) + " sums to " + std::to_string(sum));
    // renormalize exactly, but keep already-stochastic rows bit-stable
    if (std::abs(sum - 1.0) > 16.0 * std::numeric_limits<double>::epsilon()) rows.row(i) /= sum;
  }
  return rows;
}

Eigen::Index shape_product(const std::vector<Eigen::Index>& shape) {
  Eigen::Index p = 1;
  for (Eigen::Index d : shape) p *= d;
  return p;
}

}  // namespace

MarkovKernel::MarkovKernel(Matrix rows) : rows_(validated_rows(std::move(rows))) {
  target_shape_ = {rows_.cols()};
}

MarkovKernel::MarkovKernel(Matrix rows, std::vector<Eigen::Index> target_shape)
    : rows_(validated_rows(std::move(rows))), target_shape_(std::move(target_shape)) {
  if (shape_product(target_shape_) != rows_.cols())
    fail(ErrorCode::DimensionMismatch, "target shape does not factor the column count");
}

MarkovKernel MarkovKernel::identity(Eigen::Index n) {
  return MarkovKernel(Matrix::Identity(n, n));
}

MarkovKernel deterministic_kernel(const std::vector<Eigen::Index>& f, Eigen::Index m) {
  if (f.empty()) fail(ErrorCode::EmptyGraph, "deterministic kernel needs a non-empty source");
  const Eigen::Index n = static_cast<Eigen::Index>(f.size());
  Matrix rows = Matrix::Zero(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (f[i] < 0 || f[i] >= m)
      fail(ErrorCode::OutOfRange,
           "map value " + std::to_string(f[i]) + " at " + std::to_string(i) + " outside [0," +
               std::to_string(m) + ")");
    rows(i, f[i]) = 1.0;
  }
  return MarkovKernel(std::move(rows));
}

MarkovKernel compose(const MarkovKernel& kappa, const MarkovKernel& kappa_prime) {
  if (kappa.target_size() != kappa_prime.source_size())
    fail(ErrorCode::DimensionMismatch,
         "compose: inner sizes " + std::to_string(kappa.target_size()) + " vs " +
             std::to_string(kappa_prime.source_size()));
  return MarkovKernel(kappa.rows() * kappa_prime.rows(), kappa_prime.target_shape());
}

MarkovKernel product_kernel(std::span<const MarkovKernel> kernels) {
  if (kernels.empty()) fail(ErrorCode::EmptyList, "product of no kernels");
  const Eigen::Index n = kernels.front().source_size();
  std::vector<Eigen::Index> shape;
  Eigen::Index total = 1;
  for (const MarkovKernel& kernel : kernels) {
    if (kernel.source_size() != n)
      fail(ErrorCode::DimensionMismatch, "product kernels must share the source");
    shape.push_back(kernel.target_size());
    total *= kernel.target_size();
  }

  Matrix rows = Matrix::Ones(n, total);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index block = total;
    for (std::size_t l = 0; l < kernels.size(); ++l) {
      const Eigen::Index kl = shape[l];
      block /= kl;
      // column c picks digit (c / block) % kl of factor l (row-major order)
      for (Eigen::Index c = 0; c < total; ++c)
        rows(i, c) *= kernels[l](i, (c / block) % kl);
    }
  }
  return MarkovKernel(std::move(rows), std::move(shape));
}

MarkovKernel tensor_square(const MarkovKernel& kappa) {
  const Eigen::Index n = kappa.source_size();
  const Eigen::Index m = kappa.target_size();
  Matrix rows(n * n, m * m);
  for (Eigen::Index i1 = 0; i1 < n; ++i1)
    for (Eigen::Index i2 = 0; i2 < n; ++i2)
      for (Eigen::Index j1 = 0; j1 < m; ++j1)
        for (Eigen::Index j2 = 0; j2 < m; ++j2)
          rows(i1 * n + i2, j1 * m + j2) = kappa(i1, j1) * kappa(i2, j2);
  return MarkovKernel(std::move(rows), {m, m});
}

FiniteMeasure pushforward(const MarkovKernel& kappa, const FiniteMeasure& measure) {
  if (measure.size() != kappa.source_size())
    fail(ErrorCode::DimensionMismatch,
         "pushforward: measure on " + std::to_string(measure.size()) + " points, kernel from " +
             std::to_string(kappa.source_size()));
  Vector result = kappa.rows().transpose() * measure.weights();
  return FiniteMeasure(std::move(result));
}

ProbabilityMeasure pushforward(const MarkovKernel& kappa, const ProbabilityMeasure& measure) {
  return ProbabilityMeasure(pushforward(kappa, measure.as_finite()).weights());
}

EdgeMeasure pushforward_square(const MarkovKernel& kappa, const EdgeMeasure& mu) {
  if (mu.size() != kappa.source_size())
    fail(ErrorCode::DimensionMismatch,
         "pushforward_square: edge measure on " + std::to_string(mu.size()) +
             " points, kernel from " + std::to_string(kappa.source_size()));
  Matrix result = kappa.rows().transpose() * mu.weights() * kappa.rows();
  return EdgeMeasure(std::move(result));
}

MarkovKernel splitting_kernel(const std::vector<Eigen::Index>& f, Eigen::Index k) {
  if (f.empty()) fail(ErrorCode::EmptyGraph, "splitting kernel needs a non-empty source");
  const Eigen::Index s = static_cast<Eigen::Index>(f.size());
  std::vector<Eigen::Index> fiber_sizes(k, 0);
  for (Eigen::Index x = 0; x < s; ++x) {
    if (f[x] < 0 || f[x] >= k)
      fail(ErrorCode::OutOfRange, "map value " + std::to_string(f[x]) + " outside [0," +
                                      std::to_string(k) + ")");
    ++fiber_sizes[f[x]];
  }
  for (Eigen::Index m = 0; m < k; ++m)
    if (fiber_sizes[m] == 0)
      fail(ErrorCode::NotSurjective, "fiber of " + std::to_string(m) + " is empty");

  Matrix rows = Matrix::Zero(k, s);
  for (Eigen::Index x = 0; x < s; ++x)
    rows(f[x], x) = 1.0 / static_cast<double>(fiber_sizes[f[x]]);
  return MarkovKernel(std::move(rows));
}

AtomSplit atom_split_kernel(const std::vector<Eigen::Index>& copies) {
  if (copies.empty()) fail(ErrorCode::EmptyGraph, "atom split of an empty space");
  const Eigen::Index n = static_cast<Eigen::Index>(copies.size());
  Eigen::Index total = 0;
  for (Eigen::Index c : copies) {
    if (c < 1) fail(ErrorCode::ZeroCopies, "every point needs at least one copy");
    total += c;
  }

  Matrix forward = Matrix::Zero(n, total);
  std::vector<Eigen::Index> collapse(total);
  Eigen::Index offset = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < copies[i]; ++c) {
      forward(i, offset + c) = 1.0 / static_cast<double>(copies[i]);
      collapse[offset + c] = i;
    }
    offset += copies[i];
  }
  return AtomSplit{MarkovKernel(std::move(forward)), deterministic_kernel(collapse, n)};
}

Vector l1_column_distances(const MarkovKernel& k1, const MarkovKernel& k2,
                           const FiniteMeasure& gamma) {
  if (k1.source_size() != k2.source_size() || k1.target_size() != k2.target_size())
    fail(ErrorCode::DimensionMismatch, "kernels must have the same shape");
  if (gamma.size() != k1.source_size())
    fail(ErrorCode::DimensionMismatch, "weighting measure does not match the kernel source");
  return (k1.rows() - k2.rows()).cwiseAbs().transpose() * gamma.weights();
}

}  // namespace sqg
