#include "sqg/measures.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace sqg {
namespace {

void require_entries_nonnegative_finite(const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) fail(ErrorCode::Negative, "non-finite entry at " + std::to_string(i));
    if (v[i] < 0.0) fail(ErrorCode::Negative, "negative entry at " + std::to_string(i));
  }
}

void require_entries_nonnegative_finite(const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (!std::isfinite(m(i, j)))
        fail(ErrorCode::Negative, "non-finite entry at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      if (m(i, j) < 0.0)
        fail(ErrorCode::Negative, "negative entry at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
}

}  // namespace

FiniteMeasure::FiniteMeasure(Vector weights) : weights_(std::move(weights)) {
  if (weights_.size() == 0) fail(ErrorCode::EmptyGraph, "measure on an empty ground set");
  require_entries_nonnegative_finite(weights_);
}

ProbabilityMeasure::ProbabilityMeasure(Vector weights) : weights_(std::move(weights)) {
  if (weights_.size() == 0) fail(ErrorCode::EmptyGraph, "probability measure on an empty ground set");
  require_entries_nonnegative_finite(weights_);
  const double sum = weights_.sum();
  if (std::abs(sum - 1.0) > kProbabilityTol)
    fail(ErrorCode::NonStochastic, "weights sum to " + std::to_string(sum) + ", expected 1");
  // renormalize exactly, but keep already-normalized data bit-stable
  if (std::abs(sum - 1.0) > 16.0 * std::numeric_limits<double>::epsilon()) weights_ /= sum;
}

ProbabilityMeasure ProbabilityMeasure::uniform(Eigen::Index n) {
  if (n <= 0) fail(ErrorCode::EmptyGraph, "uniform measure needs a non-empty ground set");
  return ProbabilityMeasure(Vector::Constant(n, 1.0 / static_cast<double>(n)));
}

EdgeMeasure::EdgeMeasure(Matrix weights) : weights_(std::move(weights)) {
  if (weights_.rows() == 0) fail(ErrorCode::EmptyGraph, "edge measure on an empty ground set");
  if (weights_.rows() != weights_.cols())
    fail(ErrorCode::DimensionMismatch, "edge measure must be square");
  require_entries_nonnegative_finite(weights_);
}

EdgeMeasure EdgeMeasure::zero(Eigen::Index n) { return EdgeMeasure(Matrix::Zero(n, n)); }

SquareGraphon::SquareGraphon(ProbabilityMeasure pi, EdgeMeasure mu)
    : pi_(std::move(pi)), mu_(std::move(mu)) {
  if (pi_.size() != mu_.size())
    fail(ErrorCode::DimensionMismatch,
         "vertex distribution has " + std::to_string(pi_.size()) + " points, edge measure " +
             std::to_string(mu_.size()));
}

SquareGraphon new_square_graphon(Vector pi, Matrix mu) {
  return SquareGraphon(ProbabilityMeasure(std::move(pi)), EdgeMeasure(std::move(mu)));
}

double total_edge_mass(const SquareGraphon& g) { return g.mu().total(); }

bool is_symmetric(const Matrix& mu, double tol) {
  for (Eigen::Index i = 0; i < mu.rows(); ++i)
    for (Eigen::Index j = i + 1; j < mu.cols(); ++j)
      if (std::abs(mu(i, j) - mu(j, i)) > tol) return false;
  return true;
}

bool is_symmetric(const SquareGraphon& g, double tol) {
  return is_symmetric(g.mu().weights(), tol);
}

FiniteMeasure marginal(const SquareGraphon& g, Side side) {
  const Matrix& mu = g.mu().weights();
  Vector sums;
  if (side == Side::First)
    sums = mu.rowwise().sum();
  else
    sums = mu.colwise().sum().transpose();
  return FiniteMeasure(std::move(sums));
}

FiniteMeasure reference_measure_gamma(const SquareGraphon& g) {
  const Matrix& mu = g.mu().weights();
  Vector gamma = g.pi().weights() + mu.rowwise().sum() + mu.colwise().sum().transpose();
  return FiniteMeasure(std::move(gamma));
}

SquareGraphon from_graph(const Matrix& adjacency, const std::optional<Vector>& vertex_weights,
                         EdgeNormalization normalization) {
  const Eigen::Index n = adjacency.rows();
  if (n == 0) fail(ErrorCode::EmptyGraph, "graph has no vertices");
  if (adjacency.cols() != n) fail(ErrorCode::DimensionMismatch, "adjacency must be square");
  require_entries_nonnegative_finite(adjacency);

  Vector pi;
  if (vertex_weights) {
    if (vertex_weights->size() != n)
      fail(ErrorCode::DimensionMismatch, "vertex weights do not match the adjacency size");
    require_entries_nonnegative_finite(*vertex_weights);
    const double sum = vertex_weights->sum();
    if (sum <= 0.0) fail(ErrorCode::Negative, "vertex weights must have positive sum");
    pi = *vertex_weights / sum;
  } else {
    pi = Vector::Constant(n, 1.0 / static_cast<double>(n));
  }

  Matrix mu = adjacency;
  if (normalization == EdgeNormalization::TotalMassOne) {
    const double mass = mu.sum();
    if (mass > 0.0) mu /= mass;
  }
  return SquareGraphon(ProbabilityMeasure(std::move(pi)), EdgeMeasure(std::move(mu)));
}

SquareGraphon from_grid_graphon(const Matrix& w) {
  const Eigen::Index m = w.rows();
  if (m == 0) fail(ErrorCode::EmptyGraph, "empty grid");
  if (w.cols() != m) fail(ErrorCode::DimensionMismatch, "grid must be square");
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      if (!std::isfinite(w(i, j)) || w(i, j) < 0.0 || w(i, j) > 1.0)
        fail(ErrorCode::OutOfRange,
             "grid value at (" + std::to_string(i) + "," + std::to_string(j) + ") outside [0,1]");
  if (!is_symmetric(w, 0.0)) fail(ErrorCode::NotSymmetric, "grid is not symmetric");

  const double cells = static_cast<double>(m);
  Matrix mu = w / (cells * cells);
  return SquareGraphon(ProbabilityMeasure::uniform(m), EdgeMeasure(std::move(mu)));
}

}  // namespace sqg
