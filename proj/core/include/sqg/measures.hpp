#pragma once

#include <optional>

#include <Eigen/Core>

#include "sqg/error.hpp"

namespace sqg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Absolute tolerance for "sums to one" checks on probability vectors and
/// kernel rows. After validation the data is renormalized exactly (divided by
/// its sum) so downstream algebraic identities hold to machine precision.
inline constexpr double kProbabilityTol = 1e-9;

/// Nonnegative weights on a finite ground set.
class FiniteMeasure {
 public:
  explicit FiniteMeasure(Vector weights);

  const Vector& weights() const { return weights_; }
  Eigen::Index size() const { return weights_.size(); }
  double total() const { return weights_.sum(); }
  double operator[](Eigen::Index i) const { return weights_[i]; }

 private:
  Vector weights_;
};

/// Nonnegative weights summing to one (within kProbabilityTol on input,
/// exactly renormalized after validation).
class ProbabilityMeasure {
 public:
  explicit ProbabilityMeasure(Vector weights);

  static ProbabilityMeasure uniform(Eigen::Index n);

  const Vector& weights() const { return weights_; }
  Eigen::Index size() const { return weights_.size(); }
  double operator[](Eigen::Index i) const { return weights_[i]; }
  FiniteMeasure as_finite() const { return FiniteMeasure(weights_); }

 private:
  Vector weights_;
};

/// Finite measure on the square of a ground set: mass on ordered pairs.
class EdgeMeasure {
 public:
  explicit EdgeMeasure(Matrix weights);

  static EdgeMeasure zero(Eigen::Index n);

  const Matrix& weights() const { return weights_; }
  Eigen::Index size() const { return weights_.rows(); }
  double total() const { return weights_.sum(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return weights_(i, j); }

 private:
  Matrix weights_;
};

/// A vertex distribution together with an edge mass on ordered pairs, on a
/// common finite ground set. Immutable after construction.
class SquareGraphon {
 public:
  SquareGraphon(ProbabilityMeasure pi, EdgeMeasure mu);

  Eigen::Index n() const { return pi_.size(); }
  const ProbabilityMeasure& pi() const { return pi_; }
  const EdgeMeasure& mu() const { return mu_; }

 private:
  ProbabilityMeasure pi_;
  EdgeMeasure mu_;
};

/// Validating constructor from raw data.
SquareGraphon new_square_graphon(Vector pi, Matrix mu);

double total_edge_mass(const SquareGraphon& g);

bool is_symmetric(const Matrix& mu, double tol);
bool is_symmetric(const SquareGraphon& g, double tol);

enum class Side { First, Second };

/// Row sums (Side::First) or column sums (Side::Second) of the edge mass:
/// the pushforward of mu along the corresponding coordinate projection.
FiniteMeasure marginal(const SquareGraphon& g, Side side);

/// pi + rowsums(mu) + colsums(mu). Dominates every measure relevant to
/// kernel perturbation arguments; its total mass is 1 + 2 * total_edge_mass.
FiniteMeasure reference_measure_gamma(const SquareGraphon& g);

enum class EdgeNormalization { None, TotalMassOne };

/// Reads a weighted directed graph as a graphon: pi is the normalized
/// counting measure (or normalized vertex_weights), mu the adjacency matrix,
/// optionally rescaled to total mass one.
SquareGraphon from_graph(const Matrix& adjacency,
                         const std::optional<Vector>& vertex_weights = std::nullopt,
                         EdgeNormalization normalization = EdgeNormalization::None);

/// Discretizes a symmetric [0,1]-valued kernel function sampled on an m x m
/// grid: pi uniform over the m cells, mu[i][j] = w[i][j] / m^2.
SquareGraphon from_grid_graphon(const Matrix& w);

}  // namespace sqg
