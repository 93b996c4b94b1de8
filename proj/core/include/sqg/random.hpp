#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Core>

namespace sqg::rng {

/// splitmix64 step. Used both as a standalone mixer and as the generator
/// behind Engine, so that sampled output depends only on the seed and never
/// on the platform's std::distribution implementations.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream seed for sample index `stream`. Sampling
/// loops seed one Engine per index, which keeps parallel sampling
/// schedule-independent.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
  return splitmix64(s);
}

class Engine {
 public:
  explicit Engine(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() { return splitmix64(state_); }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

/// One row of the flat Dirichlet on the (k-1)-simplex: k iid exponentials,
/// normalized.
inline Eigen::VectorXd dirichlet_row(Engine& engine, Eigen::Index k) {
  Eigen::VectorXd row(k);
  double total = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    double e = -std::log1p(-engine.uniform());
    row[j] = e;
    total += e;
  }
  if (total <= 0.0) return Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));
  return row / total;
}

/// Random row-stochastic matrix, rows iid flat Dirichlet.
inline Eigen::MatrixXd random_stochastic(Engine& engine, Eigen::Index n, Eigen::Index k) {
  Eigen::MatrixXd m(n, k);
  for (Eigen::Index i = 0; i < n; ++i) m.row(i) = dirichlet_row(engine, k).transpose();
  return m;
}

}  // namespace sqg::rng
