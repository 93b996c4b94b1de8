#include "sqg/morphisms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sqg {

SquareGraphon apply(const MarkovKernel& kappa, const SquareGraphon& g) {
  return SquareGraphon(pushforward(kappa, g.pi()), pushforward_square(kappa, g.mu()));
}

MorphismReport verify_morphism(const MarkovKernel& kappa, const SquareGraphon& src,
                               const SquareGraphon& dst, double tol) {
  if (kappa.source_size() != src.n() || kappa.target_size() != dst.n())
    fail(ErrorCode::DimensionMismatch, "kernel does not map the source onto the target space");
  const SquareGraphon image = apply(kappa, src);
  MorphismReport report;
  report.vertex_residual =
      (image.pi().weights() - dst.pi().weights()).cwiseAbs().maxCoeff();
  report.edge_residual = (image.mu().weights() - dst.mu().weights()).cwiseAbs().maxCoeff();
  report.tol = tol;
  report.is_morphism = report.vertex_residual <= tol && report.edge_residual <= tol;
  return report;
}

namespace {

/// Reads kappa as a permutation under the 0/1 threshold rule; empty when any
/// entry is ambiguous or the matrix is not a bijection.
std::optional<std::vector<Eigen::Index>> permutation_of(const MarkovKernel& kappa, double tol) {
  if (kappa.source_size() != kappa.target_size()) return std::nullopt;
  const Eigen::Index n = kappa.source_size();
  std::vector<Eigen::Index> image(n, -1);
  std::vector<bool> hit(n, false);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = kappa(i, j);
      if (v >= 1.0 - tol) {
        if (image[i] != -1) return std::nullopt;
        image[i] = j;
      } else if (v > tol) {
        return std::nullopt;
      }
    }
    if (image[i] == -1 || hit[image[i]]) return std::nullopt;
    hit[image[i]] = true;
  }
  return image;
}

bool transports(const std::vector<Eigen::Index>& perm, const SquareGraphon& src,
                const SquareGraphon& dst, double tol) {
  const Eigen::Index n = src.n();
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(src.pi()[i] - dst.pi()[perm[i]]) > tol) return false;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (std::abs(src.mu()(i, j) - dst.mu()(perm[i], perm[j])) > tol) return false;
  return true;
}

}  // namespace

bool is_isomorphism(const MarkovKernel& kappa, const SquareGraphon& src,
                    const SquareGraphon& dst, double tol) {
  if (kappa.source_size() != src.n() || kappa.target_size() != dst.n())
    fail(ErrorCode::DimensionMismatch, "kernel does not map the source onto the target space");
  const auto perm = permutation_of(kappa, tol);
  if (!perm) return false;
  return transports(*perm, src, dst, tol);
}

std::optional<std::vector<Eigen::Index>> find_isomorphism(const SquareGraphon& g1,
                                                          const SquareGraphon& g2, double tol) {
  if (g1.n() > 10 || g2.n() > 10)
    fail(ErrorCode::TooLarge, "exhaustive isomorphism search is capped at 10 points");
  if (g1.n() != g2.n()) return std::nullopt;
  std::vector<Eigen::Index> perm(g1.n());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (transports(perm, g1, g2, tol)) return perm;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

SquareGraphon balanced_blowup(const SquareGraphon& g, Eigen::Index factor) {
  if (factor < 1) fail(ErrorCode::ZeroCopies, "blow-up factor must be at least 1");
  const AtomSplit split = atom_split_kernel(std::vector<Eigen::Index>(g.n(), factor));
  return apply(split.forward, g);
}

}  // namespace sqg
