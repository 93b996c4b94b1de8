#pragma once

#include <optional>
#include <vector>

#include "sqg/kernels.hpp"

namespace sqg {

struct MorphismReport {
  double vertex_residual = 0.0;  ///< max abs deviation of kappa*pi from the target pi
  double edge_residual = 0.0;    ///< max abs deviation of kappa^{x2}*mu from the target mu
  double tol = 0.0;
  bool is_morphism = false;
};

/// Transports a graphon along a kernel. The kernel is by construction a
/// morphism from g to the result.
SquareGraphon apply(const MarkovKernel& kappa, const SquareGraphon& g);

/// Residuals of apply(kappa, src) against dst; is_morphism iff both are <= tol.
MorphismReport verify_morphism(const MarkovKernel& kappa, const SquareGraphon& src,
                               const SquareGraphon& dst, double tol);

/// True iff kappa is (within tol) a permutation kernel whose induced bijection
/// transports src's vertex and edge measures onto dst's. An entry counts as 1
/// if >= 1 - tol and as 0 if <= tol; anything else disqualifies.
bool is_isomorphism(const MarkovKernel& kappa, const SquareGraphon& src,
                    const SquareGraphon& dst, double tol);

/// Exhaustive search for a measure-transporting permutation, in lexicographic
/// order. Rejects n > 10 (TooLarge); returns nullopt when no permutation works
/// or the ground sets have different sizes.
std::optional<std::vector<Eigen::Index>> find_isomorphism(const SquareGraphon& g1,
                                                          const SquareGraphon& g2,
                                                          double tol);

/// Replaces every vertex by `factor` equal-weight copies via atom_split_kernel.
/// Morphisms exist in both directions between g and the result.
SquareGraphon balanced_blowup(const SquareGraphon& g, Eigen::Index factor);

}  // namespace sqg
