#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sqg/morphisms.hpp"

namespace sqg {

struct RebalanceStep {
  Eigen::Index m1 = 0;  ///< overfull column fixed to 1/k by this step
  Eigen::Index m2 = 0;  ///< underfull column absorbing the excess
  double beta0 = 0.0;   ///< clip level, always in (0, 2*d*k)
};

struct RebalanceTrace {
  double initial_d = 0.0;  ///< d_inf(kappa*pi, uniform) before rebalancing
  std::vector<RebalanceStep> steps;
};

struct RebalanceResult {
  MarkovKernel kernel;
  RebalanceTrace trace;
};

/// Rebalances a kernel kappa: [g.n] -> [k] so its vertex pushforward becomes
/// uniform, by repeatedly clipping the most overfull column at a level beta0
/// chosen so its mass is exactly 1/k and crediting the clipped mass to the
/// most underfull column (ties by smallest index). Terminates in at most k-1
/// effective steps; each entry moves by less than 2*d*k per step, and the
/// induced edge measure moves by at most 4*(1 + 2*mu_total)*k*(k-1)*d overall.
///
/// Requires d = d_inf(kappa*pi, uniform) <= 1/(4k^2) (PreconditionViolated).
/// beta0 is found by bisection on [0, 2dk]; the target 1/k is matched within
/// 1e-12 (NoRoot when the bracket fails, which cannot happen under the
/// precondition).
RebalanceResult rebalance_kernel(const MarkovKernel& kappa, const SquareGraphon& g);

struct PerturbationReport {
  double eta = 0.0;               ///< max column-wise L1(gamma) kernel distance
  double vertex_deviation = 0.0;  ///< d_inf of the two vertex pushforwards
  double edge_deviation = 0.0;    ///< d_inf of the two edge pushforwards
  bool vertex_within_eta = false;
  bool edge_within_two_eta = false;
};

/// Checks the kernel-perturbation bounds: vertex pushforwards differ by at
/// most eta, edge pushforwards by at most 2*eta (equality slack 1e-12).
PerturbationReport perturbation_bound_check(const MarkovKernel& k1, const MarkovKernel& k2,
                                            const SquareGraphon& g);

struct LipschitzReport {
  double vertex_gap = 0.0;    ///< max entrywise vertex difference of the inputs
  double edge_gap = 0.0;      ///< max entrywise edge difference of the inputs
  double vertex_deviation = 0.0;  ///< max over measurable sets of the pushforward gap
  double edge_deviation = 0.0;
  double vertex_bound = 0.0;  ///< vertex_gap * n
  double edge_bound = 0.0;    ///< edge_gap * n^2
  bool holds = false;
};

/// Finite-space Lipschitz check: for two graphons on a common ground set and
/// any kernel, the pushforward measures differ by at most (entry gap) * n on
/// every measurable set, and the edge pushforwards by (entry gap) * n^2.
/// The max over measurable sets is exact: positive and negative parts of the
/// difference vector.
LipschitzReport lipschitz_bound_check(const SquareGraphon& a, const SquareGraphon& b,
                                      const MarkovKernel& kappa);

struct Rationalization {
  MarkovKernel kernel;
  std::vector<long long> numerators;  ///< exact vertex distribution numerators
  long long denominator = 1;          ///< power of ten; sum(numerators) == denominator
};

/// Redistributes a small multiple of the heaviest column into every other
/// column so the vertex pushforward becomes a vector of positive rationals
/// t_m / S with S a power of ten. Each redistribution coefficient stays below
/// eta / (k * (1 + 2*mu_total)), which keeps the result inside the
/// perturbation envelope of the input kernel. Coefficients are zero where the
/// pushforward is already exactly on the grid.
///
/// Requires eta in (0,1). Throws DenominatorTooLarge when no power of ten
/// <= max_denominator admits valid coefficients.
Rationalization rationalize_vertex_distribution(const MarkovKernel& kappa,
                                                const SquareGraphon& g, double eta,
                                                long long max_denominator = 1000000);

struct Uniformization {
  SquareGraphon graphon;              ///< on s points, vertex distribution exactly uniform
  MarkovKernel split;                 ///< morphism from the input to .graphon
  std::vector<Eigen::Index> fiber_map;  ///< f: [s] -> [k]; the collapse kernel_f maps back
  long long denominator = 1;
};

/// Expands a graphon whose vertex masses are rationals r_m / s into a graphon
/// on s points with exactly uniform vertex distribution, by splitting point m
/// into r_m equal copies. The deterministic collapse along fiber_map is a
/// morphism back. The denominator is recovered by scanning s <= max_denominator
/// (NotRational when none matches) unless supplied explicitly
/// (DenominatorTooLarge when above the cap).
Uniformization uniformize_by_splitting(const SquareGraphon& g,
                                       std::optional<long long> denominator = std::nullopt,
                                       long long max_denominator = 1024);

}  // namespace sqg
