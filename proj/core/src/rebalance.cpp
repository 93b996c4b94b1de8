#include "sqg/rebalance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sqg {
namespace {

/// Deviations at or below this level count as "already uniform". Far below
/// the 1e-9 output contract, far above per-step bisection error (1e-12), so
/// columns fixed by earlier steps are never picked again.
constexpr double kStopTol = 1e-10;
constexpr double kBisectionTol = 1e-12;
constexpr int kBisectionMaxIter = 200;

double clipped_column_mass(const Vector& pi, const Vector& column, double beta) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < pi.size(); ++i)
    total += pi[i] * std::max(column[i] - beta, 0.0);
  return total;
}

}  // namespace

RebalanceResult rebalance_kernel(const MarkovKernel& kappa, const SquareGraphon& g) {
  if (kappa.source_size() != g.n())
    fail(ErrorCode::DimensionMismatch, "kernel source does not match the graphon");
  const Eigen::Index k = kappa.target_size();
  const double target = 1.0 / static_cast<double>(k);
  const Vector& pi = g.pi().weights();

  Matrix rows = kappa.rows();
  Vector rho = rows.transpose() * pi;
  const double initial_d = (rho.array() - target).abs().maxCoeff();
  const double threshold = 1.0 / (4.0 * static_cast<double>(k) * static_cast<double>(k));
  if (initial_d > threshold)
    fail(ErrorCode::PreconditionViolated,
         "vertex pushforward is " + std::to_string(initial_d) +
             " from uniform, above 1/(4k^2) = " + std::to_string(threshold));

  RebalanceTrace trace;
  trace.initial_d = initial_d;

  const double beta_hi = 2.0 * initial_d * static_cast<double>(k);
  for (Eigen::Index step = 0; step < k; ++step) {
    rho = rows.transpose() * pi;
    Eigen::Index m1 = 0;
    Eigen::Index m2 = 0;
    rho.maxCoeff(&m1);
    rho.minCoeff(&m2);
    if ((rho.array() - target).abs().maxCoeff() <= kStopTol) break;

    // Clip column m1 at the level beta0 where its mass is exactly 1/k.
    const Vector column = rows.col(m1);
    if (clipped_column_mass(pi, column, beta_hi) > target + kBisectionTol)
      fail(ErrorCode::NoRoot, "bisection bracket failed; should not happen when d <= 1/(4k^2)");
    double lo = 0.0;
    double hi = beta_hi;
    double beta0 = 0.5 * (lo + hi);
    for (int iter = 0; iter < kBisectionMaxIter; ++iter) {
      beta0 = 0.5 * (lo + hi);
      const double mass = clipped_column_mass(pi, column, beta0);
      if (std::abs(mass - target) <= kBisectionTol) break;
      if (mass > target)
        lo = beta0;
      else
        hi = beta0;
    }

    for (Eigen::Index i = 0; i < pi.size(); ++i) {
      const double clipped = std::max(column[i] - beta0, 0.0);
      rows(i, m2) += column[i] - clipped;
      rows(i, m1) = clipped;
    }
    trace.steps.push_back(RebalanceStep{m1, m2, beta0});
  }

  return RebalanceResult{MarkovKernel(std::move(rows), kappa.target_shape()), std::move(trace)};
}

PerturbationReport perturbation_bound_check(const MarkovKernel& k1, const MarkovKernel& k2,
                                            const SquareGraphon& g) {
  if (k1.source_size() != g.n() || k2.source_size() != g.n() ||
      k1.target_size() != k2.target_size())
    fail(ErrorCode::DimensionMismatch, "kernels must share the graphon source and a target");
  const FiniteMeasure gamma = reference_measure_gamma(g);
  PerturbationReport report;
  report.eta = l1_column_distances(k1, k2, gamma).maxCoeff();
  const Vector rho1 = pushforward(k1, g.pi()).weights();
  const Vector rho2 = pushforward(k2, g.pi()).weights();
  report.vertex_deviation = (rho1 - rho2).cwiseAbs().maxCoeff();
  const Matrix nu1 = pushforward_square(k1, g.mu()).weights();
  const Matrix nu2 = pushforward_square(k2, g.mu()).weights();
  report.edge_deviation = (nu1 - nu2).cwiseAbs().maxCoeff();
  report.vertex_within_eta = report.vertex_deviation <= report.eta + 1e-12;
  report.edge_within_two_eta = report.edge_deviation <= 2.0 * report.eta + 1e-12;
  return report;
}

namespace {

/// max over subsets A of |sum_{i in A} delta_i|: the larger of the positive
/// and negative parts.
double max_set_deviation(const Vector& delta) {
  double pos = 0.0;
  double neg = 0.0;
  for (Eigen::Index i = 0; i < delta.size(); ++i) {
    if (delta[i] > 0.0)
      pos += delta[i];
    else
      neg -= delta[i];
  }
  return std::max(pos, neg);
}

}  // namespace

LipschitzReport lipschitz_bound_check(const SquareGraphon& a, const SquareGraphon& b,
                                      const MarkovKernel& kappa) {
  if (a.n() != b.n() || kappa.source_size() != a.n())
    fail(ErrorCode::DimensionMismatch, "graphons and kernel must share the ground set");
  const double n = static_cast<double>(a.n());

  LipschitzReport report;
  report.vertex_gap = (a.pi().weights() - b.pi().weights()).cwiseAbs().maxCoeff();
  report.edge_gap = (a.mu().weights() - b.mu().weights()).cwiseAbs().maxCoeff();
  report.vertex_bound = report.vertex_gap * n;
  report.edge_bound = report.edge_gap * n * n;

  const Vector vertex_delta =
      pushforward(kappa, a.pi()).weights() - pushforward(kappa, b.pi()).weights();
  report.vertex_deviation = max_set_deviation(vertex_delta);

  const Matrix edge_delta =
      pushforward_square(kappa, a.mu()).weights() - pushforward_square(kappa, b.mu()).weights();
  report.edge_deviation = max_set_deviation(Eigen::Map<const Vector>(edge_delta.data(), edge_delta.size()));

  report.holds = report.vertex_deviation <= report.vertex_bound + 1e-12 &&
                 report.edge_deviation <= report.edge_bound + 1e-12;
  return report;
}

Rationalization rationalize_vertex_distribution(const MarkovKernel& kappa,
                                                const SquareGraphon& g, double eta,
                                                long long max_denominator) {
  if (kappa.source_size() != g.n())
    fail(ErrorCode::DimensionMismatch, "kernel source does not match the graphon");
  if (!(eta > 0.0 && eta < 1.0)) fail(ErrorCode::OutOfRange, "eta must be in (0,1)");

  const Eigen::Index k = kappa.target_size();
  const Vector rho = pushforward(kappa, g.pi()).weights();
  Eigen::Index m0 = 0;
  rho.maxCoeff(&m0);
  if (rho[m0] <= 0.0) fail(ErrorCode::NoPositiveAtom, "vertex pushforward has no positive atom");

  const double bound =
      eta / (static_cast<double>(k) * (1.0 + 2.0 * total_edge_mass(g)));

  std::vector<long long> numerators(k, 0);
  std::vector<double> coefficients(k, 0.0);
  long long denominator = -1;
  for (long long s = 1; s <= max_denominator; s *= 10) {
    bool ok = true;
    long long assigned = 0;
    for (Eigen::Index m = 0; m < k && ok; ++m) {
      if (m == m0) continue;
      const double scaled = rho[m] * static_cast<double>(s);
      long long t;
      if (scaled == std::floor(scaled) && rho[m] > 0.0) {
        t = static_cast<long long>(scaled);  // already on the grid, c_m = 0
      } else {
        t = static_cast<long long>(std::floor(scaled)) + 1;
      }
      const double c = (static_cast<double>(t) / static_cast<double>(s) - rho[m]) / rho[m0];
      if (c < 0.0 || c >= bound) {
        ok = false;
        break;
      }
      numerators[m] = t;
      coefficients[m] = c;
      assigned += t;
    }
    if (ok && s - assigned >= 1) {
      numerators[m0] = s - assigned;
      denominator = s;
      break;
    }
  }
  if (denominator < 0)
    fail(ErrorCode::DenominatorTooLarge,
         "no power-of-ten denominator <= " + std::to_string(max_denominator) +
             " admits redistribution coefficients below " + std::to_string(bound));

  double coefficient_sum = 0.0;
  for (Eigen::Index m = 0; m < k; ++m) coefficient_sum += coefficients[m];

  Matrix rows = kappa.rows();
  const Vector pivot = rows.col(m0);
  for (Eigen::Index m = 0; m < k; ++m) {
    if (m == m0) continue;
    rows.col(m) += coefficients[m] * pivot;
  }
  rows.col(m0) = (1.0 - coefficient_sum) * pivot;

  return Rationalization{MarkovKernel(std::move(rows), kappa.target_shape()),
                         std::move(numerators), denominator};
}

Uniformization uniformize_by_splitting(const SquareGraphon& g,
                                       std::optional<long long> denominator,
                                       long long max_denominator) {
  const Eigen::Index k = g.n();
  const Vector& pi = g.pi().weights();

  const auto fits = [&](long long s, std::vector<long long>& r) {
    long long total = 0;
    for (Eigen::Index m = 0; m < k; ++m) {
      const long long rm = std::llround(pi[m] * static_cast<double>(s));
      if (rm < 1) return false;
      if (std::abs(pi[m] - static_cast<double>(rm) / static_cast<double>(s)) > 1e-9) return false;
      r[m] = rm;
      total += rm;
    }
    return total == s;
  };

  std::vector<long long> counts(k, 0);
  long long s = -1;
  if (denominator) {
    if (*denominator > max_denominator)
      fail(ErrorCode::DenominatorTooLarge,
           "denominator " + std::to_string(*denominator) + " exceeds the cap " +
               std::to_string(max_denominator));
    if (*denominator < 1 || !fits(*denominator, counts))
      fail(ErrorCode::NotRational,
           "vertex masses are not multiples of 1/" + std::to_string(*denominator));
    s = *denominator;
  } else {
    for (long long candidate = 1; candidate <= max_denominator; ++candidate) {
      if (fits(candidate, counts)) {
        s = candidate;
        break;
      }
    }
    if (s < 0)
      fail(ErrorCode::NotRational, "no common denominator <= " + std::to_string(max_denominator) +
                                       " matches the vertex masses");
  }

  std::vector<Eigen::Index> fiber_map(s);
  Eigen::Index offset = 0;
  for (Eigen::Index m = 0; m < k; ++m)
    for (long long c = 0; c < counts[m]; ++c) fiber_map[offset++] = m;

  MarkovKernel split = splitting_kernel(fiber_map, k);
  EdgeMeasure nu = pushforward_square(split, g.mu());
  SquareGraphon uniformized(ProbabilityMeasure::uniform(s), std::move(nu));
  return Uniformization{std::move(uniformized), std::move(split), std::move(fiber_map), s};
}

}  // namespace sqg
