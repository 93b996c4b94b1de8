#include "sqg/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>

#include "sqg/random.hpp"
#include "sqg/rebalance.hpp"

namespace sqg {
namespace {

int env_thread_count() {
  const char* raw = std::getenv("SQG_THREADS");
  if (raw) {
    const int parsed = std::atoi(raw);
    return parsed < 1 ? 1 : std::min(parsed, 64);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 8u));
}

/// Runs fn(i) for i in [0, count), chunked over SQG_THREADS threads. fn must
/// only touch state owned by index i; results are index-addressed, so the
/// outcome does not depend on the schedule.
template <typename Fn>
void indexed_for(long long count, const Fn& fn) {
  const int threads = env_thread_count();
  if (threads <= 1 || count < 256) {
    for (long long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const long long chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const long long lo = t * chunk;
    const long long hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (long long i = lo; i < hi; ++i) fn(i);
    });
  }
  for (std::thread& th : pool) th.join();
}

/// k^n saturated at cap+1 so "fits in the budget" checks never overflow.
long long pow_saturated(Eigen::Index k, Eigen::Index n, long long cap) {
  long long p = 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (p > cap / std::max<Eigen::Index>(k, 1)) return cap + 1;
    p *= k;
    if (p > cap) return cap + 1;
  }
  return p;
}

std::vector<Eigen::Index> map_digits(long long idx, Eigen::Index n, Eigen::Index k) {
  std::vector<Eigen::Index> f(n);
  for (Eigen::Index v = n - 1; v >= 0; --v) {
    f[v] = static_cast<Eigen::Index>(idx % k);
    idx /= k;
  }
  return f;
}

MarkovKernel sampled_kernel(const SquareGraphon& g, Eigen::Index k, long long enumerated,
                            long long index, std::uint64_t seed) {
  if (index < enumerated) return deterministic_kernel(map_digits(index, g.n(), k), k);
  rng::Engine engine(rng::stream_seed(seed, static_cast<std::uint64_t>(index)));
  return MarkovKernel(rng::random_stochastic(engine, g.n(), k));
}

}  // namespace

ShapePoint embed(const ProbabilityMeasure& rho, const EdgeMeasure& nu) {
  if (rho.size() != nu.size())
    fail(ErrorCode::DimensionMismatch, "vertex and edge parts have different sizes");
  const Eigen::Index k = rho.size();
  Vector coords(k + k * k);
  for (Eigen::Index i = 0; i < k; ++i) coords[i] = rho[i];
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) coords[k + i * k + j] = nu(i, j);
  return ShapePoint{k, std::move(coords)};
}

ShapePoint embed(const SquareGraphon& g) { return embed(g.pi(), g.mu()); }

SquareGraphon extract(const ShapePoint& p) {
  const Eigen::Index k = p.k;
  Vector pi = p.coords.head(k);
  Matrix mu(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) mu(i, j) = p.coords[k + i * k + j];
  return new_square_graphon(std::move(pi), std::move(mu));
}

double point_distance(const ShapePoint& a, const ShapePoint& b) {
  if (a.k != b.k) fail(ErrorCode::KMismatch, "points embed different shape sizes");
  return (a.coords - b.coords).cwiseAbs().maxCoeff();
}

std::string_view to_string(SampleStrategy s) noexcept {
  switch (s) {
    case SampleStrategy::DirichletRandom: return "dirichlet-random";
    case SampleStrategy::DeterministicEnumerate: return "deterministic-enumerate";
    case SampleStrategy::Mixed: return "mixed";
  }
  return "mixed";
}

SampleStrategy strategy_from_string(std::string_view name) {
  if (name == "dirichlet-random") return SampleStrategy::DirichletRandom;
  if (name == "deterministic-enumerate") return SampleStrategy::DeterministicEnumerate;
  if (name == "mixed") return SampleStrategy::Mixed;
  fail(ErrorCode::Usage, "unknown sampling strategy: " + std::string(name));
}

ShapeCloud sample_kshape(const SquareGraphon& g, Eigen::Index k, SampleStrategy strategy,
                         long long budget, std::uint64_t seed) {
  if (k < 1) fail(ErrorCode::OutOfRange, "shape size k must be at least 1");
  if (budget < 1) fail(ErrorCode::OutOfRange, "budget must be at least 1");

  const long long full = pow_saturated(k, g.n(), budget);
  long long enumerated = 0;
  long long total = 0;
  switch (strategy) {
    case SampleStrategy::DeterministicEnumerate:
      if (full > budget)
        fail(ErrorCode::BudgetExceeded,
             "deterministic enumeration needs k^n = " + std::to_string(full) +
                 " points, budget is " + std::to_string(budget));
      enumerated = full;
      total = full;
      break;
    case SampleStrategy::DirichletRandom:
      total = budget;
      break;
    case SampleStrategy::Mixed:
      enumerated = full <= budget ? full : 0;
      total = budget;
      break;
  }

  std::vector<ShapePoint> points(total);
  indexed_for(total, [&](long long i) {
    points[i] = embed(apply(sampled_kernel(g, k, enumerated, i, seed), g));
  });

  ShapeCloud cloud;
  cloud.k = k;
  cloud.points = std::move(points);
  cloud.meta = CloudMeta{std::string(to_string(strategy)), budget, seed,
                         "graphon(n=" + std::to_string(g.n()) + ")", false};
  return cloud;
}

ShapeCloud uniform_kshape(const SquareGraphon& g, Eigen::Index k, long long budget,
                          std::uint64_t seed) {
  if (k < 1) fail(ErrorCode::OutOfRange, "shape size k must be at least 1");
  if (budget < 1) fail(ErrorCode::OutOfRange, "budget must be at least 1");

  const long long full = pow_saturated(k, g.n(), budget);
  const long long enumerated = full <= budget ? full : 0;
  const double threshold = 1.0 / (4.0 * static_cast<double>(k) * static_cast<double>(k));
  const double uniform_mass = 1.0 / static_cast<double>(k);

  std::vector<ShapePoint> slots(budget);
  std::vector<char> kept(budget, 0);
  indexed_for(budget, [&](long long i) {
    const MarkovKernel kernel = sampled_kernel(g, k, enumerated, i, seed);
    const ProbabilityMeasure rho = pushforward(kernel, g.pi());
    const double d = (rho.weights().array() - uniform_mass).abs().maxCoeff();
    if (d > threshold) return;
    const RebalanceResult balanced = rebalance_kernel(kernel, g);
    const EdgeMeasure nu = pushforward_square(balanced.kernel, g.mu());
    ShapePoint point = embed(ProbabilityMeasure::uniform(k), nu);
    for (Eigen::Index c = 0; c < k; ++c) point.coords[c] = uniform_mass;
    slots[i] = std::move(point);
    kept[i] = 1;
  });

  ShapeCloud cloud;
  cloud.k = k;
  for (long long i = 0; i < budget; ++i)
    if (kept[i]) cloud.points.push_back(std::move(slots[i]));
  if (cloud.points.empty())
    fail(ErrorCode::NoValidSamples,
         "all " + std::to_string(budget) + " sampled kernels were farther than 1/(4k^2) from uniform");
  cloud.meta = CloudMeta{"mixed", budget, seed, "graphon(n=" + std::to_string(g.n()) + ")", true};
  return cloud;
}

namespace {

double directed_hausdorff(const std::vector<ShapePoint>& from,
                          const std::vector<ShapePoint>& to) {
  double worst = 0.0;
  for (const ShapePoint& x : from) {
    double best = std::numeric_limits<double>::infinity();
    for (const ShapePoint& y : to) {
      // early-abandon: a partial max already past `best` cannot win
      double d = 0.0;
      const Eigen::Index len = x.coords.size();
      for (Eigen::Index c = 0; c < len; ++c) {
        d = std::max(d, std::abs(x.coords[c] - y.coords[c]));
        if (d >= best) break;
      }
      if (d < best) best = d;
      if (best <= worst) break;  // cannot raise the running sup
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

double hausdorff(const ShapeCloud& a, const ShapeCloud& b) {
  if (a.k != b.k) fail(ErrorCode::KMismatch, "clouds embed different shape sizes");
  if (a.points.empty() || b.points.empty())
    fail(ErrorCode::EmptyList, "Hausdorff distance of an empty cloud");
  return std::max(directed_hausdorff(a.points, b.points),
                  directed_hausdorff(b.points, a.points));
}

std::optional<AsymmetryWitness> witness_asymmetry(const SquareGraphon& g) {
  const Matrix& mu = g.mu().weights();
  for (Eigen::Index i = 0; i < g.n(); ++i) {
    for (Eigen::Index j = i + 1; j < g.n(); ++j) {
      if (mu(i, j) == mu(j, i)) continue;
      std::vector<Eigen::Index> blocks(g.n(), 2);
      blocks[i] = 0;
      blocks[j] = 1;
      const MarkovKernel kernel = deterministic_kernel(blocks, 3);
      return AsymmetryWitness{std::move(blocks), embed(apply(kernel, g))};
    }
  }
  return std::nullopt;
}

ConvergenceReport sequence_convergence_report(std::span<const SquareGraphon> gs,
                                              std::span<const Eigen::Index> ks,
                                              long long budget, std::uint64_t seed,
                                              SampleStrategy strategy) {
  if (gs.size() < 2) fail(ErrorCode::EmptyList, "a sequence needs at least 2 elements");
  ConvergenceReport report;
  for (const Eigen::Index k : ks) {
    std::vector<ShapeCloud> clouds;
    clouds.reserve(gs.size());
    for (const SquareGraphon& g : gs) clouds.push_back(sample_kshape(g, k, strategy, budget, seed));
    std::vector<double> distances;
    distances.reserve(gs.size() - 1);
    for (std::size_t i = 0; i + 1 < clouds.size(); ++i)
      distances.push_back(hausdorff(clouds[i], clouds[i + 1]));
    const std::size_t tail_start = distances.size() / 2;
    double residual = 0.0;
    for (std::size_t i = tail_start; i < distances.size(); ++i)
      residual = std::max(residual, distances[i]);
    report.ks.push_back(k);
    report.successive_distances.push_back(std::move(distances));
    report.cauchy_residuals.push_back(residual);
  }
  return report;
}

}  // namespace sqg
