#ifndef POOLEST_MONTECARLO_HPP
#define POOLEST_MONTECARLO_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "poolest/designs.hpp"
#include "poolest/estimators.hpp"

namespace poolest {

struct SimConfig {
  Count replicates = 100'000;
  std::uint64_t seed = 0;
  Count max_steps = 10'000'000;  // pooled tests allowed per replicate
};

/// Fraction of replicates that may hit max_steps before a summary is flagged.
inline constexpr double kCapHitTolerance = 1e-4;

struct SimDraw {
  Count count = 0;  // x, y or z
  Count tests = 0;  // pooled tests performed
  bool cap_hit = false;
};

/// Independent stream for one replicate, derived from the master seed and the
/// replicate index alone.
std::mt19937_64 replicate_stream(std::uint64_t seed, std::uint64_t replicate);

/// One unit-level Bernoulli(p) draw.
bool draw_unit(std::mt19937_64& rng, double p);

/// One pooled test: k unit draws, positive if any unit is.
bool draw_pool(std::mt19937_64& rng, int k, double p);

/// Runs the design's stopping rule on simulated pools and returns the
/// sufficient statistic. A run that reaches max_steps stops there with
/// cap_hit set.
SimDraw simulate_once(const Design& design, double p, std::mt19937_64& rng,
                      Count max_steps = SimConfig{}.max_steps);

struct SimSummary {
  double emp_bias = 0.0;
  double emp_mse = 0.0;
  std::optional<double> se_bias;  // absent with fewer than two replicates
  std::optional<double> se_mse;
  Count cap_hits = 0;
  Count replicates = 0;  // replicates that entered the moments
  double mean_tests = 0.0;
  bool cap_flagged = false;
};

/// Empirical moments of p_hat - p over cfg.replicates runs. Replicates that
/// hit the step cap are excluded and counted. Reductions run in replicate
/// order, so the output depends only on (est, design, p, cfg).
SimSummary simulate_estimator(const Estimator& est, const Design& design, double p,
                              const SimConfig& cfg);

/// As simulate_estimator for several estimators of the same model, sharing
/// one set of simulated outcomes.
std::vector<SimSummary> simulate_estimators(std::span<const Estimator> ests, const Design& design,
                                            double p, const SimConfig& cfg);

}  // namespace poolest

#endif  // POOLEST_MONTECARLO_HPP
