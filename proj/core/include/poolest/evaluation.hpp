#ifndef POOLEST_EVALUATION_HPP
#define POOLEST_EVALUATION_HPP

#include <cmath>

#include "poolest/designs.hpp"
#include "poolest/estimators.hpp"
#include "poolest/summation.hpp"

namespace poolest {

struct EvalOptions {
  double epsilon = 1e-6;  // tail mass left out of the infinite sums
  Count max_support = kDefaultMaxSupport;
};

/// Exact moments of p_hat - p. Sums run over the whole support under model A
/// and over {0, ..., truncation_bound} under B and C, without renormalising
/// by the captured mass.
struct EvalResult {
  double bias = 0.0;
  double rel_bias_pct = 0.0;  // 100 * bias / p
  double mse = 0.0;
  double mse_x1e4 = 0.0;
  double expected_n = 0.0;
  Count truncation_bound = 0;
  double tail_mass = 0.0;
  Count clamp_count = 0;  // support points whose raw estimate left [0, 1]
};

/// Support of the design's statistic at p, cut where the tail drops to
/// options.epsilon.
struct EvalSupport {
  OutcomeDistribution dist;
  TruncatedSupport truncated;
};

EvalSupport eval_support(const Design& design, double p, const EvalOptions& options);

EvalResult finish_eval(double bias, double mse, double p, const Design& design,
                       const TruncatedSupport& support, Count clamp_count);

/// Bias and MSE of an arbitrary rule. `estimate_at` is called once per
/// support point in increasing count order and returns an `Estimate`.
template <class EstimateAt>
EvalResult evaluate_with(const Design& design, double p, const EvalOptions& options,
                         EstimateAt&& estimate_at) {
  const EvalSupport support = eval_support(design, p, options);
  CompensatedSum bias;
  CompensatedSum mse;
  Count clamps = 0;
  for (Count i = 0; i <= support.truncated.bound; ++i) {
    const double weight = pmf(support.dist, i);
    const Estimate e = estimate_at(i);
    if (e.clamped) ++clamps;
    if (weight == 0.0) continue;
    const double d = e.value - p;
    bias.add(d * weight);
    mse.add(d * d * weight);
  }
  return finish_eval(bias.value(), mse.value(), p, design, support.truncated, clamps);
}

/// Throws InvalidInput for p outside (0, 1) and propagates estimator errors.
EvalResult evaluate(const Estimator& est, const Design& design, double p,
                    const EvalOptions& options = {});

}  // namespace poolest

#endif  // POOLEST_EVALUATION_HPP
