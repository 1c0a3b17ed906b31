#include "poolest/evaluation.hpp"

namespace poolest {

EvalSupport eval_support(const Design& design, double p, const EvalOptions& options) {
  require_open_probability(p, "p");
  const OutcomeDistribution dist = outcome_distribution(design, p);
  return EvalSupport{dist, truncate_support(dist, options.epsilon, options.max_support)};
}

EvalResult finish_eval(double bias, double mse, double p, const Design& design,
                       const TruncatedSupport& support, Count clamp_count) {
  EvalResult r;
  r.bias = bias;
  r.rel_bias_pct = 100.0 * bias / p;
  r.mse = mse;
  r.mse_x1e4 = 1e4 * mse;
  r.expected_n = expected_tests(design, p);
  r.truncation_bound = support.bound;
  r.tail_mass = support.tail_mass;
  r.clamp_count = clamp_count;
  return r;
}

EvalResult evaluate(const Estimator& est, const Design& design, double p,
                    const EvalOptions& options) {
  EstimateSequence seq(est, design);
  return evaluate_with(design, p, options, [&](Count i) { return seq.at(i); });
}

}  // namespace poolest
