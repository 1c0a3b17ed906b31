#ifndef POOLEST_DESIGNS_HPP
#define POOLEST_DESIGNS_HPP

#include <string_view>

#include "poolest/distributions.hpp"

namespace poolest {

/// Sampling plans:
///   A  test a fixed number n of pools, observe the positives x
///   B  test until the c-th positive pool, observe the negatives y
///   C  test until the c-th negative pool, observe the positives z
enum class Model { A, B, C };

char model_letter(Model model) noexcept;

/// Accepts "a"/"b"/"c" in either case.
Model parse_model(std::string_view text);

/// A sampling plan instance. `size` is n under model A and c under B and C.
struct Design {
  Model model = Model::A;
  int k = 2;
  Count size = 1;

  /// Validates k >= 2 and size >= 1.
  static Design make(Model model, int k, Count size);
  static Design fixed(Count n, int k) { return make(Model::A, k, n); }
  static Design inverse_positive(Count c, int k) { return make(Model::B, k, c); }
  static Design inverse_negative(Count c, int k) { return make(Model::C, k, c); }
};

/// Expected number of pooled tests the experimenter is willing to spend.
struct Budget {
  double target_en = 1.0;

  /// Validates target_en >= 1.
  explicit Budget(double target);
};

/// 1 - (1 - p)^k: probability that a pool of k units tests positive.
double success_prob(int k, double p);
inline double success_prob(const Design& design, double p) { return success_prob(design.k, p); }

/// (1 - p)^k: probability that a pool of k units tests negative.
double pool_negative_prob(int k, double p);

/// The law of the design's sufficient statistic at prevalence p.
OutcomeDistribution outcome_distribution(const Design& design, double p);

/// E(N): n, c/(1 - q^k), or c/q^k. Throws InfiniteExpectation for p = 0
/// under B and p = 1 under C.
double expected_tests(const Design& design, double p);

/// Largest c >= 1 whose expected number of tests stays within the budget
/// (equality allowed). Only models B and C. Throws InfeasibleDesign when
/// c = 1 already exceeds the budget.
Count select_c(Model model, int k, double p, const Budget& budget);

void require_probability(double p, const char* what);
void require_open_probability(double p, const char* what);

}  // namespace poolest

#endif  // POOLEST_DESIGNS_HPP
