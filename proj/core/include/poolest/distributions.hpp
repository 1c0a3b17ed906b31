#ifndef POOLEST_DISTRIBUTIONS_HPP
#define POOLEST_DISTRIBUTIONS_HPP

#include <cstdint>
#include <limits>

namespace poolest {

using Count = std::int64_t;

/// Default hard cap on the length of a truncated support.
inline constexpr Count kDefaultMaxSupport = 400'000'000;

enum class OutcomeKind {
  FixedBinomial,    // positives among n pooled tests
  NegBinPositives,  // negatives observed before the c-th positive
  NegBinNegatives,  // positives observed before the c-th negative
};

/// Outcome law of one pooled-testing experiment. `theta` is the probability
/// that a single pooled test is positive; its complement is carried
/// separately because 1 - theta = q^k is far more accurate when computed
/// directly than by subtraction once theta is close to one.
struct OutcomeDistribution {
  OutcomeKind kind = OutcomeKind::FixedBinomial;
  Count size = 1;  // n or c
  double theta = 0.0;
  double theta_complement = 1.0;

  /// Validates n/c >= 1 and theta in [0, 1]; the complement is 1 - theta.
  static OutcomeDistribution make(OutcomeKind kind, Count size, double theta);
  /// As `make`, with an explicitly supplied complement (must be within
  /// rounding of 1 - theta).
  static OutcomeDistribution make(OutcomeKind kind, Count size, double theta,
                                  double theta_complement);
};

/// Natural log of the probability mass at `count`. Returns -inf for
/// impossible outcomes; throws DomainError for negative counts and for
/// counts above n under the fixed binomial.
double log_pmf(const OutcomeDistribution& dist, Count count);

double pmf(const OutcomeDistribution& dist, Count count);

struct TruncatedSupport {
  Count bound = 0;        // last support point kept
  double captured = 0.0;  // P(count <= bound)
  double tail_mass = 0.0; // P(count > bound), never negative
};

/// Smallest bound with P(count > bound) <= epsilon, found by accumulating
/// the pmf forward from zero with compensated summation. The fixed binomial
/// always returns n with zero tail.
///
/// Throws DegenerateDistribution for negative binomial kinds with theta in
/// {0, 1} and IntractableSupport once the scan passes `max_bound`.
TruncatedSupport truncate_support(const OutcomeDistribution& dist, double epsilon,
                                  Count max_bound = kDefaultMaxSupport);

inline Count truncation_bound(const OutcomeDistribution& dist, double epsilon,
                              Count max_bound = kDefaultMaxSupport) {
  return truncate_support(dist, epsilon, max_bound).bound;
}

namespace detail {

/// log(n!) - log(sqrt(2*pi*n) * (n/e)^n)
double stirling_remainder(double n);

/// Deviance term x*log(x/m) + m - x, evaluated without cancellation when x ~ m.
double binomial_deviance(double x, double m);

/// log of the Binomial(n, p) mass at x given p and q = 1 - p separately.
double log_binomial_raw(double x, double n, double p, double q);

}  // namespace detail

}  // namespace poolest

#endif  // POOLEST_DISTRIBUTIONS_HPP
