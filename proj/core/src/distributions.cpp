#include "poolest/distributions.hpp"

#include <array>
#include <cmath>
#include <string>

#include "poolest/error.hpp"
#include "poolest/summation.hpp"

namespace poolest {

namespace detail {

namespace {

constexpr double kLnSqrt2Pi = 0.918938533204672741780329736406;
constexpr double kLn2Pi = 1.837877066409345483560659472811;

}  // namespace

double stirling_remainder(double n) {
  constexpr double s0 = 1.0 / 12.0;
  constexpr double s1 = 1.0 / 360.0;
  constexpr double s2 = 1.0 / 1260.0;
  constexpr double s3 = 1.0 / 1680.0;
  constexpr double s4 = 1.0 / 1188.0;
  if (n <= 15.0) {
    // lgamma is exact to a few ulps on this range and its values are small.
    return std::lgamma(n + 1.0) - (n + 0.5) * std::log(n) + n - kLnSqrt2Pi;
  }
  const double nn = n * n;
  if (n > 500.0) return (s0 - s1 / nn) / n;
  if (n > 80.0) return (s0 - (s1 - s2 / nn) / nn) / n;
  if (n > 35.0) return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n;
  return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

double binomial_deviance(double x, double m) {
  if (std::fabs(x - m) < 0.1 * (x + m)) {
    double v = (x - m) / (x + m);
    double s = (x - m) * v;
    double ej = 2.0 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  return x * std::log(x / m) + m - x;
}

double log_binomial_raw(double x, double n, double p, double q) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (p == 0.0) return x == 0.0 ? 0.0 : kNegInf;
  if (q == 0.0) return x == n ? 0.0 : kNegInf;
  if (x < 0.0 || x > n) return kNegInf;
  if (x == 0.0) {
    if (n == 0.0) return 0.0;
    return p < 0.1 ? -binomial_deviance(n, n * q) - n * p : n * std::log(q);
  }
  if (x == n) {
    return q < 0.1 ? -binomial_deviance(n, n * p) - n * q : n * std::log(p);
  }
  const double lc = stirling_remainder(n) - stirling_remainder(x) - stirling_remainder(n - x) -
                    binomial_deviance(x, n * p) - binomial_deviance(n - x, n * q);
  const double lf = kLn2Pi + std::log(x) + std::log1p(-x / n);
  return lc - 0.5 * lf;
}

}  // namespace detail

OutcomeDistribution OutcomeDistribution::make(OutcomeKind kind, Count size, double theta) {
  return make(kind, size, theta, 1.0 - theta);
}

OutcomeDistribution OutcomeDistribution::make(OutcomeKind kind, Count size, double theta,
                                              double theta_complement) {
  if (size < 1) {
    throw Error(ErrorCode::InvalidInput, "distribution size (n or c) must be >= 1, got " +
                                             std::to_string(size));
  }
  if (!(theta >= 0.0 && theta <= 1.0) || !(theta_complement >= 0.0 && theta_complement <= 1.0)) {
    throw Error(ErrorCode::InvalidInput, "theta must lie in [0, 1]");
  }
  if (std::fabs(theta + theta_complement - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidInput, "theta and its complement must sum to one");
  }
  return OutcomeDistribution{kind, size, theta, theta_complement};
}

namespace {

// Failures before the size-th success when one trial succeeds with `success`.
double log_negbin(Count failures, Count size, double success, double failure) {
  const double x = static_cast<double>(failures);
  const double r = static_cast<double>(size);
  if (success == 0.0) return -std::numeric_limits<double>::infinity();
  if (failures == 0) {
    // The saddle-point form below divides by size + x; this is exact.
    return r * std::log(success);
  }
  return std::log(r / (r + x)) + detail::log_binomial_raw(r, r + x, success, failure);
}

}  // namespace

double log_pmf(const OutcomeDistribution& dist, Count count) {
  if (count < 0) {
    throw Error(ErrorCode::DomainError, "count must be non-negative");
  }
  switch (dist.kind) {
    case OutcomeKind::FixedBinomial:
      if (count > dist.size) {
        throw Error(ErrorCode::DomainError, "count " + std::to_string(count) +
                                                " exceeds n = " + std::to_string(dist.size));
      }
      return detail::log_binomial_raw(static_cast<double>(count), static_cast<double>(dist.size),
                                      dist.theta, dist.theta_complement);
    case OutcomeKind::NegBinPositives:
      return log_negbin(count, dist.size, dist.theta, dist.theta_complement);
    case OutcomeKind::NegBinNegatives:
      return log_negbin(count, dist.size, dist.theta_complement, dist.theta);
  }
  return -std::numeric_limits<double>::infinity();
}

double pmf(const OutcomeDistribution& dist, Count count) {
  return std::exp(log_pmf(dist, count));
}

TruncatedSupport truncate_support(const OutcomeDistribution& dist, double epsilon,
                                  Count max_bound) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorCode::InvalidInput, "epsilon must lie in (0, 1]");
  }
  if (dist.kind == OutcomeKind::FixedBinomial) {
    return TruncatedSupport{dist.size, 1.0, 0.0};
  }
  if (dist.theta == 0.0 || dist.theta == 1.0 || dist.theta_complement == 0.0) {
    throw Error(ErrorCode::DegenerateDistribution,
                "negative binomial truncation needs theta strictly inside (0, 1)");
  }
  if (epsilon == 1.0) return TruncatedSupport{0, pmf(dist, 0), 1.0 - pmf(dist, 0)};

  // Mode of the count; past it the terms only shrink.
  const double success =
      dist.kind == OutcomeKind::NegBinPositives ? dist.theta : dist.theta_complement;
  const double failure = 1.0 - success;
  const double r = static_cast<double>(dist.size);
  const double mode = r > 1.0 ? std::floor((r - 1.0) * failure / success) : 0.0;

  CompensatedSum cdf;
  for (Count i = 0;; ++i) {
    if (i > max_bound) {
      throw Error(ErrorCode::IntractableSupport,
                  "truncated support exceeds " + std::to_string(max_bound) + " points");
    }
    const double term = pmf(dist, i);
    cdf.add(term);
    const double captured = cdf.value();
    const double tail = 1.0 - captured;
    if (tail <= epsilon) {
      return TruncatedSupport{i, captured, tail > 0.0 ? tail : 0.0};
    }
    if (term == 0.0 && static_cast<double>(i) > mode) {
      // Rounding left the captured mass short of 1 - epsilon and nothing is left to add.
      throw Error(ErrorCode::InvalidInput,
                  "epsilon is below the attainable precision of the cumulative sum");
    }
  }
}

}  // namespace poolest
