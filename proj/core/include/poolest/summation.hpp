#ifndef POOLEST_SUMMATION_HPP
#define POOLEST_SUMMATION_HPP

#include <cmath>
#include <cstddef>
#include <span>

namespace poolest {

/// Neumaier's variant of Kahan summation. The running compensation also
/// captures the error when an addend is larger than the accumulated sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Recursive pairwise summation in index order; the result depends only on
/// the values and their order, never on how they were produced.
inline double pairwise_sum(std::span<const double> xs) noexcept {
  constexpr std::size_t kLeaf = 64;
  if (xs.size() <= kLeaf) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace poolest

#endif  // POOLEST_SUMMATION_HPP
