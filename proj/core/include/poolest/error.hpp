#ifndef POOLEST_ERROR_HPP
#define POOLEST_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace poolest {

/// Failure categories raised by the library. Every category has a stable
/// upper-case name (see `error_code_name`) that the CLI prints on stderr.
enum class ErrorCode {
  InvalidInput,            // malformed or out-of-range argument
  DomainError,             // count outside the support of a finite distribution
  InvalidCombination,      // estimator family not defined for the sampling model
  DegenerateDistribution,  // theta in {0,1} where a sum over an infinite support is requested
  Singularity,             // closed form evaluated at p in {0,1}
  InfiniteExpectation,     // E(N) diverges for the requested (model, p)
  InfeasibleDesign,        // even the smallest design exceeds the test budget
  NoFeasibleDesign,        // every pool size in a search range was skipped
  IntractableSupport,      // truncated support would exceed the configured cap
  DegenerateEstimator,     // estimator collapses to a constant (Burrows under model b with c = 1)
  Io,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace poolest

#endif  // POOLEST_ERROR_HPP
