#include "poolest/error.hpp"

namespace poolest {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "INVALID_INPUT";
    case ErrorCode::DomainError: return "DOMAIN_ERROR";
    case ErrorCode::InvalidCombination: return "INVALID_COMBINATION";
    case ErrorCode::DegenerateDistribution: return "DEGENERATE_DISTRIBUTION";
    case ErrorCode::Singularity: return "SINGULARITY";
    case ErrorCode::InfiniteExpectation: return "INFINITE_EXPECTATION";
    case ErrorCode::InfeasibleDesign: return "INFEASIBLE_DESIGN";
    case ErrorCode::NoFeasibleDesign: return "NO_FEASIBLE_DESIGN";
    case ErrorCode::IntractableSupport: return "INTRACTABLE_SUPPORT";
    case ErrorCode::DegenerateEstimator: return "DEGENERATE_ESTIMATOR";
    case ErrorCode::Io: return "IO_ERROR";
  }
  return "UNKNOWN";
}

}  // namespace poolest
