#ifndef POOLEST_DESIGN_SEARCH_HPP
#define POOLEST_DESIGN_SEARCH_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "poolest/error.hpp"
#include "poolest/evaluation.hpp"

namespace poolest {

/// Inclusive range of pool sizes to scan.
struct KRange {
  int lo = 2;
  int hi = 50;
};

enum class PTFamily { Alpha, Beta, C };

PTFamily pt_family_of(Family family);
Family family_of(PTFamily family) noexcept;
PTFamily parse_pt_family(std::string_view text);

struct PTOptions {
  double beta_max = 200.0;  // large enough for the c = 1 optima under model C
  int stages = 3;
  int points_per_axis = 51;
  /// Truncation of the sums at p0 during tuning.
  EvalOptions eval{1e-6, 5'000'000};
};

struct PTParams {
  double alpha = 1.0;
  double beta = 1.0;
  double achieved_mse = 0.0;  // exact MSE at p0 of the returned constants
  double p0 = 0.0;
};

/// Minimises the exact MSE at p = p0 over the box 0 <= alpha <= 1,
/// 1 <= beta <= beta_max by coarse-to-fine grid refinement: each stage lays a
/// points_per_axis grid over the current window (alpha evenly spaced, beta
/// evenly spaced in log(beta)), then shrinks the window to one cell either
/// side of the incumbent. Axes that the family does not use
/// stay at alpha = 1 / beta = 1. Ties go to the smaller beta, then the larger
/// alpha.
PTParams optimize_pt(PTFamily family, Model model, int k, Count c, double p0,
                     const PTOptions& options = {});

/// Exact MSE at p0 for every (alpha, beta) on a dense grid; `alphas` and
/// `betas` are scanned exhaustively. Slow; meant for cross-checking.
PTParams scan_pt(PTFamily family, Model model, int k, Count c, double p0,
                 const std::vector<double>& alphas, const std::vector<double>& betas,
                 const EvalOptions& eval = {});

struct SkippedK {
  int k = 0;
  ErrorCode reason = ErrorCode::InfeasibleDesign;
  std::string detail;
};

struct SearchOptions {
  KRange k_range;
  EvalOptions eval;
  PTOptions pt;
};

struct SearchOutcome {
  int k_star = 0;
  Count c_star = 0;  // n under model A
  EvalResult result;
  int feasible_k_count = 0;
  std::vector<SkippedK> skipped_k;
  /// Constants used at k_star when the estimator is tuned at a prior bound.
  std::optional<PTParams> pt_params;
};

/// The design used for pool size k under a budget: n = floor(target) for
/// model A, the largest affordable c for B and C.
Design design_for_budget(Model model, int k, double p, const Budget& budget);

/// Scans k over the range, evaluates the exact MSE of each affordable design
/// at p and keeps the smallest (ties to the smaller k). Pool sizes that are
/// unaffordable, degenerate for the estimator, or whose sums would be
/// intractable are listed in skipped_k. Throws NoFeasibleDesign when nothing
/// is left.
SearchOutcome best_k(const Estimator& est, double p, const Budget& budget,
                     const SearchOptions& options = {});

}  // namespace poolest

#endif  // POOLEST_DESIGN_SEARCH_HPP
