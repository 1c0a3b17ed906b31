#ifndef POOLEST_ESTIMATORS_HPP
#define POOLEST_ESTIMATORS_HPP

#include <optional>
#include <string>
#include <string_view>

#include "poolest/designs.hpp"

namespace poolest {

enum class Family {
  MLE,
  Burrows,  // offset-corrected MLE with nu = (k - 1) / (2k)
  PTAlpha,  // shrinkage by alpha
  PTBeta,   // shifted denominator by beta
  PTC,      // both alpha and beta
  Gart,     // MLE minus the plug-in first-order bias
  Degroot,  // unbiased under model C
};

std::string_view family_name(Family family) noexcept;

/// Accepts mle, burrows, gart, degroot, pt_alpha, pt_beta, pt_c.
Family parse_family(std::string_view text);

/// One estimation rule bound to a sampling model.
///
/// `alpha` and `beta` are the shrinkage constants of the PT families and are
/// ignored otherwise. When `p0` is set, design search re-derives them for each
/// candidate design by minimising the MSE at p0 (see optimize_pt).
struct Estimator {
  Family family = Family::MLE;
  Model model = Model::A;
  double alpha = 1.0;
  double beta = 1.0;
  std::optional<double> p0;

  static Estimator make(Family family, Model model, double alpha = 1.0, double beta = 1.0,
                        std::optional<double> p0 = std::nullopt) {
    Estimator e;
    e.family = family;
    e.model = model;
    e.alpha = alpha;
    e.beta = beta;
    e.p0 = p0;
    return e;
  }
  static Estimator mle(Model model) { return make(Family::MLE, model); }
  static Estimator burrows(Model model) { return make(Family::Burrows, model); }
  static Estimator gart(Model model) { return make(Family::Gart, model); }
  static Estimator degroot() { return make(Family::Degroot, Model::C); }
  static Estimator pt_alpha(Model model, double alpha) {
    return make(Family::PTAlpha, model, alpha);
  }
  static Estimator pt_beta(Model model, double beta) {
    return make(Family::PTBeta, model, 1.0, beta);
  }
  static Estimator pt_c(Model model, double alpha, double beta) {
    return make(Family::PTC, model, alpha, beta);
  }
  /// PT family whose constants are tuned per design at the prior bound p0.
  static Estimator pt_tuned(Family family, Model model, double p0) {
    return make(family, model, 1.0, 1.0, p0);
  }
};

bool is_pt(Family family) noexcept;

/// Throws InvalidCombination when the family is not defined under the
/// estimator's model, and InvalidInput for constants outside
/// 0 <= alpha <= 1, beta >= 1, p0 in (0, 1).
void validate(const Estimator& est);

/// Short row label such as "MLE(a)" or "PT_C(b)[p0=0.1]".
std::string label(const Estimator& est);

struct Estimate {
  double value = 0.0;
  bool clamped = false;  // raw value fell outside [0, 1]
};

/// (k - 1) / (2k)
double burrows_offset(int k) noexcept;

/// Point estimate of p from the design's sufficient statistic.
///
/// Throws InvalidCombination if the estimator and design disagree on the
/// model, DegenerateEstimator for Burrows under model B with c = 1, and
/// DomainError for counts outside the design's support.
Estimate estimate(const Estimator& est, const Design& design, Count count);

/// Running product of the unbiased estimator under model C:
/// 1 - p_hat(z) = prod_{j=1}^{z} (j + c - 1 - 1/k) / (j + c - 1).
/// Factors past kLogSpaceFrom are accumulated as a sum of logs.
class DegrootProduct {
 public:
  static constexpr Count kLogSpaceFrom = 10'000;

  DegrootProduct(int k, Count c);

  /// Multiply in the factor for j = count() + 1.
  void advance();
  Count count() const noexcept { return z_; }
  /// Current estimate of p, zero at z = 0.
  double estimate() const;

 private:
  double inv_k_;
  double c_;
  Count z_ = 0;
  double product_ = 1.0;
  double log_tail_ = 0.0;
};

/// Estimates for non-decreasing counts. The Degroot product is carried
/// forward between calls instead of being rebuilt.
class EstimateSequence {
 public:
  EstimateSequence(const Estimator& est, const Design& design);

  /// `count` must not be smaller than the previous call's.
  Estimate at(Count count);

 private:
  Estimator est_;
  Design design_;
  std::optional<DegrootProduct> degroot_;
};

/// Fisher information and the derivative terms entering Gart's first-order
/// bias approximation, for the sample collected under model B or C.
struct GartComponents {
  double info = 0.0;                // I(p)
  double info_deriv = 0.0;          // dI/dp
  double third_deriv_expect = 0.0;  // E[d^3 l / dp^3]
};

/// Throws Singularity for p outside (0, 1) and InvalidCombination for model A.
GartComponents gart_components(Model model, double p, int k, Count c);

/// B(p) = -(2 dI/dp + E[d^3 l/dp^3]) / (2 I(p)^2)
double gart_bias(Model model, double p, int k, Count c);

/// Value used where the plug-in correction is undefined: y = 0 under B and
/// z = 0 under C.
double gart_zero_value(Model model, int k, Count c);

}  // namespace poolest

#endif  // POOLEST_ESTIMATORS_HPP
