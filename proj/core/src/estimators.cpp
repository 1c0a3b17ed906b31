#include "poolest/estimators.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "poolest/error.hpp"

namespace poolest {

std::string_view family_name(Family family) noexcept {
  switch (family) {
    case Family::MLE: return "mle";
    case Family::Burrows: return "burrows";
    case Family::PTAlpha: return "pt_alpha";
    case Family::PTBeta: return "pt_beta";
    case Family::PTC: return "pt_c";
    case Family::Gart: return "gart";
    case Family::Degroot: return "degroot";
  }
  return "unknown";
}

Family parse_family(std::string_view text) {
  for (Family f : {Family::MLE, Family::Burrows, Family::PTAlpha, Family::PTBeta, Family::PTC,
                   Family::Gart, Family::Degroot}) {
    if (text == family_name(f)) return f;
  }
  throw Error(ErrorCode::InvalidInput, "unknown estimator '" + std::string(text) + "'");
}

bool is_pt(Family family) noexcept {
  return family == Family::PTAlpha || family == Family::PTBeta || family == Family::PTC;
}

void validate(const Estimator& est) {
  const bool ok = [&] {
    switch (est.family) {
      case Family::MLE:
      case Family::Burrows:
        return true;
      case Family::PTAlpha:
      case Family::PTBeta:
      case Family::PTC:
      case Family::Gart:
        return est.model != Model::A;
      case Family::Degroot:
        return est.model == Model::C;
    }
    return false;
  }();
  if (!ok) {
    throw Error(ErrorCode::InvalidCombination,
                std::string(family_name(est.family)) + " is not defined under model " +
                    model_letter(est.model));
  }
  if (is_pt(est.family)) {
    if (!(est.alpha >= 0.0 && est.alpha <= 1.0)) {
      throw Error(ErrorCode::InvalidInput, "alpha must lie in [0, 1]");
    }
    if (!(est.beta >= 1.0) || !std::isfinite(est.beta)) {
      throw Error(ErrorCode::InvalidInput, "beta must be a finite value >= 1");
    }
    if (est.p0 && !(*est.p0 > 0.0 && *est.p0 < 1.0)) {
      throw Error(ErrorCode::InvalidInput, "p0 must lie in (0, 1)");
    }
  }
}

std::string label(const Estimator& est) {
  static constexpr const char* names[] = {"MLE", "Burrows", "PT_alpha", "PT_beta",
                                          "PT_C", "Gart",    "Degroot"};
  std::string out = names[static_cast<int>(est.family)];
  out += '(';
  out += model_letter(est.model);
  out += ')';
  if (is_pt(est.family) && est.p0) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "[p0=%g]", *est.p0);
    out += buf;
  }
  return out;
}

double burrows_offset(int k) noexcept { return (k - 1) / (2.0 * k); }

namespace {

// 1 - r^(1/k), accurate for r close to one.
double one_minus_root(double r, int k) {
  if (r <= 0.0) return 1.0;
  return -std::expm1(std::log(r) / k);
}

Estimate clamp(double raw) {
  if (raw < 0.0) return {0.0, true};
  if (raw > 1.0) return {1.0, true};
  if (std::isnan(raw)) return {0.0, true};
  return {raw, false};
}

void require_degroot_args(int k, Count c) {
  if (k < 2 || c < 1) throw Error(ErrorCode::InvalidInput, "Degroot needs k >= 2 and c >= 1");
}

// Validated closed forms; `count` is already known to be in support.
double raw_estimate(const Estimator& est, const Design& design, Count count) {
  const int k = design.k;
  const double c = static_cast<double>(design.size);  // n under model A
  const double x = static_cast<double>(count);
  const double nu = burrows_offset(k);

  switch (design.model) {
    case Model::A:
      switch (est.family) {
        case Family::MLE: return one_minus_root(1.0 - x / c, k);
        case Family::Burrows: return one_minus_root(1.0 - x / (c + nu), k);
        default: break;
      }
      break;
    case Model::B:
      switch (est.family) {
        case Family::MLE: return one_minus_root(x / (x + c), k);
        case Family::Burrows: return one_minus_root((x + nu) / (x + c + nu - 1.0), k);
        // 1 - a*m/d written as (d - a*m)/d, which reduces exactly to the MLE's
        // y/(y + c) at alpha = 1.
        case Family::PTAlpha: return one_minus_root((x + c - est.alpha * c) / (x + c), k);
        case Family::PTBeta:
          return one_minus_root((x + c + est.beta - (c + 1.0)) / (x + c + est.beta), k);
        case Family::PTC:
          return one_minus_root(
              (x + c + est.beta - est.alpha * (c + 1.0)) / (x + c + est.beta), k);
        case Family::Gart: {
          if (count == 0) return gart_zero_value(Model::B, k, design.size);
          const double mle = one_minus_root(x / (x + c), k);
          return mle - gart_bias(Model::B, mle, k, design.size);
        }
        default: break;
      }
      break;
    case Model::C:
      switch (est.family) {
        case Family::MLE: return one_minus_root(c / (x + c), k);
        case Family::Burrows: return one_minus_root((c + nu - 1.0) / (x + c + nu - 1.0), k);
        case Family::PTAlpha: return one_minus_root(est.alpha * (c / (x + c)), k);
        case Family::PTBeta: return one_minus_root((c + 1.0) / (x + c + est.beta), k);
        case Family::PTC: return one_minus_root(est.alpha * ((c + 1.0) / (x + c + est.beta)), k);
        case Family::Gart: {
          if (count == 0) return gart_zero_value(Model::C, k, design.size);
          const double mle = one_minus_root(c / (x + c), k);
          return mle - gart_bias(Model::C, mle, k, design.size);
        }
        case Family::Degroot: {
          DegrootProduct prod(k, design.size);
          for (Count j = 0; j < count; ++j) prod.advance();
          return prod.estimate();
        }
      }
      break;
  }
  throw Error(ErrorCode::InvalidCombination, "estimator not defined for this design");
}

void check_pair(const Estimator& est, const Design& design) {
  validate(est);
  if (est.model != design.model) {
    throw Error(ErrorCode::InvalidCombination,
                label(est) + " cannot be applied to a model " + model_letter(design.model) +
                    " design");
  }
  if (est.family == Family::Burrows && design.model == Model::B && design.size == 1) {
    throw Error(ErrorCode::DegenerateEstimator,
                "Burrows estimator under model b is identically zero when c = 1");
  }
}

void check_count(const Design& design, Count count) {
  if (count < 0) throw Error(ErrorCode::DomainError, "count must be non-negative");
  if (design.model == Model::A && count > design.size) {
    throw Error(ErrorCode::DomainError, "count " + std::to_string(count) +
                                            " exceeds the number of pools n = " +
                                            std::to_string(design.size));
  }
}

}  // namespace

Estimate estimate(const Estimator& est, const Design& design, Count count) {
  check_pair(est, design);
  check_count(design, count);
  return clamp(raw_estimate(est, design, count));
}

DegrootProduct::DegrootProduct(int k, Count c) : inv_k_(1.0 / k), c_(static_cast<double>(c)) {
  require_degroot_args(k, c);
}

void DegrootProduct::advance() {
  ++z_;
  const double denom = static_cast<double>(z_) + c_ - 1.0;
  if (z_ <= kLogSpaceFrom) {
    product_ *= (denom - inv_k_) / denom;
  } else {
    log_tail_ += std::log1p(-inv_k_ / denom);
  }
}

double DegrootProduct::estimate() const {
  if (z_ == 0) return 0.0;
  if (z_ <= kLogSpaceFrom) return 1.0 - product_;
  return -std::expm1(std::log(product_) + log_tail_);
}

EstimateSequence::EstimateSequence(const Estimator& est, const Design& design)
    : est_(est), design_(design) {
  check_pair(est, design);
  if (est.family == Family::Degroot) degroot_.emplace(design.k, design.size);
}

Estimate EstimateSequence::at(Count count) {
  check_count(design_, count);
  if (!degroot_) return clamp(raw_estimate(est_, design_, count));
  if (count < degroot_->count()) {
    throw Error(ErrorCode::InvalidInput, "EstimateSequence counts must be non-decreasing");
  }
  while (degroot_->count() < count) degroot_->advance();
  return clamp(degroot_->estimate());
}

GartComponents gart_components(Model model, double p, int k, Count c) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::Singularity, "Gart components are singular at p = 0 and p = 1");
  }
  if (k < 2 || c < 1) throw Error(ErrorCode::InvalidInput, "Gart components need k >= 2, c >= 1");
  const double q = 1.0 - p;
  const double kk = k;
  const double cc = static_cast<double>(c);
  const double qk = std::pow(q, kk);
  const double one_minus_qk = -std::expm1(kk * std::log1p(-p));
  const double q3 = q * q * q;

  GartComponents g;
  switch (model) {
    case Model::B: {
      const double d = one_minus_qk;
      g.info = cc * kk * kk * std::pow(q, kk - 2.0) / (d * d);
      g.info_deriv = -cc * kk * kk *
                     ((kk - 2.0) * std::pow(q, kk - 3.0) + (kk + 2.0) * std::pow(q, 2.0 * kk - 3.0)) /
                     (d * d * d);
      const double t = kk * qk + qk - 1.0;
      g.third_deriv_expect =
          cc * kk / q3 * ((kk * (kk + 1.0) * qk * d + 2.0 * t * t) / (d * d * d) - 2.0 / d);
      return g;
    }
    case Model::C: {
      const double d = one_minus_qk;
      g.info = cc * kk * kk / (q * q * d);
      g.info_deriv = cc * kk * kk * (2.0 - (2.0 + kk) * qk) / (q3 * d * d);
      g.third_deriv_expect = kk * cc / q3 *
                             (2.0 * kk * kk * qk * qk / (d * d) + 3.0 * kk * (kk - 1.0) * qk / d +
                              kk * (kk - 3.0));
      return g;
    }
    case Model::A:
      break;
  }
  throw Error(ErrorCode::InvalidCombination, "Gart components are defined for models b and c");
}

double gart_bias(Model model, double p, int k, Count c) {
  const GartComponents g = gart_components(model, p, k, c);
  return -(2.0 * g.info_deriv + g.third_deriv_expect) / (2.0 * g.info * g.info);
}

double gart_zero_value(Model model, int k, Count c) {
  if (k < 2 || c < 1) throw Error(ErrorCode::InvalidInput, "need k >= 2 and c >= 1");
  switch (model) {
    case Model::B: {
      const double kk = k;
      const double ratio = (kk - 1.0) / (2.0 * kk * static_cast<double>(c) + kk - 1.0);
      return one_minus_root(ratio, k);
    }
    case Model::C:
      return 0.0;
    case Model::A:
      break;
  }
  throw Error(ErrorCode::InvalidCombination, "Gart estimator is defined for models b and c");
}

}  // namespace poolest
