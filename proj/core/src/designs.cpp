#include "poolest/designs.hpp"

#include <cmath>
#include <string>

#include "poolest/error.hpp"

namespace poolest {

char model_letter(Model model) noexcept {
  switch (model) {
    case Model::A: return 'a';
    case Model::B: return 'b';
    case Model::C: return 'c';
  }
  return '?';
}

Model parse_model(std::string_view text) {
  if (text == "a" || text == "A") return Model::A;
  if (text == "b" || text == "B") return Model::B;
  if (text == "c" || text == "C") return Model::C;
  throw Error(ErrorCode::InvalidInput, "unknown model '" + std::string(text) + "'");
}

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::InvalidInput, std::string(what) + " must lie in [0, 1]");
  }
}

void require_open_probability(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::InvalidInput, std::string(what) + " must lie in (0, 1)");
  }
}

Design Design::make(Model model, int k, Count size) {
  if (k < 2) {
    throw Error(ErrorCode::InvalidInput, "pool size k must be >= 2, got " + std::to_string(k));
  }
  if (size < 1) {
    throw Error(ErrorCode::InvalidInput,
                std::string(model == Model::A ? "n" : "c") + " must be >= 1, got " +
                    std::to_string(size));
  }
  return Design{model, k, size};
}

Budget::Budget(double target) : target_en(target) {
  if (!(target >= 1.0) || !std::isfinite(target)) {
    throw Error(ErrorCode::InvalidInput, "expected-test budget must be a finite value >= 1");
  }
}

double success_prob(int k, double p) {
  require_probability(p, "p");
  if (p == 1.0) return 1.0;
  return -std::expm1(k * std::log1p(-p));
}

double pool_negative_prob(int k, double p) {
  require_probability(p, "p");
  if (p == 1.0) return 0.0;
  return std::exp(k * std::log1p(-p));
}

OutcomeDistribution outcome_distribution(const Design& design, double p) {
  const double theta = success_prob(design.k, p);
  const double complement = pool_negative_prob(design.k, p);
  switch (design.model) {
    case Model::A:
      return OutcomeDistribution::make(OutcomeKind::FixedBinomial, design.size, theta, complement);
    case Model::B:
      return OutcomeDistribution::make(OutcomeKind::NegBinPositives, design.size, theta,
                                       complement);
    case Model::C:
      return OutcomeDistribution::make(OutcomeKind::NegBinNegatives, design.size, theta,
                                       complement);
  }
  throw Error(ErrorCode::InvalidInput, "unknown model");
}

double expected_tests(const Design& design, double p) {
  require_probability(p, "p");
  const double c = static_cast<double>(design.size);
  switch (design.model) {
    case Model::A:
      return c;
    case Model::B: {
      const double theta = success_prob(design.k, p);
      if (theta == 0.0) {
        throw Error(ErrorCode::InfiniteExpectation, "E(N) is infinite under model b at p = 0");
      }
      return c / theta;
    }
    case Model::C: {
      const double qk = pool_negative_prob(design.k, p);
      if (qk == 0.0) {
        throw Error(ErrorCode::InfiniteExpectation, "E(N) is infinite under model c at p = 1");
      }
      return c / qk;
    }
  }
  throw Error(ErrorCode::InvalidInput, "unknown model");
}

Count select_c(Model model, int k, double p, const Budget& budget) {
  if (model == Model::A) {
    throw Error(ErrorCode::InvalidInput, "select_c applies to models b and c only");
  }
  if (k < 2) {
    throw Error(ErrorCode::InvalidInput, "pool size k must be >= 2");
  }
  require_open_probability(p, "p");
  // Each of the c stopping events costs 1/rate tests on average.
  const double rate = model == Model::B ? success_prob(k, p) : pool_negative_prob(k, p);
  const auto cost = [&](Count c) { return static_cast<double>(c) / rate; };

  Count c = static_cast<Count>(std::floor(budget.target_en * rate));
  // The product above can land one off an exact integer; settle on the
  // contract E_c(N) <= target < E_{c+1}(N) directly.
  while (cost(c + 1) <= budget.target_en) ++c;
  while (c >= 1 && cost(c) > budget.target_en) --c;
  if (c < 1) {
    throw Error(ErrorCode::InfeasibleDesign,
                "model " + std::string(1, model_letter(model)) + " with k = " + std::to_string(k) +
                    " needs E(N) = " + std::to_string(cost(1)) + " for c = 1, above the budget " +
                    std::to_string(budget.target_en));
  }
  return c;
}

}  // namespace poolest
