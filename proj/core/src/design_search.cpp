#include "poolest/design_search.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace poolest {

PTFamily pt_family_of(Family family) {
  switch (family) {
    case Family::PTAlpha: return PTFamily::Alpha;
    case Family::PTBeta: return PTFamily::Beta;
    case Family::PTC: return PTFamily::C;
    default: break;
  }
  throw Error(ErrorCode::InvalidInput, "not a shrinkage estimator family");
}

Family family_of(PTFamily family) noexcept {
  switch (family) {
    case PTFamily::Alpha: return Family::PTAlpha;
    case PTFamily::Beta: return Family::PTBeta;
    case PTFamily::C: return Family::PTC;
  }
  return Family::PTC;
}

PTFamily parse_pt_family(std::string_view text) {
  if (text == "alpha") return PTFamily::Alpha;
  if (text == "beta") return PTFamily::Beta;
  if (text == "c" || text == "C") return PTFamily::C;
  throw Error(ErrorCode::InvalidInput, "unknown shrinkage family '" + std::string(text) + "'");
}

namespace {

// MSE at p0 of one PT family as a function of (alpha, beta), with the
// support weights computed once.
class PTObjective {
 public:
  PTObjective(PTFamily family, Model model, int k, Count c, double p0, const EvalOptions& eval)
      : family_(family), model_(model), k_(k), c_(static_cast<double>(c)), p0_(p0) {
    if (model == Model::A) {
      throw Error(ErrorCode::InvalidCombination, "shrinkage estimators need model b or c");
    }
    const Design design = Design::make(model, k, c);
    const EvalSupport support = eval_support(design, p0, eval);
    weights_.resize(static_cast<std::size_t>(support.truncated.bound) + 1);
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      weights_[i] = pmf(support.dist, static_cast<Count>(i));
    }
    denom_.resize(weights_.size());
    ratio_.resize(weights_.size());
    root_.resize(weights_.size());
  }

  // Scores every alpha in `alphas` at a fixed beta into `out`.
  void score(double beta, const std::vector<double>& alphas, std::vector<double>& out) {
    const double numer = family_ == PTFamily::Alpha ? c_ : c_ + 1.0;
    const double shift = family_ == PTFamily::Alpha ? 0.0 : beta;
    for (std::size_t i = 0; i < ratio_.size(); ++i) {
      denom_[i] = static_cast<double>(i) + c_ + shift;
      ratio_[i] = numer / denom_[i];
    }
    out.assign(alphas.size(), 0.0);
    if (model_ == Model::C) {
      // p_hat = 1 - s * r with s = alpha^(1/k), r = ratio^(1/k), so the MSE is
      // a quadratic in s; centred moments of r keep it free of cancellation.
      double w = 0.0, wr = 0.0;
      for (std::size_t i = 0; i < ratio_.size(); ++i) {
        root_[i] = std::exp(std::log(ratio_[i]) / k_);
        w += weights_[i];
        wr += weights_[i] * root_[i];
      }
      const double mean = wr / w;
      double dev = 0.0, var = 0.0;
      for (std::size_t i = 0; i < root_.size(); ++i) {
        const double e = root_[i] - mean;
        dev += weights_[i] * e;
        var += weights_[i] * e * e;
      }
      const double q0 = 1.0 - p0_;
      for (std::size_t a = 0; a < alphas.size(); ++a) {
        const double s = alphas[a] > 0.0 ? std::exp(std::log(alphas[a]) / k_) : 0.0;
        const double centre = q0 - s * mean;
        out[a] = w * centre * centre - 2.0 * s * centre * dev + s * s * var;
      }
      return;
    }
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      const double alpha = alphas[a];
      double s = 0.0;
      const double scaled = alpha * numer;
      for (std::size_t i = 0; i < ratio_.size(); ++i) {
        // Same arithmetic as the estimator: 1 - alpha*ratio = (d - alpha*m)/d.
        const double inner = (denom_[i] - scaled) / denom_[i];
        const double est = inner <= 0.0 ? 1.0 : -std::expm1(std::log(inner) / k_);
        const double d = est - p0_;
        s += weights_[i] * d * d;
      }
      out[a] = s;
    }
  }

 private:
  PTFamily family_;
  Model model_;
  int k_;
  double c_;
  double p0_;
  std::vector<double> weights_;
  std::vector<double> denom_;
  std::vector<double> ratio_;
  std::vector<double> root_;
};

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + step * i;
  v.back() = hi;
  return v;
}

struct Incumbent {
  double alpha = 1.0;
  double beta = 1.0;
  double mse = HUGE_VAL;
};

// Betas ascending, alphas descending, strict improvement only: ties resolve
// to the smaller beta and then the larger alpha.
void scan_grid(PTObjective& objective, const std::vector<double>& alphas_ascending,
               const std::vector<double>& betas_ascending, Incumbent& best) {
  std::vector<double> alphas(alphas_ascending.rbegin(), alphas_ascending.rend());
  std::vector<double> scores;
  for (double beta : betas_ascending) {
    objective.score(beta, alphas, scores);
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      if (scores[a] < best.mse) best = Incumbent{alphas[a], beta, scores[a]};
    }
  }
}

void check_pt_args(Model model, int k, Count c, double p0, double beta_max) {
  if (model == Model::A) {
    throw Error(ErrorCode::InvalidCombination, "shrinkage estimators need model b or c");
  }
  if (k < 2 || c < 1) throw Error(ErrorCode::InvalidInput, "need k >= 2 and c >= 1");
  require_open_probability(p0, "p0");
  if (!(beta_max >= 1.0)) throw Error(ErrorCode::InvalidInput, "beta_max must be >= 1");
}

PTParams finish(PTFamily family, Model model, int k, Count c, double p0, const Incumbent& best,
                const EvalOptions& eval) {
  const Estimator est = Estimator::make(family_of(family), model, best.alpha, best.beta);
  const EvalResult exact = evaluate(est, Design::make(model, k, c), p0, eval);
  return PTParams{best.alpha, best.beta, exact.mse, p0};
}

}  // namespace

PTParams optimize_pt(PTFamily family, Model model, int k, Count c, double p0,
                     const PTOptions& options) {
  check_pt_args(model, k, c, p0, options.beta_max);
  if (options.stages < 1 || options.points_per_axis < 2) {
    throw Error(ErrorCode::InvalidInput, "need at least one stage and two points per axis");
  }
  PTObjective objective(family, model, k, c, p0, options.eval);
  const bool uses_alpha = family != PTFamily::Beta;
  const bool uses_beta = family != PTFamily::Alpha;
  const int n = options.points_per_axis;

  // The beta axis is gridded in log(beta): the MSE surface is sharp near
  // beta = 1 and flat far out, so even spacing would waste most of the grid.
  const double u_max = std::log(options.beta_max);
  double a_lo = 0.0, a_hi = 1.0;
  double u_lo = 0.0, u_hi = u_max;
  Incumbent best;
  double best_u = 0.0;
  for (int stage = 0; stage < options.stages; ++stage) {
    const std::vector<double> alphas = uses_alpha ? linspace(a_lo, a_hi, n) : std::vector{1.0};
    std::vector<double> us = uses_beta ? linspace(u_lo, u_hi, n) : std::vector{0.0};
    std::vector<double> betas(us.size());
    for (std::size_t i = 0; i < us.size(); ++i) {
      betas[i] = us[i] == 0.0 ? 1.0 : us[i] == u_max ? options.beta_max : std::exp(us[i]);
    }
    const Incumbent before = best;
    scan_grid(objective, alphas, betas, best);
    if (best.beta != before.beta || stage == 0) {
      best_u = us[static_cast<std::size_t>(
          std::find(betas.begin(), betas.end(), best.beta) - betas.begin())];
    }
    if (uses_alpha) {
      const double da = (a_hi - a_lo) / (n - 1);
      a_lo = std::max(0.0, best.alpha - da);
      a_hi = std::min(1.0, best.alpha + da);
    }
    if (uses_beta) {
      const double du = (u_hi - u_lo) / (n - 1);
      u_lo = std::max(0.0, best_u - du);
      u_hi = std::min(u_max, best_u + du);
    }
  }
  return finish(family, model, k, c, p0, best, options.eval);
}

PTParams scan_pt(PTFamily family, Model model, int k, Count c, double p0,
                 const std::vector<double>& alphas, const std::vector<double>& betas,
                 const EvalOptions& eval) {
  check_pt_args(model, k, c, p0, 1.0);
  PTObjective objective(family, model, k, c, p0, eval);
  std::vector<double> a = family == PTFamily::Beta ? std::vector{1.0} : alphas;
  std::vector<double> b = family == PTFamily::Alpha ? std::vector{1.0} : betas;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  Incumbent best;
  scan_grid(objective, a, b, best);
  return finish(family, model, k, c, p0, best, eval);
}

Design design_for_budget(Model model, int k, double p, const Budget& budget) {
  if (model == Model::A) {
    return Design::fixed(static_cast<Count>(std::floor(budget.target_en)), k);
  }
  return Design::make(model, k, select_c(model, k, p, budget));
}

SearchOutcome best_k(const Estimator& est, double p, const Budget& budget,
                     const SearchOptions& options) {
  validate(est);
  require_open_probability(p, "p");
  const KRange range = options.k_range;
  if (range.lo < 2 || range.hi < range.lo) {
    throw Error(ErrorCode::InvalidInput, "k range must satisfy 2 <= lo <= hi");
  }
  const bool tuned = is_pt(est.family) && est.p0.has_value();

  SearchOutcome out;
  bool have = false;
  for (int k = range.lo; k <= range.hi; ++k) {
    try {
      const Design design = design_for_budget(est.model, k, p, budget);
      Estimator candidate = est;
      std::optional<PTParams> params;
      if (tuned) {
        params = optimize_pt(pt_family_of(est.family), est.model, k, design.size, *est.p0,
                             options.pt);
        candidate.alpha = params->alpha;
        candidate.beta = params->beta;
      }
      const EvalResult r = evaluate(candidate, design, p, options.eval);
      ++out.feasible_k_count;
      if (!have || r.mse < out.result.mse) {
        have = true;
        out.k_star = k;
        out.c_star = design.size;
        out.result = r;
        out.pt_params = params;
      }
    } catch (const Error& e) {
      switch (e.code()) {
        case ErrorCode::InfeasibleDesign:
        case ErrorCode::DegenerateEstimator:
        case ErrorCode::IntractableSupport:
          out.skipped_k.push_back(SkippedK{k, e.code(), e.what()});
          break;
        default:
          throw;
      }
    }
  }
  if (!have) {
    throw Error(ErrorCode::NoFeasibleDesign,
                "no pool size in [" + std::to_string(range.lo) + ", " + std::to_string(range.hi) +
                    "] yields a usable design for " + label(est));
  }
  return out;
}

}  // namespace poolest
