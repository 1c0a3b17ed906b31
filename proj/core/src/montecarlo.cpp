#include "poolest/montecarlo.hpp"

#include <cmath>

#include "poolest/error.hpp"
#include "poolest/summation.hpp"

namespace poolest {

std::mt19937_64 replicate_stream(std::uint64_t seed, std::uint64_t replicate) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replicate),
                    static_cast<std::uint32_t>(replicate >> 32)};
  return std::mt19937_64(seq);
}

bool draw_unit(std::mt19937_64& rng, double p) {
  // 53-bit uniform on [0, 1); spelled out so streams are reproducible across
  // standard libraries.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return u < p;
}

bool draw_pool(std::mt19937_64& rng, int k, double p) {
  bool positive = false;
  for (int i = 0; i < k; ++i) positive = draw_unit(rng, p) || positive;
  return positive;
}

SimDraw simulate_once(const Design& design, double p, std::mt19937_64& rng, Count max_steps) {
  require_probability(p, "p");
  if (max_steps < 1) throw Error(ErrorCode::InvalidInput, "max_steps must be >= 1");
  SimDraw out;
  switch (design.model) {
    case Model::A:
      for (Count i = 0; i < design.size; ++i) {
        if (draw_pool(rng, design.k, p)) ++out.count;
      }
      out.tests = design.size;
      return out;
    case Model::B:
    case Model::C: {
      // B stops on the c-th positive and reports negatives; C the reverse.
      const bool stop_on_positive = design.model == Model::B;
      Count stops = 0;
      while (stops < design.size) {
        if (out.tests == max_steps) {
          out.cap_hit = true;
          return out;
        }
        ++out.tests;
        const bool positive = draw_pool(rng, design.k, p);
        if (positive == stop_on_positive) {
          ++stops;
        } else {
          ++out.count;
        }
      }
      return out;
    }
  }
  return out;
}

namespace {

SimSummary summarize(std::vector<double>& dev, Count cap_hits, double mean_tests) {
  const Count n = static_cast<Count>(dev.size());
  SimSummary s;
  s.replicates = n;
  s.cap_hits = cap_hits;
  s.mean_tests = mean_tests;
  const Count attempted = n + cap_hits;
  s.cap_flagged = attempted > 0 && static_cast<double>(cap_hits) >
                                       kCapHitTolerance * static_cast<double>(attempted);
  if (n == 0) return s;

  std::vector<double> sq(dev.size());
  for (std::size_t i = 0; i < dev.size(); ++i) sq[i] = dev[i] * dev[i];
  const double nn = static_cast<double>(n);
  s.emp_bias = pairwise_sum(dev) / nn;
  s.emp_mse = pairwise_sum(sq) / nn;
  if (n < 2) return s;

  // Centred second moments, each summed pairwise in replicate order.
  for (std::size_t i = 0; i < dev.size(); ++i) {
    const double a = dev[i] - s.emp_bias;
    const double b = sq[i] - s.emp_mse;
    dev[i] = a * a;
    sq[i] = b * b;
  }
  s.se_bias = std::sqrt(pairwise_sum(dev) / (nn - 1.0) / nn);
  s.se_mse = std::sqrt(pairwise_sum(sq) / (nn - 1.0) / nn);
  return s;
}

}  // namespace

std::vector<SimSummary> simulate_estimators(std::span<const Estimator> ests, const Design& design,
                                            double p, const SimConfig& cfg) {
  require_probability(p, "p");
  if (cfg.replicates < 1) throw Error(ErrorCode::InvalidInput, "replicates must be >= 1");
  // Construction validates each estimator against the design.
  for (const Estimator& e : ests) EstimateSequence(e, design);

  std::vector<std::vector<double>> dev(ests.size());
  for (auto& d : dev) d.reserve(static_cast<std::size_t>(cfg.replicates));
  Count cap_hits = 0;
  std::vector<double> tests;
  tests.reserve(static_cast<std::size_t>(cfg.replicates));

  for (Count r = 0; r < cfg.replicates; ++r) {
    std::mt19937_64 rng = replicate_stream(cfg.seed, static_cast<std::uint64_t>(r));
    const SimDraw draw = simulate_once(design, p, rng, cfg.max_steps);
    if (draw.cap_hit) {
      ++cap_hits;
      continue;
    }
    tests.push_back(static_cast<double>(draw.tests));
    for (std::size_t e = 0; e < ests.size(); ++e) {
      dev[e].push_back(estimate(ests[e], design, draw.count).value - p);
    }
  }

  const double mean_tests =
      tests.empty() ? 0.0 : pairwise_sum(tests) / static_cast<double>(tests.size());
  std::vector<SimSummary> out;
  out.reserve(ests.size());
  for (auto& d : dev) out.push_back(summarize(d, cap_hits, mean_tests));
  return out;
}

SimSummary simulate_estimator(const Estimator& est, const Design& design, double p,
                              const SimConfig& cfg) {
  return simulate_estimators(std::span<const Estimator>(&est, 1), design, p, cfg).front();
}

}  // namespace poolest
