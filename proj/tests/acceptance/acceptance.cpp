// Acceptance report: one PASS/FAIL line per criterion, with indented detail
// lines underneath. Exits 0 once every criterion has been evaluated; with
// --strict the exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cli.hpp>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "poolest/design_search.hpp"
#include "poolest/evaluation.hpp"
#include "poolest/montecarlo.hpp"
#include "poolest/summation.hpp"
#include "poolest/tables.hpp"
#include "reference_tables.hpp"

using namespace poolest;

namespace {

// Tolerances.
constexpr double kTableAbsTol = 0.002;         // table units
constexpr double kTableMinPassRate = 0.95;
constexpr double kPtRelTol = 0.10;             // PT cells at p = p0
constexpr double kDegrootBiasTol = 1e-5;
constexpr double kDegrootEpsilon = 1e-8;
constexpr double kBurrowsRatioMax = 0.45;
constexpr double kMleRatioMin = 0.45;
constexpr double kBiasOrderEpsilon = 1e-12;
constexpr Count kMcReplicates = 1'000'000;
constexpr std::uint64_t kMcSeed = 20240917;
constexpr double kMcSigmas = 3.0;
constexpr double kMcExactEpsilon = 1e-10;
constexpr double kIdentityDegrootTol = 1e-14;
constexpr double kIdentityGartTol = 1e-14;
constexpr double kIdentityNormTol = 1e-12;

const std::vector<double> kGrid = {0.01, 0.05, 0.1, 0.2, 0.3, 0.5};

int g_failed = 0;

void verdict(int id, bool ok, const std::string& title, const std::string& summary) {
  std::printf("[%s] criterion %d: %s -- %s\n", ok ? "PASS" : "FAIL", id, title.c_str(),
              summary.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failed;
}

void note(const std::string& line) { std::printf("    %s\n", line.c_str()); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::size_t grid_index(double p) {
  return static_cast<std::size_t>(std::find(kGrid.begin(), kGrid.end(), p) - kGrid.begin());
}

// Best-k outcomes keyed by (label, p) for one budget.
using CellMap = std::map<std::pair<std::string, double>, SearchOutcome>;

CellMap run_rows(double en, const std::vector<Estimator>& rows) {
  TableSpec spec = table_spec(en == 25.0 ? TableId::MSE25 : TableId::MSE100);
  spec.rows = rows;
  CellMap out;
  for (const TableCell& c : build_table(spec)) out[{label(c.estimator), c.p}] = c.outcome;
  return out;
}

std::vector<Estimator> deterministic_rows() {
  std::vector<Estimator> rows;
  for (Model m : {Model::A, Model::B, Model::C}) rows.push_back(Estimator::mle(m));
  for (Model m : {Model::A, Model::B, Model::C}) rows.push_back(Estimator::burrows(m));
  rows.push_back(Estimator::gart(Model::B));
  rows.push_back(Estimator::gart(Model::C));
  rows.push_back(Estimator::degroot());
  return rows;
}

std::vector<Estimator> pt_rows() {
  std::vector<Estimator> rows;
  for (Model m : {Model::B, Model::C}) {
    for (double p0 : {0.01, 0.1, 0.5}) rows.push_back(Estimator::pt_tuned(Family::PTC, m, p0));
  }
  return rows;
}

Estimator estimator_for(const std::string& lab) {
  for (const Estimator& e : deterministic_rows()) {
    if (label(e) == lab) return e;
  }
  for (const Estimator& e : pt_rows()) {
    if (label(e) == lab) return e;
  }
  throw Error(ErrorCode::InvalidInput, "no estimator labelled " + lab);
}

double table_value(const EvalResult& r, bool mse) { return mse ? r.mse_x1e4 : r.rel_bias_pct; }

struct Reference {
  const std::vector<ReferenceRow>* rows;
  double en;
  bool mse;
  const char* name;
};

const std::vector<Reference> kReferences = {
    {&kRelBias25, 25.0, false, "relative bias, E(N)=25"},
    {&kRelBias100, 100.0, false, "relative bias, E(N)=100"},
    {&kMse25, 25.0, true, "MSE x1e4, E(N)=25"},
    {&kMse100, 100.0, true, "MSE x1e4, E(N)=100"},
};

// ---------------------------------------------------------------------------

void criterion_tables(const std::map<double, CellMap>& det) {
  int total = 0, hits = 0, explained = 0;
  std::vector<std::string> notes;
  for (const Reference& ref : kReferences) {
    for (const ReferenceRow& row : *ref.rows) {
      if (row.label.rfind("PT_", 0) == 0) continue;
      const Estimator est = estimator_for(row.label);
      for (std::size_t i = 0; i < kGrid.size(); ++i) {
        const double p = kGrid[i];
        const SearchOutcome& out = det.at(ref.en).at({row.label, p});
        const double ours = table_value(out.result, ref.mse);
        const double want = row.values[i];
        ++total;
        if (std::fabs(ours - want) <= kTableAbsTol) {
          ++hits;
          continue;
        }
        // Look for the design that the reference value corresponds to.
        std::string why = "no feasible k reproduces it";
        for (int k = 2; k <= 50; ++k) {
          try {
            const Design d = design_for_budget(est.model, k, p, Budget(ref.en));
            const EvalResult r = evaluate(est, d, p);
            if (std::fabs(table_value(r, ref.mse) - want) <= kTableAbsTol) {
              why = "reference value is the design k=" + std::to_string(k) +
                    ", c=" + std::to_string(d.size) + " (MSE x1e4 " + fmt("%.4f", r.mse_x1e4) +
                    " vs minimum " + fmt("%.4f", out.result.mse_x1e4) + "), not the MSE argmin";
              ++explained;
              break;
            }
          } catch (const Error&) {
          }
        }
        char buf[320];
        std::snprintf(buf, sizeof buf, "%s %s p=%g: ours %.4f (k=%d, c=%lld) vs %.4f; %s",
                      ref.name, row.label.c_str(), p, ours, out.k_star,
                      static_cast<long long>(out.c_star), want, why.c_str());
        notes.push_back(buf);
      }
    }
  }
  const double rate = static_cast<double>(hits) / total;
  const bool ok = rate >= kTableMinPassRate && explained == total - hits;
  char summary[200];
  std::snprintf(summary, sizeof summary,
                "%d/%d cells within %.3f (%.1f%%, need %.0f%%); %d/%d misses traced to a "
                "non-argmin reference design",
                hits, total, kTableAbsTol, 100 * rate, 100 * kTableMinPassRate, explained,
                total - hits);
  verdict(1, ok, "table reproduction, deterministic estimators", summary);
  for (const auto& n : notes) note(n);
}

void criterion_pt(const std::map<double, CellMap>& det, const std::map<double, CellMap>& pt) {
  int cells = 0, close = 0, pattern = 0, reference_pattern = 0, rows = 0;
  std::vector<std::string> notes;
  std::vector<std::string> rb_notes;
  for (const Reference& ref : kReferences) {
    for (const ReferenceRow& row : *ref.rows) {
      if (row.label.rfind("PT_", 0) != 0) continue;
      const Estimator est = estimator_for(row.label);
      const double p0 = *est.p0;
      const SearchOutcome& at_p0 = pt.at(ref.en).at({row.label, p0});
      const double ours = table_value(at_p0.result, ref.mse);
      const double want = row.values[grid_index(p0)];
      const double rel = std::fabs(ours - want) / std::fabs(want);
      char buf[320];
      std::snprintf(buf, sizeof buf,
                    "%s %s at p=p0: ours %.4f (k=%d, c=%lld, alpha=%.6f, beta=%.4f) vs %.4f, "
                    "rel. diff %.1f%%",
                    ref.name, row.label.c_str(), ours, at_p0.k_star,
                    static_cast<long long>(at_p0.c_star), at_p0.pt_params->alpha,
                    at_p0.pt_params->beta, want, 100 * rel);
      if (!ref.mse) {
        rb_notes.push_back(buf);
        continue;
      }
      ++cells;
      if (rel <= kPtRelTol) {
        ++close;
      } else {
        notes.push_back(std::string(buf) + (ours < want ? "; our optimum has the smaller MSE"
                                                        : "; our optimum has the larger MSE"));
      }

      // Pattern: relative to the best deterministic estimator of the same
      // model, the MSE is no worse at p0 and inflated at the far end of the grid.
      const double far = p0 >= 0.3 ? kGrid.front() : kGrid.back();
      const auto ratio = [&](double p, bool reference) {
        double best = HUGE_VAL;
        for (const ReferenceRow& other : *ref.rows) {
          if (other.label.rfind("PT_", 0) == 0) continue;
          const Estimator e = estimator_for(other.label);
          if (e.model != est.model) continue;
          const double v = reference ? other.values[grid_index(p)]
                                 : det.at(ref.en).at({other.label, p}).result.mse_x1e4;
          best = std::min(best, v);
        }
        const double mine = reference ? row.values[grid_index(p)]
                                  : pt.at(ref.en).at({row.label, p}).result.mse_x1e4;
        return mine / best;
      };
      ++rows;
      const bool holds = ratio(p0, false) <= 1.0 && ratio(far, false) > std::max(1.0, ratio(p0, false));
      const bool reference_holds = ratio(p0, true) <= 1.0 && ratio(far, true) > std::max(1.0, ratio(p0, true));
      pattern += holds ? 1 : 0;
      reference_pattern += reference_holds ? 1 : 0;
      if (!holds) {
        std::snprintf(buf, sizeof buf,
                      "%s %s pattern: MSE ratio to best deterministic %.3f at p0, %.3f at p=%g",
                      ref.name, row.label.c_str(), ratio(p0, false), ratio(far, false), far);
        notes.push_back(buf);
      }
    }
  }
  const bool ok = close == cells && pattern == rows;
  char summary[240];
  std::snprintf(summary, sizeof summary,
                "%d/%d MSE cells at p=p0 within %.0f%%; pattern (no worse than the best "
                "deterministic estimator at p0, inflated at the far end) holds in %d/%d rows "
                "(reference tables: %d/%d)",
                close, cells, 100 * kPtRelTol, pattern, rows, reference_pattern, rows);
  verdict(2, ok, "table reproduction, PT_C estimators", summary);
  for (const auto& n : notes) note(n);
  note("relative-bias cells at p=p0 (informational, near-zero values make a relative "
       "tolerance ill-conditioned):");
  for (const auto& n : rb_notes) note("  " + n);
}

void criterion_degroot() {
  double worst = 0.0;
  int n = 0;
  for (double p : {0.01, 0.05, 0.1, 0.3, 0.5}) {
    for (Count c : {1, 2, 5, 20}) {
      for (int k : {2, 5, 20}) {
        const EvalResult r = evaluate(Estimator::degroot(), Design::inverse_negative(c, k), p,
                                      EvalOptions{kDegrootEpsilon});
        worst = std::max(worst, std::fabs(r.bias));
        ++n;
      }
    }
  }
  verdict(3, worst <= kDegrootBiasTol, "Degroot unbiasedness",
          std::to_string(n) + " designs, max |bias| " + fmt("%.3e", worst) + " (limit " +
              fmt("%.0e", kDegrootBiasTol) + ")");
}

void criterion_bias_order() {
  double burrows_max = 0.0, mle_min = HUGE_VAL;
  std::vector<std::string> outside;
  for (Model m : {Model::B, Model::C}) {
    for (double p : {0.05, 0.2}) {
      for (int k : {2, 10}) {
        for (Count c : {10, 20, 40}) {
          const auto bias = [&](const Estimator& e, Count cc) {
            return evaluate(e, Design::make(m, k, cc), p, EvalOptions{kBiasOrderEpsilon}).bias;
          };
          const double b = std::fabs(bias(Estimator::burrows(m), 2 * c) /
                                     bias(Estimator::burrows(m), c));
          const double l = std::fabs(bias(Estimator::mle(m), 2 * c) / bias(Estimator::mle(m), c));
          burrows_max = std::max(burrows_max, b);
          mle_min = std::min(mle_min, l);
          if (b > kBurrowsRatioMax || l < kMleRatioMin) {
            char buf[200];
            std::snprintf(buf, sizeof buf,
                          "model %c p=%g k=%d c=%lld (theta %.3f): Burrows %.4f, MLE %.4f",
                          m == Model::B ? 'b' : 'c', p, k, static_cast<long long>(c),
                          1.0 - std::pow(1.0 - p, k), b, l);
            outside.push_back(buf);
          }
        }
      }
    }
  }
  verdict(4, burrows_max <= kBurrowsRatioMax && mle_min >= kMleRatioMin,
          "bias order of Burrows vs MLE",
          "max Burrows |bias(2c)/bias(c)| " + fmt("%.4f", burrows_max) + " (<= 0.45), min MLE " +
              fmt("%.4f", mle_min) + " (>= 0.45)");
  for (const std::string& o : outside) note("outside the asymptotic bands: " + o);
  if (!outside.empty()) {
    note("the first-order bias term stops dominating when almost every pool is positive");
  }
}

void criterion_montecarlo() {
  const auto t0 = std::chrono::steady_clock::now();
  int checks = 0, ok_checks = 0;
  double worst = 0.0;
  std::vector<std::string> notes;
  for (Model m : {Model::A, Model::B, Model::C}) {
    for (double p : {0.05, 0.2}) {
      const SearchOutcome s = best_k(Estimator::mle(m), p, Budget(25));
      const Design d = Design::make(m, s.k_star, s.c_star);
      std::vector<Estimator> ests = {Estimator::mle(m), Estimator::burrows(m)};
      if (m != Model::A) ests.push_back(Estimator::gart(m));
      if (m == Model::C) ests.push_back(Estimator::degroot());
      SimConfig cfg;
      cfg.replicates = kMcReplicates;
      cfg.seed = kMcSeed;
      const std::vector<SimSummary> sims = simulate_estimators(ests, d, p, cfg);
      for (std::size_t i = 0; i < ests.size(); ++i) {
        const EvalResult exact = evaluate(ests[i], d, p, EvalOptions{kMcExactEpsilon});
        const double zb = std::fabs(sims[i].emp_bias - exact.bias) / *sims[i].se_bias;
        const double zm = std::fabs(sims[i].emp_mse - exact.mse) / *sims[i].se_mse;
        for (double z : {zb, zm}) {
          ++checks;
          ok_checks += z <= kMcSigmas ? 1 : 0;
          worst = std::max(worst, z);
        }
        char buf[200];
        std::snprintf(buf, sizeof buf, "%s k=%d size=%lld p=%g: |z| bias %.2f, mse %.2f",
                      label(ests[i]).c_str(), d.k, static_cast<long long>(d.size), p, zb, zm);
        notes.push_back(buf);
      }
    }
  }
  const double secs = seconds_since(t0);
  verdict(5, ok_checks == checks, "Monte Carlo vs exact evaluation",
          std::to_string(ok_checks) + "/" + std::to_string(checks) + " moments within 3 SE at " +
              std::to_string(kMcReplicates) + " replicates, max |z| " + fmt("%.2f", worst) +
              ", " + fmt("%.0f", secs) + " s");
  for (const auto& n : notes) note(n);
}

void criterion_identities() {
  bool alpha_ok = true;
  for (Count c : {1, 3, 17}) {
    for (int k : {2, 8, 50}) {
      const Design d = Design::inverse_positive(c, k);
      for (Count y = 0; y <= 1000; ++y) {
        alpha_ok &= estimate(Estimator::pt_alpha(Model::B, 1.0), d, y).value ==
                    estimate(Estimator::mle(Model::B), d, y).value;
      }
    }
  }
  double gart_err = 0.0;
  for (int k = 2; k <= 50; ++k) {
    for (Count c = 1; c <= 1000; c = c * 2 + 1) {
      const long double r = (k - 1.0L) / (2.0L * k * c + k - 1.0L);
      const double want = static_cast<double>(1.0L - std::pow(r, 1.0L / k));
      gart_err = std::max(gart_err, std::fabs(gart_zero_value(Model::B, k, c) - want) / want);
    }
  }
  double degroot_err = 0.0;
  for (Count c : {1, 4, 30}) {
    for (int k : {2, 5, 20}) {
      const Design d = Design::inverse_negative(c, k);
      EstimateSequence seq(Estimator::degroot(), d);
      for (Count z = 0; z <= 12'000; z += 37) {
        degroot_err = std::max(degroot_err, std::fabs(seq.at(z).value -
                                                      estimate(Estimator::degroot(), d, z).value));
      }
    }
  }
  double norm_err = 0.0;
  for (double theta : {0.01, 0.3, 0.9}) {
    for (Count size : {1, 5, 40}) {
      for (auto kind : {OutcomeKind::FixedBinomial, OutcomeKind::NegBinPositives,
                        OutcomeKind::NegBinNegatives}) {
        const auto dist = OutcomeDistribution::make(kind, size, theta);
        const TruncatedSupport t = truncate_support(dist, 1e-6);
        CompensatedSum s;
        for (Count i = 0; i <= t.bound; ++i) s.add(pmf(dist, i));
        norm_err = std::max(norm_err, std::fabs(s.value() + t.tail_mass - 1.0));
      }
    }
  }
  const bool ok = alpha_ok && gart_err <= kIdentityGartTol && degroot_err <= kIdentityDegrootTol &&
                  norm_err <= kIdentityNormTol;
  verdict(6, ok, "identity suite",
          std::string("PT_alpha(1) == MLE(b) ") + (alpha_ok ? "exact" : "BROKEN") +
              "; Gart(b) zero value rel. err " + fmt("%.1e", gart_err) +
              "; Degroot incremental vs fresh " + fmt("%.1e", degroot_err) +
              "; pmf mass + tail - 1 " + fmt("%.1e", norm_err));
}

std::string run_cli(std::vector<std::string> args, int& code) {
  args.insert(args.begin(), "poolest");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return out.str();
}

void criterion_determinism() {
  const auto t0 = std::chrono::steady_clock::now();
  int c1 = 0, c2 = 0, c3 = 0, c4 = 0;
  const std::vector<std::string> table = {"table", "--table", "rb25", "--out", "-"};
  const std::string a = run_cli(table, c1);
  const std::string b = run_cli(table, c2);
  const std::vector<std::string> sim = {"simulate", "--estimator", "gart", "--model", "c",
                                        "--k",      "4",           "--c",  "6",       "--p",
                                        "0.1",      "--seed",      "7",    "--reps",  "200000"};
  const std::string x = run_cli(sim, c3);
  const std::string y = run_cli(sim, c4);
  const bool ok = c1 == 0 && c2 == 0 && c3 == 0 && c4 == 0 && a == b && x == y && !a.empty();
  verdict(7, ok, "determinism",
          "table rb25 CSV " + std::string(a == b ? "byte-identical" : "DIFFERS") + " (" +
              std::to_string(a.size()) + " bytes); simulate JSON " +
              (x == y ? "byte-identical" : "DIFFERS") + "; " + fmt("%.0f", seconds_since(t0)) +
              " s");
}

}  // namespace

int main(int argc, char** argv) {
  const bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
  const auto t0 = std::chrono::steady_clock::now();
  std::map<double, CellMap> det, pt;
  for (double en : {25.0, 100.0}) {
    det[en] = run_rows(en, deterministic_rows());
    pt[en] = run_rows(en, pt_rows());
  }
  note("table cells computed in " + fmt("%.0f", seconds_since(t0)) + " s");

  criterion_tables(det);
  criterion_pt(det, pt);
  criterion_degroot();
  criterion_bias_order();
  criterion_montecarlo();
  criterion_identities();
  criterion_determinism();

  std::printf("acceptance complete: %d/7 criteria passed, %.0f s\n", 7 - g_failed,
              seconds_since(t0));
  return strict ? g_failed : 0;
}
