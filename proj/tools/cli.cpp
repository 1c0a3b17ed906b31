#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "poolest/design_search.hpp"
#include "poolest/designs.hpp"
#include "poolest/estimators.hpp"
#include "poolest/evaluation.hpp"
#include "poolest/montecarlo.hpp"
#include "poolest/tables.hpp"

namespace poolest::cli {

using nlohmann::json;

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InfeasibleDesign:
    case ErrorCode::NoFeasibleDesign:
    case ErrorCode::InfiniteExpectation:
    case ErrorCode::IntractableSupport:
      return kExitInfeasible;
    case ErrorCode::DegenerateEstimator:
      return kExitDegenerateEstimator;
    case ErrorCode::Io:
      return kExitIo;
    case ErrorCode::InvalidInput:
    case ErrorCode::DomainError:
    case ErrorCode::InvalidCombination:
    case ErrorCode::DegenerateDistribution:
    case ErrorCode::Singularity:
      return kExitInvalidInput;
  }
  return kExitInternal;
}

namespace {

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json to_json(const EvalResult& r) {
  return json{{"bias", r.bias},
              {"rel_bias_pct", r.rel_bias_pct},
              {"mse", r.mse},
              {"mse_x1e4", r.mse_x1e4},
              {"expected_n", r.expected_n},
              {"truncation_bound", r.truncation_bound},
              {"tail_mass", r.tail_mass},
              {"clamp_count", r.clamp_count}};
}

json to_json(const PTParams& p) {
  return json{{"alpha", p.alpha}, {"beta", p.beta}, {"achieved_mse", p.achieved_mse}, {"p0", p.p0}};
}

json to_json(const SearchOutcome& s) {
  json skipped = json::array();
  for (const SkippedK& sk : s.skipped_k) {
    skipped.push_back(
        json{{"k", sk.k}, {"reason", std::string(error_code_name(sk.reason))}, {"detail", sk.detail}});
  }
  json j{{"k_star", s.k_star},
         {"c_star", s.c_star},
         {"feasible_k_count", s.feasible_k_count},
         {"skipped_k", skipped},
         {"result", to_json(s.result)}};
  j["pt_params"] = s.pt_params ? to_json(*s.pt_params) : json(nullptr);
  return j;
}

json to_json(const SimSummary& s) {
  return json{{"emp_bias", s.emp_bias},
              {"emp_mse", s.emp_mse},
              {"se_bias", s.se_bias ? json(*s.se_bias) : json(nullptr)},
              {"se_mse", s.se_mse ? json(*s.se_mse) : json(nullptr)},
              {"cap_hits", s.cap_hits},
              {"replicates", s.replicates},
              {"mean_tests", s.mean_tests},
              {"cap_flagged", s.cap_flagged}};
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

// Flags shared by the subcommands that name one estimator.
struct EstimatorArgs {
  std::string family;
  std::string model;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> p0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--estimator", family,
                    "mle | burrows | gart | degroot | pt_alpha | pt_beta | pt_c")
        ->required();
    cmd->add_option("--model", model, "sampling model: a | b | c")->required();
    cmd->add_option("--alpha", alpha, "shrinkage constant alpha in [0, 1] (PT families)");
    cmd->add_option("--beta", beta, "shift constant beta >= 1 (PT families)");
    cmd->add_option("--p0", p0, "prior upper bound used to tune PT constants");
  }

  Estimator build() const {
    const Family f = parse_family(family);
    Estimator e = Estimator::make(f, parse_model(model));
    if (alpha) e.alpha = *alpha;
    if (beta) e.beta = *beta;
    e.p0 = p0;
    validate(e);
    return e;
  }
};

// Flags shared by the subcommands that name one design.
struct DesignArgs {
  int k = 0;
  std::optional<Count> n;
  std::optional<Count> c;

  void attach(CLI::App* cmd) {
    cmd->add_option("--k", k, "pool size (>= 2)")->required();
    cmd->add_option("--n", n, "number of pools (model a)");
    cmd->add_option("--c", c, "stopping count (models b and c)");
  }

  Design build(Model model) const {
    const std::optional<Count>& size = model == Model::A ? n : c;
    if (!size) {
      throw Error(ErrorCode::InvalidInput,
                  model == Model::A ? "model a needs --n" : "models b and c need --c");
    }
    return Design::make(model, k, *size);
  }
};

// Fills alpha/beta of a PT estimator tuned at p0 for the given design.
std::optional<PTParams> tune_if_requested(Estimator& est, const Design& design,
                                          const PTOptions& pt) {
  if (!is_pt(est.family) || !est.p0) return std::nullopt;
  const PTParams params =
      optimize_pt(pt_family_of(est.family), est.model, design.k, design.size, *est.p0, pt);
  est.alpha = params.alpha;
  est.beta = params.beta;
  return params;
}

// Opened before any work so an unwritable path fails fast.
std::ofstream open_output(const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  return file;
}

void write_text(std::ofstream& file, const std::string& path, const std::string& text) {
  file << text;
  file.flush();
  if (!file) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
}

void report(std::ostream& err, std::string_view code, const std::string& message) {
  err << json{{"error", std::string(code)}, {"message", message}}.dump() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prevalence estimation from pooled tests under fixed and inverse binomial plans"};
  app.require_subcommand(1);

  // estimate
  EstimatorArgs est_args;
  DesignArgs design_args;
  Count count = 0;
  double beta_max = PTOptions{}.beta_max;
  auto* estimate_cmd = app.add_subcommand("estimate", "point estimate from one observed count");
  est_args.attach(estimate_cmd);
  design_args.attach(estimate_cmd);
  estimate_cmd->add_option("--count", count, "observed x, y or z")->required();
  estimate_cmd->add_option("--beta-max", beta_max, "upper end of the beta box when tuning");

  // evaluate
  EstimatorArgs eval_est;
  DesignArgs eval_design;
  double eval_p = 0.0;
  double eval_eps = EvalOptions{}.epsilon;
  double eval_beta_max = PTOptions{}.beta_max;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "exact bias and MSE of one design at p");
  eval_est.attach(evaluate_cmd);
  eval_design.attach(evaluate_cmd);
  evaluate_cmd->add_option("--p", eval_p, "true prevalence")->required();
  evaluate_cmd->add_option("--epsilon", eval_eps, "tail mass left out of the sums");
  evaluate_cmd->add_option("--beta-max", eval_beta_max, "upper end of the beta box when tuning");

  // search
  EstimatorArgs search_est;
  double search_p = 0.0;
  double search_en = 0.0;
  SearchOptions search_opts;
  auto* search_cmd = app.add_subcommand("search", "MSE-minimising pool size under a budget");
  search_est.attach(search_cmd);
  search_cmd->add_option("--p", search_p, "true prevalence")->required();
  search_cmd->add_option("--en", search_en, "expected-test budget E(N)")->required();
  search_cmd->add_option("--kmin", search_opts.k_range.lo, "smallest pool size");
  search_cmd->add_option("--kmax", search_opts.k_range.hi, "largest pool size");
  search_cmd->add_option("--epsilon", search_opts.eval.epsilon, "tail mass left out of the sums");
  search_cmd->add_option("--beta-max", search_opts.pt.beta_max, "upper end of the beta box");

  // ptopt
  std::string pt_family;
  std::string pt_model;
  int pt_k = 0;
  Count pt_c = 0;
  double pt_p0 = 0.0;
  PTOptions pt_opts;
  auto* ptopt_cmd = app.add_subcommand("ptopt", "tune shrinkage constants at a prior bound p0");
  ptopt_cmd->add_option("--family", pt_family, "alpha | beta | c")->required();
  ptopt_cmd->add_option("--model", pt_model, "b | c")->required();
  ptopt_cmd->add_option("--k", pt_k, "pool size")->required();
  ptopt_cmd->add_option("--c", pt_c, "stopping count")->required();
  ptopt_cmd->add_option("--p0", pt_p0, "prior upper bound on p")->required();
  ptopt_cmd->add_option("--beta-max", pt_opts.beta_max, "upper end of the beta box");
  ptopt_cmd->add_option("--stages", pt_opts.stages, "refinement stages");
  ptopt_cmd->add_option("--points", pt_opts.points_per_axis, "grid points per axis per stage");
  ptopt_cmd->add_option("--epsilon", pt_opts.eval.epsilon, "tail mass left out of the sums");

  // simulate
  EstimatorArgs sim_est;
  DesignArgs sim_design;
  double sim_p = 0.0;
  SimConfig sim_cfg;
  double sim_beta_max = PTOptions{}.beta_max;
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo bias and MSE");
  sim_est.attach(simulate_cmd);
  sim_design.attach(simulate_cmd);
  simulate_cmd->add_option("--p", sim_p, "true prevalence")->required();
  simulate_cmd->add_option("--reps", sim_cfg.replicates, "replicates");
  simulate_cmd->add_option("--seed", sim_cfg.seed, "master seed")->required();
  simulate_cmd->add_option("--max-steps", sim_cfg.max_steps, "pooled-test cap per replicate");
  simulate_cmd->add_option("--beta-max", sim_beta_max, "upper end of the beta box when tuning");

  // table
  std::string table_name;
  std::string table_out;
  std::optional<double> table_eps;
  std::optional<int> table_kmax;
  double table_beta_max = PTOptions{}.beta_max;
  auto* table_cmd = app.add_subcommand("table", "regenerate a comparison table as CSV");
  table_cmd->add_option("--table", table_name, "rb25 | rb100 | mse25 | mse100")->required();
  table_cmd->add_option("--out", table_out, "output CSV path, or - for stdout")->required();
  table_cmd->add_option("--epsilon", table_eps, "tail mass left out of the sums");
  table_cmd->add_option("--kmax", table_kmax, "largest pool size");
  table_cmd->add_option("--beta-max", table_beta_max, "upper end of the beta box for PT rows");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      report(err, error_code_name(ErrorCode::InvalidInput), e.what());
      return kExitInvalidInput;
    }

    if (*estimate_cmd) {
      Estimator est = est_args.build();
      const Design design = design_args.build(est.model);
      PTOptions pt;
      pt.beta_max = beta_max;
      const auto tuned = tune_if_requested(est, design, pt);
      const Estimate e = estimate(est, design, count);
      double en = HUGE_VAL;
      try {
        en = expected_tests(design, e.value);
      } catch (const Error&) {
        // Infinite at the boundary; reported as null.
      }
      json j{{"estimator", std::string(family_name(est.family))},
             {"model", std::string(1, model_letter(est.model))},
             {"k", design.k},
             {"size", design.size},
             {"count", count},
             {"estimate", e.value},
             {"clamped", e.clamped},
             {"expected_n_at_estimate", nullable(en)}};
      if (is_pt(est.family)) {
        j["alpha"] = est.alpha;
        j["beta"] = est.beta;
      }
      if (tuned) j["pt_params"] = to_json(*tuned);
      emit(out, j);
      return kExitOk;
    }

    if (*evaluate_cmd) {
      Estimator est = eval_est.build();
      const Design design = eval_design.build(est.model);
      PTOptions pt;
      pt.beta_max = eval_beta_max;
      pt.eval.epsilon = eval_eps;
      tune_if_requested(est, design, pt);
      EvalOptions opts;
      opts.epsilon = eval_eps;
      json j = to_json(evaluate(est, design, eval_p, opts));
      j["k"] = design.k;
      j["size"] = design.size;
      emit(out, j);
      return kExitOk;
    }

    if (*search_cmd) {
      const Estimator est = search_est.build();
      search_opts.pt.eval.epsilon = search_opts.eval.epsilon;
      emit(out, to_json(best_k(est, search_p, Budget(search_en), search_opts)));
      return kExitOk;
    }

    if (*ptopt_cmd) {
      const PTParams params = optimize_pt(parse_pt_family(pt_family), parse_model(pt_model), pt_k,
                                          pt_c, pt_p0, pt_opts);
      emit(out, to_json(params));
      return kExitOk;
    }

    if (*simulate_cmd) {
      Estimator est = sim_est.build();
      const Design design = sim_design.build(est.model);
      PTOptions pt;
      pt.beta_max = sim_beta_max;
      tune_if_requested(est, design, pt);
      json j = to_json(simulate_estimator(est, design, sim_p, sim_cfg));
      j["seed"] = sim_cfg.seed;
      emit(out, j);
      return kExitOk;
    }

    if (*table_cmd) {
      TableSpec spec = table_spec(parse_table_id(table_name));
      if (table_eps) spec.epsilon = *table_eps;
      if (table_kmax) spec.k_range.hi = *table_kmax;
      PTOptions pt;
      pt.beta_max = table_beta_max;
      if (table_out == "-") {
        out << render_csv(build_table(spec, pt));
      } else {
        std::ofstream file = open_output(table_out);
        const std::vector<TableCell> cells = build_table(spec, pt);
        write_text(file, table_out, render_csv(cells));
        emit(out, json{{"table", std::string(table_id_name(spec.id))},
                       {"rows", cells.size()},
                       {"out", table_out}});
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    report(err, error_code_name(e.code()), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    report(err, "INTERNAL_ERROR", e.what());
    return kExitInternal;
  }
  return kExitInvalidInput;
}

}  // namespace poolest::cli
