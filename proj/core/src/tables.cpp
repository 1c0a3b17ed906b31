#include "poolest/tables.hpp"

#include <cstdio>
#include <string>

namespace poolest {

TableId parse_table_id(std::string_view text) {
  if (text == "rb25") return TableId::RB25;
  if (text == "rb100") return TableId::RB100;
  if (text == "mse25") return TableId::MSE25;
  if (text == "mse100") return TableId::MSE100;
  throw Error(ErrorCode::InvalidInput, "unknown table '" + std::string(text) + "'");
}

std::string_view table_id_name(TableId id) noexcept {
  switch (id) {
    case TableId::RB25: return "rb25";
    case TableId::RB100: return "rb100";
    case TableId::MSE25: return "mse25";
    case TableId::MSE100: return "mse100";
  }
  return "unknown";
}

TableSpec table_spec(TableId id) {
  TableSpec spec;
  spec.id = id;
  spec.p_grid = {0.01, 0.05, 0.1, 0.2, 0.3, 0.5};
  spec.target_en = (id == TableId::RB25 || id == TableId::MSE25) ? 25.0 : 100.0;
  spec.epsilon = 1e-6;
  spec.k_range = KRange{2, 50};

  auto& rows = spec.rows;
  for (Model m : {Model::A, Model::B, Model::C}) rows.push_back(Estimator::mle(m));
  for (Model m : {Model::A, Model::B, Model::C}) rows.push_back(Estimator::burrows(m));
  for (Model m : {Model::B, Model::C}) {
    for (double p0 : {0.01, 0.1, 0.5}) rows.push_back(Estimator::pt_tuned(Family::PTC, m, p0));
  }
  rows.push_back(Estimator::gart(Model::B));
  rows.push_back(Estimator::gart(Model::C));
  if (id == TableId::MSE25 || id == TableId::MSE100) rows.push_back(Estimator::degroot());
  return spec;
}

std::vector<TableCell> build_table(const TableSpec& spec, const PTOptions& pt,
                                   const CellCallback& on_cell) {
  SearchOptions options;
  options.k_range = spec.k_range;
  options.eval.epsilon = spec.epsilon;
  options.pt = pt;
  options.pt.eval.epsilon = spec.epsilon;
  const Budget budget(spec.target_en);

  std::vector<TableCell> cells;
  cells.reserve(spec.rows.size() * spec.p_grid.size());
  for (const Estimator& est : spec.rows) {
    for (double p : spec.p_grid) {
      cells.push_back(TableCell{est, p, spec.target_en, best_k(est, p, budget, options)});
      if (on_cell) on_cell(cells.back());
    }
  }
  return cells;
}

std::string row_name(const Estimator& est) {
  static constexpr const char* names[] = {"MLE", "Burrows", "PT_alpha", "PT_beta",
                                          "PT_C", "Gart",    "Degroot"};
  std::string out = names[static_cast<int>(est.family)];
  if (is_pt(est.family) && est.p0) out += "[p0=" + format_sig6(*est.p0) + "]";
  return out;
}

std::string format_sig6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::string render_csv(std::span<const TableCell> cells) {
  std::string out(kTableCsvHeader);
  out += '\n';
  for (const TableCell& cell : cells) {
    const EvalResult& r = cell.outcome.result;
    out += row_name(cell.estimator);
    out += ',';
    out += model_letter(cell.estimator.model);
    for (double v : {cell.p, cell.target_en}) {
      out += ',';
      out += format_sig6(v);
    }
    out += ',' + std::to_string(cell.outcome.k_star);
    out += ',' + std::to_string(cell.outcome.c_star);
    for (double v : {r.expected_n, r.bias, r.rel_bias_pct, r.mse, r.mse_x1e4}) {
      out += ',';
      out += format_sig6(v);
    }
    out += ',' + std::to_string(r.truncation_bound);
    out += ',' + format_sig6(r.tail_mass);
    out += ',' + std::to_string(r.clamp_count);
    out += '\n';
  }
  return out;
}

}  // namespace poolest
