#ifndef POOLEST_TABLES_HPP
#define POOLEST_TABLES_HPP

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "poolest/design_search.hpp"

namespace poolest {

/// Relative-bias and MSE comparison tables at E(N) = 25 and 100.
enum class TableId { RB25, RB100, MSE25, MSE100 };

TableId parse_table_id(std::string_view text);
std::string_view table_id_name(TableId id) noexcept;

struct TableSpec {
  TableId id = TableId::RB25;
  std::vector<double> p_grid;
  double target_en = 25.0;
  std::vector<Estimator> rows;  // output order
  double epsilon = 1e-6;
  KRange k_range;
};

/// p in {0.01, 0.05, 0.1, 0.2, 0.3, 0.5}, epsilon 1e-6, k in [2, 50]. Rows:
/// MLE a/b/c, Burrows a/b/c, PT_C under b and c tuned at p0 = 0.01, 0.1, 0.5,
/// Gart b/c, and for the MSE tables Degroot c.
TableSpec table_spec(TableId id);

struct TableCell {
  Estimator estimator;
  double p = 0.0;
  double target_en = 0.0;
  SearchOutcome outcome;
};

using CellCallback = std::function<void(const TableCell&)>;

/// Runs best_k for every (row, p) cell in row-major order. `pt` controls the
/// tuning of PT rows; its truncation epsilon is taken from the spec.
std::vector<TableCell> build_table(const TableSpec& spec, const PTOptions& pt = {},
                                   const CellCallback& on_cell = {});

/// Row name without the model, e.g. "MLE" or "PT_C[p0=0.1]".
std::string row_name(const Estimator& est);

/// %.6g in the C locale.
std::string format_sig6(double value);

inline constexpr std::string_view kTableCsvHeader =
    "estimator,model,p,target_en,k_star,c_star,actual_en,bias,rel_bias_pct,mse,mse_x1e4,"
    "truncation_bound,tail_mass,clamp_count";

/// Header plus one '\n'-terminated line per cell.
std::string render_csv(std::span<const TableCell> cells);

}  // namespace poolest

#endif  // POOLEST_TABLES_HPP
