#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fracrd/config.hpp"
#include "fracrd/stepper.hpp"

namespace fracrd {

enum class TableId { T1, T2 };
enum class Budget { Fast, Full };

std::string to_string(TableId id);
TableId table_from_string(const std::string& name);
std::string to_string(Budget b);
Budget budget_from_string(const std::string& name);

/// Relative deviation allowed between a computed and a published norm.
inline constexpr double kTableTolerance = 5e-3;

/// One published steady-state Brusselator configuration (a = 2, b = 1,
/// Dirichlet on (-1, 1)^2, h_t = 1e-2, u0_i = (1 - x)^{s_i} (1 - y)^{s_i}).
struct TableCell {
  TableId table = TableId::T1;
  double s1 = 0.0, s2 = 0.0, d1 = 0.0, d2 = 0.0;
  double h_x = 1e-2;
  std::size_t L = 1;
  double reference_u1 = 0.0;  ///< published ||u1||_inf
  double reference_u2 = 0.0;  ///< published ||u2||_inf

  /// Interior nodes per axis: h_x = 2 / (K + 1).
  std::size_t modes() const;
  std::string label() const;
};

/// Fast: the h_x = 1e-2 row of both blocks. Full: all four rows of both blocks.
std::vector<TableCell> table_cells(TableId id, Budget budget);

/// The cell as a run spec (steady_tol 1e-10); `modes` overrides the grid size.
RunSpec table_cell_spec(const TableCell& cell, std::optional<std::size_t> modes = std::nullopt);

struct TableRowResult {
  TableCell cell;
  std::string status;
  std::string message;
  double u1 = 0.0;
  double u2 = 0.0;
  double deviation_u1 = 0.0;  ///< |computed - reference| / reference
  double deviation_u2 = 0.0;
  bool passed = false;
  RunSummary summary;
};

struct TableOptions {
  unsigned threads = 1;
  /// When set, each cell writes final.csv and summary.json into its own subdirectory.
  std::optional<std::filesystem::path> out_dir;
};

/// Runs every cell to steady state. A failing cell is reported and the
/// remaining cells still run.
std::vector<TableRowResult> reproduce_table(TableId id, Budget budget, const TableOptions& options = {});

TableRowResult run_table_cell(const TableCell& cell, const TableOptions& options = {});

std::string format_table(const std::vector<TableRowResult>& rows);

/// Zero-reaction run against the exact semigroup on a 1D Dirichlet grid.
struct HeatConvergenceRow {
  double h_t = 0.0;
  double error = 0.0;  ///< max-norm error at t_final
  std::optional<double> ratio;  ///< previous error / this error
  double seconds = 0.0;
};

struct HeatConvergenceStudy {
  double s = 0.5;
  std::size_t K = 128;
  double t_final = 1.0;
  std::vector<HeatConvergenceRow> rows;
};

/// Initial data e_1 + 0.5 e_4 on (0, pi).
HeatConvergenceStudy heat_convergence(double s, std::size_t K, const std::vector<double>& time_steps,
                                      double t_final = 1.0, double d = 1.0);

}  // namespace fracrd
